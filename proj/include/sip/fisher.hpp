#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sip/linalg.hpp"
#include "sip/spectral.hpp"

namespace sip {

// n x d feature rows plus optional +-1 labels.
struct FeatureMatrix {
    Matrix rows;                       // n x d
    std::optional<std::vector<int>> labels;

    std::size_t n() const { return rows.rows(); }
    std::size_t d() const { return rows.cols(); }

    void validate() const;  // finiteness, label values/length, d >= 2, n >= 1
};

struct FisherEstimate {
    Matrix gamma;       // d x d, PSD up to roundoff
    std::size_t n = 0;  // samples used; 0 marks an exact population operator
    std::optional<double> clip_radius;  // row-norm bound applied upstream
    double ridge = 0.0;
};

enum class DeltaMethod { SplitHalf, Exact };

struct DeltaEstimate {
    double value = 0.0;  // mean of per_split for SplitHalf; direct for Exact
    DeltaMethod method = DeltaMethod::SplitHalf;
    std::vector<double> per_split;  // one entry per split (empty for Exact)
    std::size_t n_splits = 0;
};

enum class ClipMode { NormClip, Winsorize };

struct ClipResult {
    FeatureMatrix features;
    double radius = 0.0;  // norm bound B actually enforced
};

// Type-7 quantile (linear interpolation between order statistics) of the
// values; q in [0, 1].
double quantile_type7(std::vector<double> values, double q);

// Gamma_hat = (1/n) sum h_i h_i^T.
FisherEstimate empirical_fisher(const FeatureMatrix& f);

// NormClip: rows with norm above the q-quantile B are rescaled to norm B.
// Winsorize: each coordinate is clamped into its [(1-q)/2, (1+q)/2] quantile
// band; radius reports the max row norm afterwards. q in (0, 1] else
// InvalidQuantile.
ClipResult clip_features(const FeatureMatrix& f, double q, ClipMode mode = ClipMode::NormClip);

// Split-half deviation proxy: for each split, rows are partitioned into halves
// A/B (stratified by label when labels exist) and the split records
// 0.5 * ||Gamma_A - Gamma_B||_op. Deterministic: split s uses seed ^ s.
DeltaEstimate split_half_delta(const FeatureMatrix& f, std::uint64_t seed,
                               std::size_t n_splits = 8);

// ||Gamma_hat - Gamma||_op for synthetic checks where the population operator
// is known.
DeltaEstimate exact_delta(const Matrix& gamma_hat, const Matrix& gamma);

// lambda_k - lambda_{k+1}, clamped at 0 (roundoff can produce tiny negatives).
// 1 <= k < d else InvalidRank.
double eigengap(const SpectralDecomposition& dec, std::size_t k);

// M + ridge * I.
Matrix ridge_regularize(const Matrix& m, double ridge);

}  // namespace sip
