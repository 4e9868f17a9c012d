#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sip/fisher.hpp"

namespace sip {

struct SipVerdict {
    double delta = 0.0;
    double gap = 0.0;
    double ratio = 0.0;  // delta/gap; +inf when gap == 0
    bool pass = false;   // strict: delta < gap
};

// Matrix-Bernstein plug-in parameters. v <= R * R always holds for estimates
// produced here (v <= max(B^2 lambda1, lambda1^2) <= (B^2 + lambda1)^2).
struct ConcentrationParams {
    double v = 0.0;           // ||E[Y^2]|| estimate
    double r = 0.0;           // B^2 + ||Gamma|| estimate
    std::size_t d = 0;        // ambient dimension
    double delta_conf = 0.1;  // confidence delta in (0,1)
    double b = 0.0;           // row-norm bound used
    bool degenerate = false;  // all-zero input forced an epsilon floor on r
};

struct MarginFit {
    double kappa = 0.0;
    double c = 0.0;
    double r_squared = 0.0;
    double fit_lo = 0.0;  // t-grid endpoints actually used
    double fit_hi = 0.0;
};

struct TailReport {
    double kurtosis = 0.0;    // max per-coordinate m4/m2^2
    double hill_index = 0.0;  // tail exponent estimate on row norms
    bool heavy = false;
};

struct SampleComplexity {
    std::uint64_t n_var = 0;
    std::uint64_t n_gap = 0;
    std::uint64_t n_min = 0;
    double n_var_raw = 0.0;  // un-ceiled; the exact-quadrupling law lives here
    double n_gap_raw = 0.0;
    std::optional<std::uint64_t> empirical_n_min;  // smallest n with t(delta,n) <= gap/2
};

struct RiskBound {
    double raw = 0.0;
    double clamped = 0.0;  // min(raw, 1), floored at 0
};

// Strict SIP test: pass iff delta < gap. Non-finite or negative inputs are
// InvalidInput; gap == 0 is legal and fails with ratio = +inf.
SipVerdict sip_verdict(double delta, double gap);

// t(delta) = sqrt(2 v log(2d/delta) / n) + 2 R log(2d/delta) / (3n), with
// d and delta taken from the params.
double bernstein_bound(const ConcentrationParams& params, std::uint64_t n);

// Plug-in (v, R) for the estimate's deviation: B = the estimate's clip radius
// when set, else the max row norm; R = B^2 + ||Gamma_hat||;
// v = ||(1/n) sum Y_i^2|| with Y_i = h_i h_i^T - Gamma_hat.
ConcentrationParams estimate_concentration_params(const FeatureMatrix& f,
                                                  const FisherEstimate& fisher,
                                                  double delta_conf = 0.1);

// Tsybakov exponent: least-squares fit of log P(|s| <= t) against log t over a
// geometric t-grid spanning the [5th, 50th] percentile of the margins.
MarginFit estimate_kappa(const std::vector<double>& margins, std::size_t grid_size = 20);

// C * ((1 + sqrt 2) * B * min(1, delta/gap))^kappa. gap = 0 saturates the
// ratio at 1; delta = 0 gives 0.
RiskBound risk_bound(double delta, double gap, double b, double kappa, double c);

// n_var = ceil(2 R^2 L / (9 v)), n_gap = ceil(32 v L / gap^2), L = log(2d/delta);
// n_min = max of the two. empirical_n_min searches the smallest n <= budget
// with bernstein_bound <= gap/2. gap <= 0 is InfeasibleGap.
SampleComplexity sample_complexity(double gap, const ConcentrationParams& params,
                                   std::uint64_t budget = 10'000'000);

// Heavy iff max per-coordinate kurtosis > kurt_threshold or the Hill tail
// index of the row norms drops below 4. The Hill slope uses the top
// ceil(hill_fraction * n) order statistics. Needs n >= 50.
TailReport heavy_tail_check(const FeatureMatrix& f, double kurt_threshold = 9.0,
                            double hill_fraction = 0.1);

}  // namespace sip
