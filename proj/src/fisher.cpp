#include "sip/fisher.hpp"

#include <algorithm>
#include <cmath>

#include "sip/rng.hpp"

namespace sip {

void FeatureMatrix::validate() const {
    if (n() < 1) fail(ErrorCode::InvalidInput, "FeatureMatrix: need at least one row");
    if (d() < 2) fail(ErrorCode::InvalidInput, "FeatureMatrix: need d >= 2");
    if (!all_finite(rows)) fail(ErrorCode::InvalidInput, "FeatureMatrix: non-finite entries");
    if (labels) {
        if (labels->size() != n())
            fail(ErrorCode::ShapeError, "FeatureMatrix: label count != row count");
        for (int y : *labels)
            if (y != 1 && y != -1) fail(ErrorCode::LabelError, "FeatureMatrix: labels must be +-1");
    }
}

double quantile_type7(std::vector<double> values, double q) {
    if (values.empty()) fail(ErrorCode::InvalidInput, "quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) fail(ErrorCode::InvalidQuantile, "quantile: q outside [0,1]");
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values[0];
    double h = q * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo >= values.size() - 1) return values.back();
    double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

FisherEstimate empirical_fisher(const FeatureMatrix& f) {
    f.validate();
    std::size_t n = f.n(), d = f.d();
    Matrix g(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        const double* h = f.rows.row(r);
        for (std::size_t i = 0; i < d; ++i) {
            double hi = h[i];
            if (hi == 0.0) continue;
            double* gi = g.row(i);
            for (std::size_t j = 0; j < d; ++j) gi[j] += hi * h[j];
        }
    }
    double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < d * d; ++i) g.data()[i] *= inv;
    return FisherEstimate{std::move(g), n, std::nullopt, 0.0};
}

namespace {

std::vector<double> row_norms(const Matrix& rows) {
    std::vector<double> out(rows.rows());
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        const double* r = rows.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < rows.cols(); ++j) s += r[j] * r[j];
        out[i] = std::sqrt(s);
    }
    return out;
}

}  // namespace

ClipResult clip_features(const FeatureMatrix& f, double q, ClipMode mode) {
    f.validate();
    if (!(q > 0.0 && q <= 1.0)) fail(ErrorCode::InvalidQuantile, "clip_features: q outside (0,1]");
    ClipResult out;
    out.features = f;
    std::size_t n = f.n(), d = f.d();

    if (mode == ClipMode::NormClip) {
        std::vector<double> norms = row_norms(f.rows);
        double b = quantile_type7(norms, q);
        out.radius = b;
        for (std::size_t i = 0; i < n; ++i) {
            if (norms[i] > b && norms[i] > 0.0) {
                double s = b / norms[i];
                double* r = out.features.rows.row(i);
                for (std::size_t j = 0; j < d; ++j) r[j] *= s;
            }
        }
        return out;
    }

    // Winsorize: clamp each coordinate into its central-q quantile band.
    double lo_q = (1.0 - q) / 2.0;
    double hi_q = (1.0 + q) / 2.0;
    std::vector<double> col(n);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = f.rows(i, j);
        double lo = quantile_type7(col, lo_q);
        double hi = quantile_type7(col, hi_q);
        for (std::size_t i = 0; i < n; ++i)
            out.features.rows(i, j) = std::clamp(f.rows(i, j), lo, hi);
    }
    std::vector<double> norms = row_norms(out.features.rows);
    out.radius = *std::max_element(norms.begin(), norms.end());
    return out;
}

namespace {

Matrix half_fisher(const Matrix& rows, const std::vector<std::size_t>& idx) {
    std::size_t d = rows.cols();
    Matrix g(d, d);
    for (std::size_t r : idx) {
        const double* h = rows.row(r);
        for (std::size_t i = 0; i < d; ++i) {
            double hi = h[i];
            if (hi == 0.0) continue;
            double* gi = g.row(i);
            for (std::size_t j = 0; j < d; ++j) gi[j] += hi * h[j];
        }
    }
    double inv = 1.0 / static_cast<double>(idx.size());
    for (std::size_t i = 0; i < d * d; ++i) g.data()[i] *= inv;
    return g;
}

}  // namespace

DeltaEstimate split_half_delta(const FeatureMatrix& f, std::uint64_t seed, std::size_t n_splits) {
    f.validate();
    std::size_t n = f.n();
    if (n < 4) fail(ErrorCode::TooFewSamples, "split_half_delta: need n >= 4");
    if (n_splits < 1) fail(ErrorCode::InvalidInput, "split_half_delta: need at least one split");

    // Index groups: one per class when labels exist, else everything together.
    std::vector<std::vector<std::size_t>> groups;
    if (f.labels) {
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < n; ++i) ((*f.labels)[i] > 0 ? pos : neg).push_back(i);
        if (!pos.empty()) groups.push_back(std::move(pos));
        if (!neg.empty()) groups.push_back(std::move(neg));
    } else {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        groups.push_back(std::move(all));
    }

    DeltaEstimate out;
    out.n_splits = n_splits;
    out.per_split.reserve(n_splits);
    for (std::size_t s = 0; s < n_splits; ++s) {
        Rng rng(seed ^ static_cast<std::uint64_t>(s));
        std::vector<std::size_t> ha, hb;
        for (auto g : groups) {  // copy: shuffled per split
            rng.shuffle(g);
            // Alternate so odd groups donate the extra row to alternating halves.
            for (std::size_t i = 0; i < g.size(); ++i) ((i % 2 == 0) ? ha : hb).push_back(g[i]);
        }
        if (ha.empty() || hb.empty())
            fail(ErrorCode::TooFewSamples, "split_half_delta: degenerate split");
        Matrix ga = half_fisher(f.rows, ha);
        Matrix gb = half_fisher(f.rows, hb);
        out.per_split.push_back(0.5 * operator_norm(subtract(ga, gb)));
    }
    double sum = 0.0;
    for (double v : out.per_split) sum += v;
    out.value = sum / static_cast<double>(n_splits);
    return out;
}

DeltaEstimate exact_delta(const Matrix& gamma_hat, const Matrix& gamma) {
    if (!gamma_hat.same_shape(gamma)) fail(ErrorCode::ShapeError, "exact_delta: shapes differ");
    DeltaEstimate out;
    out.method = DeltaMethod::Exact;
    out.value = operator_norm(subtract(gamma_hat, gamma));
    return out;
}

double eigengap(const SpectralDecomposition& dec, std::size_t k) {
    std::size_t d = dec.eigenvalues.size();
    if (k < 1 || k >= d) fail(ErrorCode::InvalidRank, "eigengap: need 1 <= k < d");
    return std::max(0.0, dec.eigenvalues[k - 1] - dec.eigenvalues[k]);
}

Matrix ridge_regularize(const Matrix& m, double ridge) {
    if (m.rows() != m.cols()) fail(ErrorCode::ShapeError, "ridge_regularize: matrix must be square");
    if (!(ridge >= 0.0)) fail(ErrorCode::InvalidRidge, "ridge_regularize: ridge must be >= 0");
    Matrix out = m;
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, i) += ridge;
    return out;
}

}  // namespace sip
