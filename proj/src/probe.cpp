#include "sip/probe.hpp"

#include <cmath>

namespace sip {

namespace {

void check_basis(const Matrix& u, std::size_t d) {
    if (u.rows() != d || u.cols() < 1 || u.cols() >= d)
        fail(ErrorCode::ShapeError, "fit_direction: subspace must be d x k with 1 <= k < d");
    Matrix g = gram(u, u);
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) {
            double want = i == j ? 1.0 : 0.0;
            if (std::fabs(g(i, j) - want) > 1e-8)
                fail(ErrorCode::InvalidInput, "fit_direction: basis is not orthonormal");
        }
}

}  // namespace

Probe fit_direction(const FeatureMatrix& f, const Matrix& subspace, double ridge) {
    f.validate();
    if (!f.labels) fail(ErrorCode::DegenerateLabels, "fit_direction: labels required");
    if (!(ridge >= 0.0)) fail(ErrorCode::InvalidRidge, "fit_direction: ridge must be >= 0");
    std::size_t n = f.n(), d = f.d(), k = subspace.cols();
    check_basis(subspace, d);

    std::size_t n_pos = 0, n_neg = 0;
    for (int y : *f.labels) (y > 0 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        fail(ErrorCode::DegenerateLabels, "fit_direction: both classes required");

    Probe p;
    p.subspace = subspace;

    // Projected class means and pooled within-class scatter.
    Vector mean_pos(k, 0.0), mean_neg(k, 0.0);
    Matrix g(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        const double* h = f.rows.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < d; ++l) s += subspace(l, j) * h[l];
            g(i, j) = s;
            ((*f.labels)[i] > 0 ? mean_pos : mean_neg)[j] += s;
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        mean_pos[j] /= static_cast<double>(n_pos);
        mean_neg[j] /= static_cast<double>(n_neg);
    }
    Matrix sw(k, k);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector& mu = (*f.labels)[i] > 0 ? mean_pos : mean_neg;
        for (std::size_t a = 0; a < k; ++a) {
            double da = g(i, a) - mu[a];
            for (std::size_t b = 0; b < k; ++b) sw(a, b) += da * (g(i, b) - mu[b]);
        }
    }
    for (std::size_t i = 0; i < k * k; ++i) sw.data()[i] /= static_cast<double>(n);
    for (std::size_t i = 0; i < k; ++i) sw(i, i) += ridge;

    Vector diff(k);
    for (std::size_t j = 0; j < k; ++j) diff[j] = mean_pos[j] - mean_neg[j];
    Vector a = solve_linear(sw, diff);
    double na = norm2(a);
    if (na < 1e-300) fail(ErrorCode::DegenerateLabels, "fit_direction: class means coincide");
    for (double& x : a) x /= na;

    double mid = 0.0;
    for (std::size_t j = 0; j < k; ++j) mid += a[j] * (mean_pos[j] + mean_neg[j]);
    p.direction = std::move(a);
    p.bias = -0.5 * mid;
    return p;
}

double score(const Probe& p, const double* h, std::size_t d) {
    if (d != p.subspace.rows()) fail(ErrorCode::ShapeError, "score: dimension mismatch");
    double s = p.bias;
    for (std::size_t j = 0; j < p.direction.size(); ++j) {
        double g = 0.0;
        for (std::size_t l = 0; l < d; ++l) g += p.subspace(l, j) * h[l];
        s += p.direction[j] * g;
    }
    return s;
}

double score(const Probe& p, const Vector& h) { return score(p, h.data(), h.size()); }

std::vector<double> score(const Probe& p, const FeatureMatrix& f) {
    f.validate();
    std::vector<double> out(f.n());
    for (std::size_t i = 0; i < f.n(); ++i) out[i] = score(p, f.rows.row(i), f.d());
    return out;
}

int classify(const Probe& p, const Vector& h) { return score(p, h) >= 0.0 ? 1 : -1; }

std::vector<int> classify(const Probe& p, const FeatureMatrix& f) {
    std::vector<double> s = score(p, f);
    std::vector<int> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] >= 0.0 ? 1 : -1;
    return out;
}

double disagreement_risk(const Probe& a, const Probe& b, const FeatureMatrix& f) {
    if (f.n() == 0) fail(ErrorCode::TooFewSamples, "disagreement_risk: empty sample");
    f.validate();
    std::size_t d = f.d(), n = f.n();
    std::size_t diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* h = f.rows.row(i);
        int ca = score(a, h, d) >= 0.0 ? 1 : -1;
        int cb = score(b, h, d) >= 0.0 ? 1 : -1;
        if (ca != cb) ++diff;
    }
    return static_cast<double>(diff) / static_cast<double>(n);
}

std::vector<double> margin_samples(const Probe& p, const FeatureMatrix& f) {
    f.validate();
    std::vector<double> out(f.n());
    for (std::size_t i = 0; i < f.n(); ++i) out[i] = std::fabs(score(p, f.rows.row(i), f.d()));
    return out;
}

}  // namespace sip
