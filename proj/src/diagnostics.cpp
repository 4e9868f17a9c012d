#include "sip/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sip {

SipVerdict sip_verdict(double delta, double gap) {
    if (!std::isfinite(delta) || !std::isfinite(gap))
        fail(ErrorCode::InvalidInput, "sip_verdict: non-finite input");
    if (delta < 0.0 || gap < 0.0) fail(ErrorCode::InvalidInput, "sip_verdict: negative input");
    SipVerdict v;
    v.delta = delta;
    v.gap = gap;
    v.ratio = gap > 0.0 ? delta / gap : std::numeric_limits<double>::infinity();
    v.pass = delta < gap;
    return v;
}

double bernstein_bound(const ConcentrationParams& params, std::uint64_t n) {
    if (!(params.delta_conf > 0.0 && params.delta_conf < 1.0))
        fail(ErrorCode::InvalidConfidence, "bernstein_bound: delta outside (0,1)");
    if (params.d < 1) fail(ErrorCode::InvalidInput, "bernstein_bound: d must be >= 1");
    if (n < 1) fail(ErrorCode::InvalidInput, "bernstein_bound: n must be >= 1");
    if (!(params.v >= 0.0) || !(params.r > 0.0) || !std::isfinite(params.v) ||
        !std::isfinite(params.r))
        fail(ErrorCode::InvalidInput, "bernstein_bound: need v >= 0 and R > 0, both finite");
    double l = std::log(2.0 * static_cast<double>(params.d) / params.delta_conf);
    double nn = static_cast<double>(n);
    return std::sqrt(2.0 * params.v * l / nn) + 2.0 * params.r * l / (3.0 * nn);
}

ConcentrationParams estimate_concentration_params(const FeatureMatrix& f,
                                                  const FisherEstimate& fisher,
                                                  double delta_conf) {
    if (f.n() < 1) fail(ErrorCode::TooFewSamples, "estimate_concentration_params: empty matrix");
    f.validate();
    if (!(delta_conf > 0.0 && delta_conf < 1.0))
        fail(ErrorCode::InvalidConfidence, "estimate_concentration_params: delta outside (0,1)");
    std::size_t n = f.n(), d = f.d();
    const Matrix& g = fisher.gamma;
    if (g.rows() != d || g.cols() != d)
        fail(ErrorCode::ShapeError, "estimate_concentration_params: operator dim != feature dim");
    double lam = operator_norm(g);

    double b = 0.0;
    if (fisher.clip_radius) {
        if (!(*fisher.clip_radius > 0.0) || !std::isfinite(*fisher.clip_radius))
            fail(ErrorCode::InvalidInput, "estimate_concentration_params: bad clip radius");
        b = *fisher.clip_radius;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double* r = f.rows.row(i);
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += r[j] * r[j];
            b = std::max(b, std::sqrt(s));
        }
    }

    // (1/n) sum Y_i^2 with Y_i = h_i h_i^T - G expands to
    // M2 - E G - G E + G^2 where M2 = (1/n) sum ||h_i||^2 h_i h_i^T and E is
    // the empirical second moment of f (M2 collapses to M2 - G^2 when E == G).
    Matrix m2(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        const double* h = f.rows.row(r);
        double ns = 0.0;
        for (std::size_t j = 0; j < d; ++j) ns += h[j] * h[j];
        for (std::size_t i = 0; i < d; ++i) {
            double w = ns * h[i];
            if (w == 0.0) continue;
            double* mi = m2.row(i);
            for (std::size_t j = 0; j < d; ++j) mi[j] += w * h[j];
        }
    }
    double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < d * d; ++i) m2.data()[i] *= inv;
    Matrix e = empirical_fisher(f).gamma;
    Matrix y2 = add(subtract(m2, add(matmul(e, g), matmul(g, e))), matmul(g, g));

    ConcentrationParams out;
    out.d = d;
    out.delta_conf = delta_conf;
    out.b = b;
    out.v = operator_norm(y2);
    out.r = b * b + lam;
    if (out.r <= 0.0) {  // all-zero features
        out.r = 1e-12;
        out.degenerate = true;
    }
    return out;
}

MarginFit estimate_kappa(const std::vector<double>& margins, std::size_t grid_size) {
    if (margins.size() < 50) fail(ErrorCode::TooFewSamples, "estimate_kappa: need >= 50 margins");
    if (grid_size < 3) fail(ErrorCode::InvalidInput, "estimate_kappa: grid too small");
    std::vector<double> ms = margins;
    for (double m : ms)
        if (!std::isfinite(m) || m < 0.0)
            fail(ErrorCode::InvalidInput, "estimate_kappa: margins must be finite and nonnegative");
    std::sort(ms.begin(), ms.end());
    if (ms.front() == ms.back())
        fail(ErrorCode::DegenerateMargins, "estimate_kappa: all margins identical");

    double lo = quantile_type7(ms, 0.05);
    double hi = quantile_type7(ms, 0.50);
    if (lo <= 0.0) {
        // Ties at zero: start from the smallest positive margin.
        auto it = std::upper_bound(ms.begin(), ms.end(), 0.0);
        if (it == ms.end()) fail(ErrorCode::DegenerateMargins, "estimate_kappa: margins all zero");
        lo = *it;
    }
    if (hi <= lo) fail(ErrorCode::DegenerateMargins, "estimate_kappa: degenerate fit range");

    MarginFit fit;
    fit.fit_lo = lo;
    fit.fit_hi = hi;

    double nn = static_cast<double>(ms.size());
    std::vector<double> xs, ys;
    xs.reserve(grid_size);
    ys.reserve(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        double frac = static_cast<double>(i) / static_cast<double>(grid_size - 1);
        double t = lo * std::pow(hi / lo, frac);
        auto count = std::upper_bound(ms.begin(), ms.end(), t) - ms.begin();
        double p = static_cast<double>(count) / nn;
        if (p <= 0.0) continue;
        xs.push_back(std::log(t));
        ys.push_back(std::log(p));
    }
    if (xs.size() < 3) fail(ErrorCode::DegenerateMargins, "estimate_kappa: empty fit grid");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) fail(ErrorCode::DegenerateMargins, "estimate_kappa: degenerate fit grid");
    fit.kappa = sxy / sxx;
    fit.c = std::exp(my - fit.kappa * mx);
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

RiskBound risk_bound(double delta, double gap, double b, double kappa, double c) {
    if (!std::isfinite(delta) || delta < 0.0 || !std::isfinite(gap) || gap < 0.0)
        fail(ErrorCode::InvalidInput, "risk_bound: delta and gap must be finite nonnegative");
    if (!(b > 0.0) || !std::isfinite(b))
        fail(ErrorCode::InvalidInput, "risk_bound: B must be positive");
    if (!(kappa > 0.0) || !std::isfinite(kappa) || !(c >= 0.0) || !std::isfinite(c))
        fail(ErrorCode::InvalidInput, "risk_bound: need kappa > 0 and C >= 0");
    RiskBound out;
    if (delta == 0.0) return out;  // zero error, zero bound
    // gap = 0 makes the ratio +inf; min(1, ratio) saturates at 1.
    double ratio = gap > 0.0 ? delta / gap : std::numeric_limits<double>::infinity();
    constexpr double kOnePlusSqrt2 = 2.414213562373095048801688724;
    double arg = kOnePlusSqrt2 * b * std::min(1.0, ratio);
    out.raw = c * std::pow(arg, kappa);
    out.clamped = std::clamp(out.raw, 0.0, 1.0);
    return out;
}

SampleComplexity sample_complexity(double gap, const ConcentrationParams& params,
                                   std::uint64_t budget) {
    if (!(gap > 0.0) || !std::isfinite(gap))
        fail(ErrorCode::InfeasibleGap, "sample_complexity: gap must be positive");
    if (!(params.delta_conf > 0.0 && params.delta_conf < 1.0))
        fail(ErrorCode::InvalidConfidence, "sample_complexity: delta outside (0,1)");
    if (!(params.v > 0.0) || !(params.r > 0.0))
        fail(ErrorCode::InvalidInput, "sample_complexity: v and R must be positive");

    double l = std::log(2.0 * static_cast<double>(params.d) / params.delta_conf);
    SampleComplexity out;
    out.n_var_raw = 2.0 * params.r * params.r * l / (9.0 * params.v);
    out.n_gap_raw = 32.0 * params.v * l / (gap * gap);
    out.n_var = static_cast<std::uint64_t>(std::ceil(out.n_var_raw));
    out.n_gap = static_cast<std::uint64_t>(std::ceil(out.n_gap_raw));
    out.n_var = std::max<std::uint64_t>(1, out.n_var);
    out.n_gap = std::max<std::uint64_t>(1, out.n_gap);
    out.n_min = std::max(out.n_var, out.n_gap);

    // Smallest n with t(delta, n) <= gap/2; the bound is decreasing in n.
    if (bernstein_bound(params, budget) <= 0.5 * gap) {
        std::uint64_t lo = 1, hi = budget;
        if (bernstein_bound(params, lo) <= 0.5 * gap) {
            out.empirical_n_min = lo;
        } else {
            while (lo + 1 < hi) {
                std::uint64_t mid = lo + (hi - lo) / 2;
                if (bernstein_bound(params, mid) <= 0.5 * gap)
                    hi = mid;
                else
                    lo = mid;
            }
            out.empirical_n_min = hi;
        }
    }
    return out;
}

TailReport heavy_tail_check(const FeatureMatrix& f, double kurt_threshold, double hill_fraction) {
    f.validate();
    std::size_t n = f.n(), d = f.d();
    if (n < 50) fail(ErrorCode::TooFewSamples, "heavy_tail_check: need n >= 50");
    if (!(hill_fraction > 0.0) || !(hill_fraction < 1.0))
        fail(ErrorCode::InvalidInput, "heavy_tail_check: hill_fraction outside (0,1)");

    TailReport out;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += f.rows(i, j);
        mean /= static_cast<double>(n);
        double m2 = 0.0, m4 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double c = f.rows(i, j) - mean;
            double c2 = c * c;
            m2 += c2;
            m4 += c2 * c2;
        }
        m2 /= static_cast<double>(n);
        m4 /= static_cast<double>(n);
        if (m2 > 0.0) out.kurtosis = std::max(out.kurtosis, m4 / (m2 * m2));
    }

    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = f.rows.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += r[j] * r[j];
        norms[i] = std::sqrt(s);
    }
    std::sort(norms.begin(), norms.end(), std::greater<double>());
    std::size_t k = static_cast<std::size_t>(
        std::ceil(hill_fraction * static_cast<double>(n)));
    k = std::min(k, n - 1);
    double ref = norms[k];
    if (ref > 0.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += std::log(norms[i] / ref);
        out.hill_index = s > 0.0 ? static_cast<double>(k) / s
                                 : std::numeric_limits<double>::infinity();
    } else {
        out.hill_index = std::numeric_limits<double>::infinity();
    }
    out.heavy = out.kurtosis > kurt_threshold || out.hill_index < 4.0;
    return out;
}

}  // namespace sip
