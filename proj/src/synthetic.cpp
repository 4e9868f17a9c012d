#include "sip/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "sip/diagnostics.hpp"
#include "sip/rng.hpp"

namespace sip {

namespace {

// Salts so each experiment draws from its own stream of derived task seeds.
constexpr std::uint64_t kSubspaceSalt = 0x53554250aa11ULL;
constexpr std::uint64_t kPhaseSalt = 0x50484153bb22ULL;
constexpr std::uint64_t kClipSalt = 0x434c4950cc33ULL;
constexpr std::uint64_t kScaleSalt = 0x5343414cdd44ULL;
constexpr std::uint64_t kMarginSalt = 0x4d41524eee55ULL;
constexpr std::uint64_t kPilotSalt = 0x50494c4fff66ULL;
constexpr std::uint64_t kEvalIndex = 0x9e3779b9ULL;  // grid slot reserved for eval sets

double variance_factor(const SyntheticConfig& cfg) {
    return cfg.family == Family::StudentT ? cfg.nu / (cfg.nu - 2.0) : 1.0;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void percentile_bands(const std::vector<std::vector<double>>& per_seed, Vector& mean, Vector& lo,
                      Vector& hi) {
    std::size_t m = per_seed.size();
    mean.assign(m, 0.0);
    lo.assign(m, 0.0);
    hi.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (double v : per_seed[i]) s += v;
        mean[i] = s / static_cast<double>(per_seed[i].size());
        lo[i] = quantile_type7(per_seed[i], 0.10);
        hi[i] = quantile_type7(per_seed[i], 0.90);
    }
}

}  // namespace

void SyntheticConfig::validate() const {
    if (d < 2) fail(ErrorCode::InvalidInput, "SyntheticConfig: d must be at least 2");
    if (k < 1 || k >= d) fail(ErrorCode::InvalidRank, "SyntheticConfig: need 1 <= k < d");
    if (!(mean_scale >= 0.0) || !std::isfinite(mean_scale))
        fail(ErrorCode::InvalidInput, "SyntheticConfig: mean_scale must be nonnegative");
    if (scale_spectrum.size() != d)
        fail(ErrorCode::InvalidInput, "SyntheticConfig: scale_spectrum must have length d");
    for (std::size_t i = 0; i < d; ++i) {
        double s = scale_spectrum[i];
        if (!(s > 0.0) || !std::isfinite(s))
            fail(ErrorCode::InvalidInput, "SyntheticConfig: spectrum entries must be positive");
        if (i + 1 < d && scale_spectrum[i + 1] > s + 1e-12)
            fail(ErrorCode::InvalidInput, "SyntheticConfig: spectrum must be descending");
    }
    if (family == Family::StudentT && !(nu > 2.0))
        fail(ErrorCode::InfiniteVariance,
             "SyntheticConfig: Student-t needs nu > 2 for a finite second moment");
}

Matrix population_fisher(const SyntheticConfig& cfg) {
    cfg.validate();
    double fac = variance_factor(cfg);
    Matrix g(cfg.d, cfg.d);
    for (std::size_t j = 0; j < cfg.d; ++j) g(j, j) = fac * cfg.scale_spectrum[j];
    g(0, 0) += cfg.mean_scale * cfg.mean_scale;
    return g;
}

SpectralDecomposition population_decomposition(const SyntheticConfig& cfg) {
    return eigh(population_fisher(cfg));
}

double population_gap(const SyntheticConfig& cfg) {
    return eigengap(population_decomposition(cfg), cfg.k);
}

FeatureMatrix sample(const SyntheticConfig& cfg, std::size_t n, std::uint64_t seed) {
    cfg.validate();
    if (n < 1) fail(ErrorCode::InvalidInput, "sample: n must be at least 1");
    Rng rng(seed);
    FeatureMatrix f;
    f.rows = Matrix(n, cfg.d);
    std::vector<int> labels(n);
    std::vector<double> sd(cfg.d);
    for (std::size_t j = 0; j < cfg.d; ++j) sd[j] = std::sqrt(cfg.scale_spectrum[j]);
    for (std::size_t i = 0; i < n; ++i) {
        int y = rng.sign_label();
        labels[i] = y;
        double tail = 1.0;
        if (cfg.family == Family::StudentT) tail = std::sqrt(cfg.nu / rng.chi_square(cfg.nu));
        double* row = f.rows.row(i);
        for (std::size_t j = 0; j < cfg.d; ++j) row[j] = sd[j] * rng.normal() * tail;
        row[0] += y * cfg.mean_scale;
    }
    f.labels = std::move(labels);
    return f;
}

Probe bayes_probe(const SyntheticConfig& cfg) {
    cfg.validate();
    SpectralDecomposition dec = population_decomposition(cfg);
    if (eigengap(dec, cfg.k) <= 1e-12)
        fail(ErrorCode::DegenerateGap, "bayes_probe: population eigengap vanishes at k");
    Matrix u = top_k_subspace(dec, cfg.k);
    double fac = variance_factor(cfg);
    // Within-subspace covariance of the noise: U^T (fac diag(s)) U.
    Matrix cov(cfg.k, cfg.k);
    for (std::size_t a = 0; a < cfg.k; ++a)
        for (std::size_t b = 0; b < cfg.k; ++b) {
            double s = 0.0;
            for (std::size_t c = 0; c < cfg.d; ++c)
                s += u(c, a) * fac * cfg.scale_spectrum[c] * u(c, b);
            cov(a, b) = s;
        }
    Vector rhs(cfg.k);
    for (std::size_t a = 0; a < cfg.k; ++a) rhs[a] = cfg.mean_scale * u(0, a);
    Vector a = solve_linear(cov, rhs);
    double na = norm2(a);
    if (!(na > 0.0))
        fail(ErrorCode::DegenerateLabels, "bayes_probe: class mean projects to zero");
    for (double& v : a) v /= na;
    Probe p;
    p.subspace = std::move(u);
    p.direction = std::move(a);
    p.bias = 0.0;
    return p;
}

ExperimentSeries run_subspace_experiment(const SyntheticConfig& cfg,
                                         const std::vector<std::size_t>& n_grid,
                                         std::size_t seeds) {
    cfg.validate();
    if (n_grid.empty() || seeds < 1)
        fail(ErrorCode::InvalidInput, "run_subspace_experiment: empty grid or zero seeds");
    Matrix gamma_pop = population_fisher(cfg);
    SpectralDecomposition pop = eigh(gamma_pop);
    Matrix u_pop = top_k_subspace(pop, cfg.k);
    double gap = eigengap(pop, cfg.k);
    std::uint64_t master = splitmix64(cfg.seed ^ kSubspaceSalt);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(n_grid.size() * seeds);
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        for (std::size_t j = 0; j < seeds; ++j) {
            FeatureMatrix f = sample(cfg, n_grid[i], derive_seed(master, i, j));
            FisherEstimate est = empirical_fisher(f);
            double ratio = exact_delta(est.gamma, gamma_pop).value / gap;
            SpectralDecomposition dec = eigh(est.gamma);
            double sine = sin_theta(top_k_subspace(dec, cfg.k), u_pop).max_sine;
            pts.emplace_back(ratio, sine);
        }
    }
    std::sort(pts.begin(), pts.end());
    ExperimentSeries out;
    out.label = "subspace";
    out.n_seeds = seeds;
    out.x.reserve(pts.size());
    out.y_mean.reserve(pts.size());
    for (const auto& [x, y] : pts) {
        out.x.push_back(x);
        out.y_mean.push_back(y);
    }
    out.y_lo = out.y_mean;
    out.y_hi = out.y_mean;
    return out;
}

ExperimentSeries run_phase_experiment(const SyntheticConfig& cfg,
                                      const std::vector<std::size_t>& n_grid, std::size_t seeds,
                                      std::size_t eval_n) {
    cfg.validate();
    if (n_grid.empty() || seeds < 1 || eval_n < 1)
        fail(ErrorCode::InvalidInput, "run_phase_experiment: empty grid, zero seeds or eval set");
    Probe bayes = bayes_probe(cfg);
    const Matrix& u_pop = bayes.subspace;
    std::uint64_t master = splitmix64(cfg.seed ^ kPhaseSalt);
    std::vector<std::vector<double>> risks(n_grid.size());
    for (auto& r : risks) r.reserve(seeds);
    for (std::size_t j = 0; j < seeds; ++j) {
        FeatureMatrix eval = sample(cfg, eval_n, derive_seed(master, kEvalIndex, j));
        for (std::size_t i = 0; i < n_grid.size(); ++i) {
            FeatureMatrix train = sample(cfg, n_grid[i], derive_seed(master, i, j));
            SpectralDecomposition dec = eigh(empirical_fisher(train).gamma);
            Matrix u_hat = top_k_subspace(dec, cfg.k);
            // Transport the Bayes weights onto the estimated frame: with
            // U Q ~ U_hat, U^T h ~ Q U_hat^T h, so the direction becomes Q^T a.
            Vector a_hat = bayes.direction;
            try {
                Matrix q = procrustes_align(u_pop, u_hat);
                a_hat = matvec_transposed(q, bayes.direction);
            } catch (const Error&) {
                // Orthogonal estimate; keep the untransported weights.
            }
            double na = norm2(a_hat);
            if (na > 0.0)
                for (double& v : a_hat) v /= na;
            Probe plug;
            plug.subspace = u_hat;
            plug.direction = std::move(a_hat);
            plug.bias = 0.0;
            risks[i].push_back(disagreement_risk(plug, bayes, eval));
        }
    }
    ExperimentSeries out;
    out.label = "phase";
    out.n_seeds = seeds;
    out.x.reserve(n_grid.size());
    for (std::size_t n : n_grid) out.x.push_back(static_cast<double>(n));
    percentile_bands(risks, out.y_mean, out.y_lo, out.y_hi);
    return out;
}

ClippingSweep run_clipping_sweep(const SyntheticConfig& cfg, const std::vector<double>& q_grid,
                                 std::size_t n, std::size_t seeds) {
    cfg.validate();
    if (q_grid.size() < 1 || seeds < 1 || n < 1)
        fail(ErrorCode::InvalidInput, "run_clipping_sweep: empty grid, zero seeds or samples");
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        if (!(q_grid[i] > 0.0) || q_grid[i] > 1.0)
            fail(ErrorCode::InvalidQuantile, "run_clipping_sweep: q must lie in (0, 1]");
        if (i > 0 && q_grid[i] <= q_grid[i - 1])
            fail(ErrorCode::InvalidInput, "run_clipping_sweep: q grid must be ascending");
    }
    Matrix gamma_pop = population_fisher(cfg);
    Matrix u_pop = top_k_subspace(eigh(gamma_pop), cfg.k);
    std::uint64_t master = splitmix64(cfg.seed ^ kClipSalt);
    std::size_t m = q_grid.size();
    std::vector<std::vector<double>> ratio(m), sine(m);
    ClippingSweep out;
    out.per_seed_argmin.reserve(seeds);
    for (std::size_t j = 0; j < seeds; ++j) {
        // One draw per seed; every q re-clips the same data so per-seed curves
        // are comparable across the grid.
        FeatureMatrix f = sample(cfg, n, derive_seed(master, 0, j));
        std::size_t argmin = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            ClipResult clipped = clip_features(f, q_grid[i], ClipMode::NormClip);
            FisherEstimate est = empirical_fisher(clipped.features);
            SpectralDecomposition dec = eigh(est.gamma);
            double gap_hat = eigengap(dec, cfg.k);
            double r = gap_hat > 0.0 ? exact_delta(est.gamma, gamma_pop).value / gap_hat
                                     : std::numeric_limits<double>::infinity();
            ratio[i].push_back(r);
            sine[i].push_back(sin_theta(top_k_subspace(dec, cfg.k), u_pop).max_sine);
            if (r < best) {
                best = r;
                argmin = i;
            }
        }
        out.per_seed_argmin.push_back(argmin);
    }
    out.ratio.label = "clip-ratio";
    out.sine.label = "clip-sine";
    out.ratio.n_seeds = out.sine.n_seeds = seeds;
    out.ratio.x.assign(q_grid.begin(), q_grid.end());
    out.sine.x = out.ratio.x;
    percentile_bands(ratio, out.ratio.y_mean, out.ratio.y_lo, out.ratio.y_hi);
    percentile_bands(sine, out.sine.y_mean, out.sine.y_lo, out.sine.y_hi);
    return out;
}

SweetSpot sweet_spot(const ExperimentSeries& series) {
    if (series.x.size() < 3 || series.y_mean.size() != series.x.size())
        fail(ErrorCode::InvalidSeries, "sweet_spot: need at least 3 grid points");
    std::size_t best = 0;
    for (std::size_t i = 1; i < series.x.size(); ++i) {
        double y = series.y_mean[i];
        double b = series.y_mean[best];
        if (y < b || (y == b && series.x[i] < series.x[best])) best = i;
    }
    return SweetSpot{series.x[best], series.y_mean[best]};
}

ScalingResult run_scaling_experiment(const SyntheticConfig& cfg,
                                     const std::vector<std::size_t>& n_grid, std::size_t seeds) {
    cfg.validate();
    if (n_grid.size() < 5 || seeds < 1)
        fail(ErrorCode::InvalidInput, "run_scaling_experiment: need >= 5 grid points and seeds");
    double r0 = static_cast<double>(n_grid[1]) / static_cast<double>(n_grid[0]);
    for (std::size_t i = 1; i < n_grid.size(); ++i) {
        if (n_grid[i] <= n_grid[i - 1])
            fail(ErrorCode::InvalidInput, "run_scaling_experiment: n grid must be ascending");
        double r = static_cast<double>(n_grid[i]) / static_cast<double>(n_grid[i - 1]);
        if (std::fabs(r - r0) > 0.01 * r0)
            fail(ErrorCode::InvalidInput, "run_scaling_experiment: n grid must be geometric");
    }
    Matrix gamma_pop = population_fisher(cfg);
    std::uint64_t master = splitmix64(cfg.seed ^ kScaleSalt);
    std::vector<std::vector<double>> deltas(n_grid.size());
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        deltas[i].reserve(seeds);
        for (std::size_t j = 0; j < seeds; ++j) {
            FeatureMatrix f = sample(cfg, n_grid[i], derive_seed(master, i, j));
            deltas[i].push_back(exact_delta(empirical_fisher(f).gamma, gamma_pop).value);
        }
    }
    ScalingResult out;
    out.series.label = "scaling";
    out.series.n_seeds = seeds;
    out.series.x.reserve(n_grid.size());
    for (std::size_t n : n_grid) out.series.x.push_back(static_cast<double>(n));
    percentile_bands(deltas, out.series.y_mean, out.series.y_lo, out.series.y_hi);
    // Least-squares slope of log(mean Delta) against log n.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double m = static_cast<double>(n_grid.size());
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        double lx = std::log(out.series.x[i]);
        double ly = std::log(out.series.y_mean[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

ExperimentSeries margin_tail_curve(const SyntheticConfig& cfg, const std::vector<double>& t_grid) {
    cfg.validate();
    if (t_grid.empty()) fail(ErrorCode::InvalidInput, "margin_tail_curve: empty t grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0) || !std::isfinite(t_grid[i]))
            fail(ErrorCode::InvalidInput, "margin_tail_curve: t must be finite and nonnegative");
        if (i > 0 && t_grid[i] < t_grid[i - 1])
            fail(ErrorCode::InvalidInput, "margin_tail_curve: t grid must be ascending");
    }
    Probe bayes = bayes_probe(cfg);
    ExperimentSeries out;
    out.label = "margin";
    out.n_seeds = 1;
    out.x.assign(t_grid.begin(), t_grid.end());
    out.y_mean.assign(t_grid.size(), 0.0);
    if (cfg.family == Family::Gaussian) {
        // Score S = a^T U^T h is Gaussian per class: mean +-a^T U^T mu,
        // variance a^T U^T diag(s) U a. The two classes give identical
        // P(|S| <= t), so one formula covers the mixture.
        Vector w = matvec(bayes.subspace, bayes.direction);  // U a, length d
        double mu_s = cfg.mean_scale * w[0];
        double var_s = 0.0;
        for (std::size_t c = 0; c < cfg.d; ++c)
            var_s += cfg.scale_spectrum[c] * w[c] * w[c];
        double sd = std::sqrt(var_s);
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            double t = t_grid[i];
            out.y_mean[i] = normal_cdf((t - mu_s) / sd) - normal_cdf((-t - mu_s) / sd);
        }
    } else {
        const std::size_t n_mc = 100000;
        FeatureMatrix f = sample(cfg, n_mc, derive_seed(splitmix64(cfg.seed ^ kMarginSalt), 0, 0));
        std::vector<double> mags = margin_samples(bayes, f);
        std::sort(mags.begin(), mags.end());
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            auto it = std::upper_bound(mags.begin(), mags.end(), t_grid[i]);
            out.y_mean[i] = static_cast<double>(it - mags.begin()) / static_cast<double>(n_mc);
        }
    }
    out.y_lo = out.y_mean;
    out.y_hi = out.y_mean;
    return out;
}

double max_curvature_knee(const ExperimentSeries& series) {
    std::size_t m = series.x.size();
    if (m < 3 || series.y_mean.size() != m)
        fail(ErrorCode::InvalidSeries, "max_curvature_knee: need at least 3 grid points");
    double x0 = series.x.front(), x1 = series.x.back();
    double ylo = *std::min_element(series.y_mean.begin(), series.y_mean.end());
    double yhi = *std::max_element(series.y_mean.begin(), series.y_mean.end());
    if (!(x1 > x0) || !(yhi > ylo))
        fail(ErrorCode::InvalidSeries, "max_curvature_knee: flat or degenerate curve");
    Vector xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = (series.x[i] - x0) / (x1 - x0);
        ys[i] = (series.y_mean[i] - ylo) / (yhi - ylo);
    }
    std::size_t best = 1;
    double best_curv = -1.0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        double h1 = xs[i] - xs[i - 1];
        double h2 = xs[i + 1] - xs[i];
        if (!(h1 > 0.0) || !(h2 > 0.0))
            fail(ErrorCode::InvalidSeries, "max_curvature_knee: x grid must be increasing");
        double d1 = (ys[i + 1] - ys[i - 1]) / (h1 + h2);
        double d2 = 2.0 * (h2 * ys[i - 1] - (h1 + h2) * ys[i] + h1 * ys[i + 1]) /
                    (h1 * h2 * (h1 + h2));
        double curv = std::fabs(d2) / std::pow(1.0 + d1 * d1, 1.5);
        if (curv > best_curv) {
            best_curv = curv;
            best = i;
        }
    }
    return series.x[best];
}

SyntheticConfig calibrate_phase_config(const SyntheticConfig& cfg, std::size_t n_star,
                                       double delta, std::size_t pilot_n, std::size_t iterations) {
    cfg.validate();
    if (n_star < 1 || pilot_n < 1 || iterations < 1)
        fail(ErrorCode::InvalidInput, "calibrate_phase_config: empty pilot or iteration budget");
    SyntheticConfig work = cfg;
    double fac = variance_factor(cfg);
    std::uint64_t pilot_seed = derive_seed(splitmix64(cfg.seed ^ kPilotSalt), 0, 0);
    for (std::size_t it = 0; it < iterations; ++it) {
        FeatureMatrix pilot = sample(work, pilot_n, pilot_seed);
        ConcentrationParams params = estimate_concentration_params(pilot, empirical_fisher(pilot), delta);
        double g = bernstein_bound(params, n_star);
        double lam_k = population_decomposition(work).eigenvalues[work.k - 1];
        double s_new = (lam_k - g) / fac;
        bool ok = s_new > 0.0 && s_new <= work.scale_spectrum[work.k - 1] + 1e-12;
        if (work.k + 1 < work.d) ok = ok && s_new + 1e-12 >= work.scale_spectrum[work.k + 1];
        if (!ok)
            fail(ErrorCode::InfeasibleGap,
                 "calibrate_phase_config: target gap incompatible with the spectrum ordering");
        work.scale_spectrum[work.k] = s_new;
    }
    return work;
}

}  // namespace sip
