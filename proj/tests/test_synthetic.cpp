#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "sip/diagnostics.hpp"
#include "sip/fisher.hpp"
#include "sip/probe.hpp"
#include "sip/spectral.hpp"
#include "sip/synthetic.hpp"
#include "support/test_util.hpp"

using namespace sip;
using namespace testsupport;

namespace {

SyntheticConfig gauss3() {
    SyntheticConfig cfg;
    cfg.d = 3;
    cfg.k = 1;
    cfg.mean_scale = 1.5;
    cfg.scale_spectrum = {0.8, 0.4, 0.2};
    return cfg;
}

bool same_series(const ExperimentSeries& a, const ExperimentSeries& b) {
    auto eq = [](const std::vector<double>& u, const std::vector<double>& v) {
        return u.size() == v.size() && std::equal(u.begin(), u.end(), v.begin());
    };
    return eq(a.x, b.x) && eq(a.y_mean, b.y_mean) && eq(a.y_lo, b.y_lo) && eq(a.y_hi, b.y_hi);
}

}  // namespace

TEST_CASE("population fisher closed forms") {
    SyntheticConfig cfg;
    cfg.d = 2;
    cfg.k = 1;
    cfg.mean_scale = 1.0;
    cfg.scale_spectrum = {0.5, 0.25};
    Matrix gamma = population_fisher(cfg);
    // mu mu^T + diag(s) with every term a power of two: exact equality.
    CHECK(gamma(0, 0) == 1.5);
    CHECK(gamma(1, 1) == 0.25);
    CHECK(gamma(0, 1) == 0.0);
    CHECK(gamma(1, 0) == 0.0);
    CHECK(population_gap(cfg) == 1.25);

    SpectralDecomposition dec = population_decomposition(cfg);
    CHECK(dec.eigenvalues[0] == 1.5);
    CHECK(dec.eigenvalues[1] == 0.25);

    // Zero mean: the Fisher operator reduces to the noise covariance.
    SyntheticConfig centered = gauss3();
    centered.mean_scale = 0.0;
    Matrix cov = population_fisher(centered);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(cov(i, j) == (i == j ? centered.scale_spectrum[i] : 0.0));

    // Student-t second moment carries the nu/(nu-2) factor: nu=4 doubles it.
    SyntheticConfig heavy;
    heavy.family = Family::StudentT;
    heavy.nu = 4.0;
    heavy.d = 3;
    heavy.k = 1;
    heavy.mean_scale = 1.0;
    heavy.scale_spectrum = {1.0, 1.0, 1.0};
    Matrix gt = population_fisher(heavy);
    CHECK(gt(0, 0) == 3.0);
    CHECK(gt(1, 1) == 2.0);
    CHECK(gt(2, 2) == 2.0);
    CHECK(gt(0, 1) == 0.0);
}

TEST_CASE("sample matches population moments") {
    SyntheticConfig cfg = gauss3();
    FeatureMatrix f = sample(cfg, 1000000, 88);
    REQUIRE(f.n() == 1000000);
    REQUIRE(f.d() == 3);
    REQUIRE(f.labels.has_value());

    Matrix pop = population_fisher(cfg);
    double rel = exact_delta(empirical_fisher(f).gamma, pop).value / operator_norm(pop);
    CHECK(rel < 0.01);

    // Labels are +-1, balanced to binomial accuracy, and h_1 * y recovers the
    // class mean.
    std::size_t pos = 0;
    double hy = 0.0;
    for (std::size_t i = 0; i < f.n(); ++i) {
        int y = (*f.labels)[i];
        REQUIRE((y == 1 || y == -1));
        if (y == 1) ++pos;
        hy += f.rows(i, 0) * y;
    }
    double dev = std::fabs(static_cast<double>(pos) - 500000.0);
    CHECK(dev < 1500.0);  // three binomial standard deviations
    CHECK(std::fabs(hy / 1e6 - cfg.mean_scale) < 0.003);

    SUBCASE("deterministic in the seed") {
        FeatureMatrix again = sample(cfg, 1000, 88);
        FeatureMatrix twice = sample(cfg, 1000, 88);
        CHECK(bitwise_equal(again.rows, twice.rows));
        CHECK(*again.labels == *twice.labels);
        FeatureMatrix other = sample(cfg, 1000, 89);
        CHECK_FALSE(bitwise_equal(again.rows, other.rows));
    }
    SUBCASE("student-t second moment") {
        SyntheticConfig heavy = cfg;
        heavy.family = Family::StudentT;
        heavy.nu = 5.0;
        Matrix tp = population_fisher(heavy);
        FeatureMatrix tf = sample(heavy, 400000, 77);
        double trel = exact_delta(empirical_fisher(tf).gamma, tp).value / operator_norm(tp);
        CHECK(trel < 0.01);
    }
    SUBCASE("rejects empty draws") { CHECK_SIP_ERROR(sample(cfg, 0, 1), InvalidInput); }
}

TEST_CASE("bayes probe is axis aligned and optimal") {
    SyntheticConfig cfg = gauss3();
    Probe bayes = bayes_probe(cfg);
    REQUIRE(bayes.subspace.rows() == 3);
    REQUIRE(bayes.subspace.cols() == 1);
    // Top eigenvector of diag + rank-one bump on the first axis is e1, and the
    // whitened mean points along it with positive sign.
    CHECK(std::fabs(bayes.subspace(0, 0)) == 1.0);
    CHECK(bayes.subspace(1, 0) == 0.0);
    CHECK(bayes.subspace(2, 0) == 0.0);
    CHECK(std::fabs(std::fabs(bayes.direction[0]) - 1.0) < 1e-12);
    CHECK(bayes.bias == 0.0);
    // Classifies both class means correctly.
    Vector mean_pos = {cfg.mean_scale, 0.0, 0.0};
    Vector mean_neg = {-cfg.mean_scale, 0.0, 0.0};
    CHECK(classify(bayes, mean_pos) == 1);
    CHECK(classify(bayes, mean_neg) == -1);

    SUBCASE("no direction in the plane beats it") {
        SyntheticConfig wide;
        wide.d = 3;
        wide.k = 2;
        wide.mean_scale = 1.0;
        wide.scale_spectrum = {0.6, 0.3, 0.15};
        Probe opt = bayes_probe(wide);
        FeatureMatrix eval = sample(wide, 100000, 4242);
        auto risk = [&](const Probe& p) {
            std::vector<int> pred = classify(p, eval);
            std::size_t bad = 0;
            for (std::size_t i = 0; i < eval.n(); ++i)
                if (pred[i] != (*eval.labels)[i]) ++bad;
            return static_cast<double>(bad) / static_cast<double>(eval.n());
        };
        double best = 1.0;
        Probe cand = opt;
        for (int a = -90; a <= 90; ++a) {
            double th = a * 3.14159265358979323846 / 180.0;
            cand.direction = {std::cos(th), std::sin(th)};
            best = std::min(best, risk(cand));
        }
        CHECK(risk(opt) <= best + 0.002);
    }
    SUBCASE("degenerate configurations are rejected") {
        SyntheticConfig tied;
        tied.d = 3;
        tied.k = 2;
        tied.mean_scale = 1.0;
        tied.scale_spectrum = {1.0, 0.5, 0.5};
        CHECK_SIP_ERROR(bayes_probe(tied), DegenerateGap);
        SyntheticConfig centered = gauss3();
        centered.mean_scale = 0.0;
        CHECK_SIP_ERROR(bayes_probe(centered), DegenerateLabels);
    }
}

TEST_CASE("subspace experiment obeys the spectral bound pointwise") {
    SyntheticConfig cfg;
    cfg.d = 4;
    cfg.k = 1;
    cfg.mean_scale = 1.2;
    cfg.scale_spectrum = {0.8, 0.4, 0.25, 0.15};
    cfg.seed = 3;
    ExperimentSeries s = run_subspace_experiment(cfg, {200, 800}, 10);
    REQUIRE(s.x.size() == 20);
    CHECK(s.label == "subspace");
    CHECK(s.n_seeds == 10);
    CHECK(std::is_sorted(s.x.begin(), s.x.end()));
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        CHECK(s.y_mean[i] <= s.x[i] + 1e-12);  // sin-theta under ratio, every draw
        CHECK(s.y_mean[i] >= 0.0);
    }
    CHECK(s.y_lo == s.y_mean);
    CHECK(s.y_hi == s.y_mean);
    CHECK(same_series(s, run_subspace_experiment(cfg, {200, 800}, 10)));
    CHECK_SIP_ERROR(run_subspace_experiment(cfg, {}, 10), InvalidInput);
    CHECK_SIP_ERROR(run_subspace_experiment(cfg, {100}, 0), InvalidInput);
}

TEST_CASE("phase experiment risk decays with sample size") {
    SyntheticConfig cfg;
    cfg.d = 4;
    cfg.k = 1;
    cfg.mean_scale = 1.0;
    cfg.scale_spectrum = {5.8, 3.0, 0.3, 0.15};
    cfg.seed = 21;
    ExperimentSeries s = run_phase_experiment(cfg, {100, 300, 1000}, 100, 2000);
    REQUIRE(s.x.size() == 3);
    CHECK(s.x[0] == 100.0);
    CHECK(s.x[2] == 1000.0);
    CHECK(s.y_mean[0] > s.y_mean[1]);
    CHECK(s.y_mean[1] > s.y_mean[2]);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(s.y_lo[i] <= s.y_mean[i]);
        CHECK(s.y_mean[i] <= s.y_hi[i]);
        CHECK(s.y_mean[i] >= 0.0);
        CHECK(s.y_hi[i] <= 1.0);
    }
    CHECK(same_series(s, run_phase_experiment(cfg, {100, 300, 1000}, 100, 2000)));

    SUBCASE("large samples drive the disagreement toward zero") {
        ExperimentSeries big = run_phase_experiment(cfg, {20000}, 3, 4000);
        CHECK(big.y_mean[0] < 0.01);
    }
    SUBCASE("input validation") {
        CHECK_SIP_ERROR(run_phase_experiment(cfg, {}, 10, 100), InvalidInput);
        CHECK_SIP_ERROR(run_phase_experiment(cfg, {100}, 0, 100), InvalidInput);
        CHECK_SIP_ERROR(run_phase_experiment(cfg, {100}, 10, 0), InvalidInput);
    }
}

TEST_CASE("phase calibration pins the envelope crossing") {
    SyntheticConfig cfg;
    cfg.d = 4;
    cfg.k = 1;
    cfg.mean_scale = 1.0;
    cfg.scale_spectrum = {5.8, 3.0, 0.3, 0.15};
    cfg.seed = 21;
    SyntheticConfig cal = calibrate_phase_config(cfg, 500, 0.5);
    // Only the entry just below the retained block moves, and the spectrum
    // stays descending with a positive gap.
    CHECK(cal.scale_spectrum[0] == cfg.scale_spectrum[0]);
    CHECK(cal.scale_spectrum[2] == cfg.scale_spectrum[2]);
    CHECK(cal.scale_spectrum[3] == cfg.scale_spectrum[3]);
    CHECK(cal.scale_spectrum[1] > cfg.scale_spectrum[1]);
    CHECK(cal.scale_spectrum[1] < cal.scale_spectrum[0]);
    CHECK(population_gap(cal) > 0.0);

    SyntheticConfig again = calibrate_phase_config(cfg, 500, 0.5);
    CHECK(again.scale_spectrum == cal.scale_spectrum);

    // Fixed point: calibrating the calibrated config barely moves it.
    SyntheticConfig re = calibrate_phase_config(cal, 500, 0.5);
    CHECK(std::fabs(re.scale_spectrum[1] - cal.scale_spectrum[1]) <
          1e-6 * cal.scale_spectrum[1]);

    // An independent pilot puts the envelope at the gap up to pilot noise.
    FeatureMatrix pilot = sample(cal, 2000, 501);
    ConcentrationParams p = estimate_concentration_params(pilot, empirical_fisher(pilot), 0.5);
    double t = bernstein_bound(p, 500);
    double gap = population_gap(cal);
    CHECK(std::fabs(t - gap) < 0.1 * gap);

    SUBCASE("infeasible targets are reported") {
        SyntheticConfig weak;
        weak.d = 4;
        weak.k = 1;
        weak.mean_scale = 1.0;
        weak.scale_spectrum = {0.5, 0.3, 0.2, 0.1};
        weak.seed = 7;
        CHECK_SIP_ERROR(calibrate_phase_config(weak, 500, 0.5), InfeasibleGap);
    }
    SUBCASE("input validation") {
        CHECK_SIP_ERROR(calibrate_phase_config(cfg, 0, 0.5), InvalidInput);
        CHECK_SIP_ERROR(calibrate_phase_config(cfg, 500, 0.5, 0), InvalidInput);
        CHECK_SIP_ERROR(calibrate_phase_config(cfg, 500, 0.5, 2000, 0), InvalidInput);
    }
}

TEST_CASE("clipping sweep finds an interior optimum on heavy tails") {
    SyntheticConfig cfg;
    cfg.family = Family::StudentT;
    cfg.nu = 3.0;
    cfg.d = 12;
    cfg.k = 1;
    cfg.mean_scale = 1.5;
    cfg.scale_spectrum.assign(12, 0.4);
    cfg.seed = 9;
    std::vector<double> qg;
    for (int i = 0; i < 12; ++i) qg.push_back(0.40 + (0.995 - 0.40) * i / 11.0);
    ClippingSweep sw = run_clipping_sweep(cfg, qg, 300, 25);
    REQUIRE(sw.ratio.y_mean.size() == qg.size());
    REQUIRE(sw.per_seed_argmin.size() == 25);

    std::size_t arg = 0;
    for (std::size_t i = 1; i < qg.size(); ++i)
        if (sw.ratio.y_mean[i] < sw.ratio.y_mean[arg]) arg = i;
    CHECK(arg > 0);
    CHECK(arg < qg.size() - 1);
    CHECK(sw.ratio.y_mean[arg] < sw.ratio.y_mean.front());
    CHECK(sw.ratio.y_mean[arg] < sw.ratio.y_mean.back());
    CHECK(sweet_spot(sw.ratio).q_star == qg[arg]);

    // Aggressive-to-mild quantile ordering of the per-seed optima is stable:
    // interquartile spread at most two grid steps.
    std::vector<std::size_t> pa = sw.per_seed_argmin;
    std::sort(pa.begin(), pa.end());
    CHECK(pa[(pa.size() * 3) / 4] - pa[pa.size() / 4] <= 2);

    SUBCASE("gaussian data leaves the sweep flat") {
        SyntheticConfig g = cfg;
        g.family = Family::Gaussian;
        ClippingSweep gs = run_clipping_sweep(g, qg, 300, 25);
        double mn = gs.sine.y_mean[0], mx = mn, level = 0.0;
        for (double v : gs.sine.y_mean) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
            level += v;
        }
        level /= static_cast<double>(gs.sine.y_mean.size());
        CHECK(mx - mn < 0.15 * level);
        // No interior ratio point beats both endpoints by more than two pooled
        // standard errors (sd recovered from the 10-90 band of a near-normal
        // spread: band / 2.5631).
        auto se = [&](std::size_t i) {
            return (gs.ratio.y_hi[i] - gs.ratio.y_lo[i]) / 2.5631 / std::sqrt(25.0);
        };
        for (std::size_t i = 1; i + 1 < qg.size(); ++i) {
            double z_front = (gs.ratio.y_mean.front() - gs.ratio.y_mean[i]) /
                             std::sqrt(se(0) * se(0) + se(i) * se(i));
            double z_back = (gs.ratio.y_mean.back() - gs.ratio.y_mean[i]) /
                            std::sqrt(se(qg.size() - 1) * se(qg.size() - 1) + se(i) * se(i));
            CHECK(std::min(z_front, z_back) < 2.0);
        }
    }
    SUBCASE("per-seed draws do not depend on the quantile grid") {
        ClippingSweep a = run_clipping_sweep(cfg, {0.7, 1.0}, 300, 25);
        ClippingSweep b = run_clipping_sweep(cfg, {0.7, 0.9, 1.0}, 300, 25);
        CHECK(a.ratio.y_mean[0] == b.ratio.y_mean[0]);
        CHECK(a.ratio.y_mean[1] == b.ratio.y_mean[2]);
        CHECK(a.sine.y_mean[0] == b.sine.y_mean[0]);
        CHECK(a.sine.y_mean[1] == b.sine.y_mean[2]);
    }
    SUBCASE("rerun is bitwise identical") {
        ClippingSweep again = run_clipping_sweep(cfg, qg, 300, 25);
        CHECK(same_series(sw.ratio, again.ratio));
        CHECK(same_series(sw.sine, again.sine));
        CHECK(sw.per_seed_argmin == again.per_seed_argmin);
    }
    SUBCASE("input validation") {
        CHECK_SIP_ERROR(run_clipping_sweep(cfg, {0.0, 0.5}, 100, 2), InvalidQuantile);
        CHECK_SIP_ERROR(run_clipping_sweep(cfg, {0.5, 1.5}, 100, 2), InvalidQuantile);
        CHECK_SIP_ERROR(run_clipping_sweep(cfg, {0.5, 0.5}, 100, 2), InvalidInput);
        CHECK_SIP_ERROR(run_clipping_sweep(cfg, {0.5}, 100, 0), InvalidInput);
        CHECK_SIP_ERROR(run_clipping_sweep(cfg, {0.5}, 0, 2), InvalidInput);
    }
}

TEST_CASE("sweet spot argmin with conservative tie break") {
    ExperimentSeries s;
    s.x = {0.4, 0.7, 0.9};
    s.y_mean = {3.0, 1.0, 2.0};
    CHECK(sweet_spot(s).q_star == 0.7);
    CHECK(sweet_spot(s).value == 1.0);
    s.y_mean = {1.0, 1.0, 1.0};
    CHECK(sweet_spot(s).q_star == 0.4);
    s.y_mean = {2.0, 1.0, 1.0};
    CHECK(sweet_spot(s).q_star == 0.7);
    s.x = {0.4, 0.7};
    s.y_mean = {1.0, 2.0};
    CHECK_SIP_ERROR(sweet_spot(s), InvalidSeries);
}

TEST_CASE("scaling slopes separate light and heavy tails") {
    SyntheticConfig cfg;
    cfg.d = 10;
    cfg.k = 1;
    cfg.mean_scale = 1.5;
    cfg.scale_spectrum.resize(10);
    double ratio = std::pow(0.1 / 0.8, 1.0 / 9.0);
    double v = 0.8;
    for (int i = 0; i < 10; ++i) {
        cfg.scale_spectrum[i] = v;
        v *= ratio;
    }
    cfg.seed = 5;
    std::vector<std::size_t> ng = {100, 200, 400, 800, 1600, 3200};
    ScalingResult gauss = run_scaling_experiment(cfg, ng, 25);
    CHECK(gauss.slope > -0.6);
    CHECK(gauss.slope < -0.4);
    REQUIRE(gauss.series.x.size() == ng.size());
    for (std::size_t i = 0; i < ng.size(); ++i) {
        CHECK(gauss.series.x[i] == static_cast<double>(ng[i]));
        CHECK(gauss.series.y_lo[i] <= gauss.series.y_mean[i]);
        CHECK(gauss.series.y_mean[i] > 0.0);
    }

    SyntheticConfig heavy = cfg;
    heavy.family = Family::StudentT;
    heavy.nu = 2.5;
    ScalingResult slow = run_scaling_experiment(heavy, ng, 25);
    CHECK(slow.slope > gauss.slope + 0.05);

    SUBCASE("estimation error is homogeneous in the spectrum scale") {
        SyntheticConfig base;
        base.d = 6;
        base.k = 1;
        base.mean_scale = 0.0;  // no mean term, so scaling is exactly linear
        base.scale_spectrum = {0.6, 0.5, 0.4, 0.3, 0.25, 0.2};
        base.seed = 12;
        SyntheticConfig doubled = base;
        for (double& s : doubled.scale_spectrum) s *= 2.0;
        std::vector<std::size_t> five = {100, 200, 400, 800, 1600};
        ScalingResult a = run_scaling_experiment(base, five, 6);
        ScalingResult b = run_scaling_experiment(doubled, five, 6);
        for (std::size_t i = 0; i < five.size(); ++i)
            CHECK(std::fabs(b.series.y_mean[i] / a.series.y_mean[i] - 2.0) < 1e-6);
        CHECK(std::fabs(b.slope - a.slope) < 1e-6);
    }
    SUBCASE("grid validation") {
        CHECK_SIP_ERROR(run_scaling_experiment(cfg, {100, 200, 400, 800}, 5),
                        InvalidInput);
        CHECK_SIP_ERROR(run_scaling_experiment(cfg, {100, 200, 400, 800, 2000}, 5),
                        InvalidInput);
        CHECK_SIP_ERROR(run_scaling_experiment(cfg, {100, 200, 400, 300, 800}, 5),
                        InvalidInput);
        CHECK_SIP_ERROR(run_scaling_experiment(cfg, ng, 0), InvalidInput);
    }
}

TEST_CASE("margin tail curve") {
    SyntheticConfig g;
    g.d = 3;
    g.k = 1;
    g.mean_scale = 1.6;
    g.scale_spectrum = {0.16, 0.12, 0.08};
    std::vector<double> tg = {0.0, 0.05, 0.1, 0.2, 0.3, 0.4};
    ExperimentSeries gm = margin_tail_curve(g, tg);
    CHECK(gm.y_mean[0] == 0.0);
    CHECK(std::is_sorted(gm.y_mean.begin(), gm.y_mean.end()));
    // The score along e1 is N(+-m, s1); recompute the fold-over mass directly.
    for (std::size_t i = 0; i < tg.size(); ++i) {
        double sd = std::sqrt(g.scale_spectrum[0]);
        auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
        double want = phi((tg[i] - g.mean_scale) / sd) - phi((-tg[i] - g.mean_scale) / sd);
        CHECK(std::fabs(gm.y_mean[i] - want) < 1e-12);
    }

    SUBCASE("analytic curve matches a large monte carlo") {
        std::vector<double> wide;
        for (int i = 0; i <= 16; ++i) wide.push_back(0.2 * i);
        ExperimentSeries curve = margin_tail_curve(g, wide);
        FeatureMatrix f = sample(g, 1000000, 60601);
        std::vector<double> mags = margin_samples(bayes_probe(g), f);
        std::sort(mags.begin(), mags.end());
        double sup = 0.0;
        for (std::size_t i = 0; i < wide.size(); ++i) {
            auto it = std::upper_bound(mags.begin(), mags.end(), wide[i]);
            double emp = static_cast<double>(it - mags.begin()) / static_cast<double>(mags.size());
            sup = std::max(sup, std::fabs(emp - curve.y_mean[i]));
        }
        CHECK(sup <= 0.01);
    }
    SUBCASE("heavy tails put more mass near zero at matched variance") {
        SyntheticConfig t = g;
        t.family = Family::StudentT;
        t.nu = 3.0;
        t.seed = 1;
        for (double& s : t.scale_spectrum) s /= 3.0;  // nu/(nu-2) = 3 restores the variance
        ExperimentSeries tm = margin_tail_curve(t, tg);
        CHECK(tm.y_mean[0] == 0.0);
        CHECK(std::is_sorted(tm.y_mean.begin(), tm.y_mean.end()));
        for (std::size_t i = 1; i < tg.size(); ++i) CHECK(tm.y_mean[i] >= gm.y_mean[i]);
        CHECK(same_series(tm, margin_tail_curve(t, tg)));
    }
    SUBCASE("grid validation") {
        CHECK_SIP_ERROR(margin_tail_curve(g, {}), InvalidInput);
        CHECK_SIP_ERROR(margin_tail_curve(g, {-0.1, 0.5}), InvalidInput);
        CHECK_SIP_ERROR(margin_tail_curve(g, {0.5, 0.2}), InvalidInput);
    }
}

TEST_CASE("knee detector locates the curvature corner") {
    ExperimentSeries s;
    for (int i = 0; i < 10; ++i) s.x.push_back(100.0 * (i + 1));
    s.y_mean = {1.0, 0.75, 0.5, 0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(max_curvature_knee(s) == 500.0);
    s.y_mean = {1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(max_curvature_knee(s) == 400.0);

    SUBCASE("degenerate series are rejected") {
        ExperimentSeries bad;
        bad.x = {1.0, 2.0};
        bad.y_mean = {1.0, 0.0};
        CHECK_SIP_ERROR(max_curvature_knee(bad), InvalidSeries);
        bad.x = {1.0, 2.0, 3.0};
        bad.y_mean = {1.0, 1.0, 1.0};
        CHECK_SIP_ERROR(max_curvature_knee(bad), InvalidSeries);
        bad.y_mean = {1.0, 0.5};
        CHECK_SIP_ERROR(max_curvature_knee(bad), InvalidSeries);
        bad.x = {1.0, 2.0, 2.0};
        bad.y_mean = {1.0, 0.5, 0.0};
        CHECK_SIP_ERROR(max_curvature_knee(bad), InvalidSeries);
    }
}

TEST_CASE("config validation") {
    SyntheticConfig cfg = gauss3();
    SyntheticConfig bad = cfg;
    bad.d = 1;
    bad.scale_spectrum = {1.0};
    CHECK_SIP_ERROR(population_fisher(bad), InvalidInput);
    bad = cfg;
    bad.k = 0;
    CHECK_SIP_ERROR(population_fisher(bad), InvalidRank);
    bad.k = 3;
    CHECK_SIP_ERROR(population_fisher(bad), InvalidRank);
    bad = cfg;
    bad.scale_spectrum = {0.8, 0.4};
    CHECK_SIP_ERROR(population_fisher(bad), InvalidInput);
    bad = cfg;
    bad.scale_spectrum = {0.8, 0.0, 0.2};
    CHECK_SIP_ERROR(population_fisher(bad), InvalidInput);
    bad = cfg;
    bad.scale_spectrum = {0.2, 0.4, 0.8};
    CHECK_SIP_ERROR(population_fisher(bad), InvalidInput);
    bad = cfg;
    bad.mean_scale = -1.0;
    CHECK_SIP_ERROR(population_fisher(bad), InvalidInput);
    bad.mean_scale = std::numeric_limits<double>::quiet_NaN();
    CHECK_SIP_ERROR(population_fisher(bad), InvalidInput);
    bad = cfg;
    bad.family = Family::StudentT;
    bad.nu = 2.0;
    CHECK_SIP_ERROR(population_fisher(bad), InfiniteVariance);
    bad.nu = 2.1;
    CHECK_NOTHROW(population_fisher(bad));
}
