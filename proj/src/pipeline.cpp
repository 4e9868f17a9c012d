#include "sip/pipeline.hpp"

#include <cmath>
#include <limits>

#include "sip/probe.hpp"
#include "sip/rng.hpp"
#include "sip/spectral.hpp"

namespace sip {

namespace {

constexpr std::uint64_t kClipSeedSalt = 0xc11aa0ULL;
constexpr std::uint64_t kSplitSeedSalt = 0xd17a00ULL;
constexpr std::uint64_t kSketchSeedSalt = 0x5ad000ULL;

// Exact dense eigensolve up to this dimension; beyond it a randomized sketch
// estimates the top k+1 Ritz pairs.
constexpr std::size_t kExactEigDim = 512;

struct Spectrum {
    double gap = 0.0;
    Matrix top;  // d x k
};

Spectrum top_spectrum(const Matrix& g, std::size_t k, std::uint64_t seed,
                      std::vector<std::string>& warnings) {
    Spectrum out;
    if (g.rows() <= kExactEigDim) {
        SpectralDecomposition dec = eigh(g);
        out.gap = eigengap(dec, k);
        bool degenerate = false;
        out.top = top_k_subspace(dec, k, &degenerate);
        if (degenerate)
            warnings.push_back("top-k subspace is not identified: lambda_k equals lambda_k+1");
        return out;
    }
    warnings.push_back("d > 512: top spectrum estimated by randomized sketch");
    Matrix q = randomized_range(g, k + 1, 8, 2, seed);
    Matrix t = gram(q, matmul(g, q));
    SpectralDecomposition small = eigh(t);
    out.gap = eigengap(small, k);
    Matrix w(small.vectors.rows(), k);
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) w(i, j) = small.vectors(i, j);
    out.top = matmul(q, w);
    orthonormalize_columns(out.top);
    return out;
}

double uniform_grid_point(double lo, double hi, std::size_t i, std::size_t count) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

SipReport diagnose(const FeatureMatrix& f, const DiagnoseOptions& opt) {
    f.validate();
    if (f.n() < 4) fail(ErrorCode::TooFewSamples, "diagnose: need at least 4 rows");
    if (opt.k < 1 || opt.k >= f.d())
        fail(ErrorCode::InvalidRank, "diagnose: need 1 <= k < d");
    if (opt.ridge < 0.0 || !std::isfinite(opt.ridge))
        fail(ErrorCode::InvalidInput, "diagnose: ridge must be finite and nonnegative");
    if (!(opt.delta > 0.0) || !(opt.delta < 1.0))
        fail(ErrorCode::InvalidConfidence, "diagnose: delta must lie in (0, 1)");

    SipReport rep;
    rep.layer_tag = opt.layer_tag;
    rep.d = f.d();
    rep.k = opt.k;
    rep.n = f.n();
    rep.ridge = opt.ridge;

    // Tail diagnostics run on the raw rows; they also gate auto-clipping.
    if (f.n() >= 50) {
        rep.tail = heavy_tail_check(f);
    } else {
        rep.warnings.push_back("tail diagnostics skipped: fewer than 50 samples");
    }

    FeatureMatrix working = f;
    std::optional<double> clip_radius;
    if (opt.clip_q) {
        ClipResult c = clip_features(f, *opt.clip_q, opt.clip_mode);
        working = std::move(c.features);
        clip_radius = c.radius;
        rep.q_star = *opt.clip_q;
    } else if (opt.auto_clip && rep.tail && rep.tail->heavy) {
        // Sweep a fixed quantile grid and keep the q minimizing the split-half
        // deviation relative to the clipped eigengap. Same split seed at every
        // q so the curves are comparable.
        std::uint64_t sweep_seed = derive_seed(splitmix64(opt.seed ^ kClipSeedSalt), 0, 0);
        const std::size_t count = 24;
        double best_obj = std::numeric_limits<double>::infinity();
        double best_q = 1.0;
        for (std::size_t i = 0; i < count; ++i) {
            double q = uniform_grid_point(0.40, 0.995, i, count);
            ClipResult c = clip_features(f, q, opt.clip_mode);
            SpectralDecomposition dec = eigh(empirical_fisher(c.features).gamma);
            double gap = eigengap(dec, opt.k);
            if (!(gap > 0.0)) continue;
            double obj = split_half_delta(c.features, sweep_seed, 4).value / gap;
            if (obj < best_obj) {
                best_obj = obj;
                best_q = q;
            }
        }
        if (std::isfinite(best_obj)) {
            ClipResult c = clip_features(f, best_q, opt.clip_mode);
            working = std::move(c.features);
            clip_radius = c.radius;
            rep.q_star = best_q;
        } else {
            rep.warnings.push_back("auto-clip sweep found no usable quantile; rows left as-is");
        }
    }

    FisherEstimate est = empirical_fisher(working);
    Matrix gamma = opt.ridge > 0.0 ? ridge_regularize(est.gamma, opt.ridge) : est.gamma;
    Spectrum spec = top_spectrum(gamma, opt.k, derive_seed(splitmix64(opt.seed ^ kSketchSeedSalt), 0, 0),
                                 rep.warnings);

    DeltaEstimate dh =
        split_half_delta(working, derive_seed(splitmix64(opt.seed ^ kSplitSeedSalt), 0, 0),
                         opt.n_splits);
    SipVerdict verdict = sip_verdict(dh.value, spec.gap);
    rep.gap_hat = verdict.gap;
    rep.delta_hat = verdict.delta;
    rep.ratio = verdict.ratio;
    rep.pass = verdict.pass;

    est.clip_radius = clip_radius;
    ConcentrationParams params = estimate_concentration_params(working, est, opt.delta);
    if (params.degenerate)
        rep.warnings.push_back("concentration parameters hit the degenerate floor");
    rep.bernstein_t = bernstein_bound(params, f.n());
    if (!(spec.gap > 0.0)) {
        rep.warnings.push_back("sample-size planning skipped: empirical eigengap is zero");
    } else if (!(params.v > 0.0)) {
        rep.warnings.push_back("sample-size planning skipped: variance proxy is zero");
    } else {
        rep.complexity = sample_complexity(spec.gap, params);
    }

    if (working.labels) {
        double probe_ridge = opt.ridge > 0.0 ? opt.ridge : 1e-6;
        try {
            Probe probe = fit_direction(working, spec.top, probe_ridge);
            std::vector<double> margins = margin_samples(probe, working);
            rep.kappa = estimate_kappa(margins);
        } catch (const Error& e) {
            rep.warnings.push_back(std::string("margin fit skipped: ") + e.what());
        }
        if (rep.kappa) {
            try {
                rep.risk = risk_bound(rep.delta_hat, rep.gap_hat, params.b, rep.kappa->kappa,
                                      rep.kappa->c);
            } catch (const Error& e) {
                rep.warnings.push_back(std::string("risk bound skipped: ") + e.what());
            }
        }
        // 5-fold round-robin cross-validation of the probe.
        try {
            const std::size_t folds = 5;
            std::size_t correct = 0, total = 0;
            for (std::size_t t = 0; t < folds; ++t) {
                FeatureMatrix train;
                std::vector<std::size_t> test_rows;
                std::size_t n_train = 0;
                for (std::size_t i = 0; i < working.n(); ++i)
                    if (i % folds != t) ++n_train;
                if (n_train == 0 || n_train == working.n()) continue;
                train.rows = Matrix(n_train, working.d());
                std::vector<int> train_labels;
                train_labels.reserve(n_train);
                std::size_t r = 0;
                for (std::size_t i = 0; i < working.n(); ++i) {
                    if (i % folds == t) {
                        test_rows.push_back(i);
                        continue;
                    }
                    for (std::size_t j = 0; j < working.d(); ++j)
                        train.rows(r, j) = working.rows(i, j);
                    train_labels.push_back((*working.labels)[i]);
                    ++r;
                }
                train.labels = std::move(train_labels);
                Matrix fold_gamma = empirical_fisher(train).gamma;
                if (opt.ridge > 0.0) fold_gamma = ridge_regularize(fold_gamma, opt.ridge);
                std::vector<std::string> fold_warnings;
                Spectrum fold_spec = top_spectrum(
                    fold_gamma, opt.k, derive_seed(splitmix64(opt.seed ^ kSketchSeedSalt), 1, t),
                    fold_warnings);
                Probe probe = fit_direction(train, fold_spec.top, probe_ridge);
                for (std::size_t i : test_rows) {
                    int pred = score(probe, working.rows.row(i), working.d()) >= 0.0 ? 1 : -1;
                    if (pred == (*working.labels)[i]) ++correct;
                    ++total;
                }
            }
            if (total > 0)
                rep.probe_accuracy = static_cast<double>(correct) / static_cast<double>(total);
        } catch (const Error& e) {
            rep.warnings.push_back(std::string("probe cross-validation skipped: ") + e.what());
        }
    } else {
        rep.warnings.push_back("labels absent: probe diagnostics skipped");
    }

    return rep;
}

}  // namespace sip
