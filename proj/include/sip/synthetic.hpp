#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sip/fisher.hpp"
#include "sip/probe.hpp"

namespace sip {

enum class Family { Gaussian, StudentT };

// Two symmetric classes: h = Y * m * e1 + eps, Y uniform on {-1,+1}.
// Gaussian: eps ~ N(0, diag(scale_spectrum)). Student-t: eps = sqrt(nu/W) zeta
// with W ~ chi^2(nu) shared across coordinates, zeta ~ N(0, diag(s)); the
// population Fisher picks up the nu/(nu-2) variance factor.
struct SyntheticConfig {
    Family family = Family::Gaussian;
    double nu = 0.0;  // only for StudentT; must be > 2
    std::size_t d = 0;
    std::size_t k = 1;
    double mean_scale = 1.0;             // m
    std::vector<double> scale_spectrum;  // length d, positive, descending
    std::uint64_t seed = 0;

    void validate() const;
};

struct ExperimentSeries {
    std::string label;
    Vector x;
    Vector y_mean;
    Vector y_lo;  // 10th percentile over seeds
    Vector y_hi;  // 90th percentile over seeds
    std::size_t n_seeds = 0;
};

struct ClippingSweep {
    ExperimentSeries ratio;  // y = exact Delta(q) / empirical gap(q)
    ExperimentSeries sine;   // y = sin theta against the population subspace
    std::vector<std::size_t> per_seed_argmin;  // ratio-curve argmin index per seed
};

struct ScalingResult {
    double slope = 0.0;  // least-squares slope of log(mean Delta) vs log n
    ExperimentSeries series;
};

struct SweetSpot {
    double q_star = 0.0;
    double value = 0.0;
};

Matrix population_fisher(const SyntheticConfig& cfg);

// Population eigendecomposition convenience: eigenvalues descending and the
// k-gap. (Gamma is diagonal for this family, so these are exact.)
SpectralDecomposition population_decomposition(const SyntheticConfig& cfg);
double population_gap(const SyntheticConfig& cfg);

FeatureMatrix sample(const SyntheticConfig& cfg, std::size_t n, std::uint64_t seed);

// Bayes-optimal linear probe: population top-k subspace, within-subspace
// direction (U^T Sigma U)^{-1} U^T mu normalized, bias 0.
Probe bayes_probe(const SyntheticConfig& cfg);

// One point per (n, seed) draw: x = exact Delta / population gap, y = max
// principal-angle sine of the estimated top-k subspace, sorted by x.
ExperimentSeries run_subspace_experiment(const SyntheticConfig& cfg,
                                         const std::vector<std::size_t>& n_grid,
                                         std::size_t seeds);

// Phase transition: disagreement between the plug-in probe (Bayes weights
// transported onto the estimated subspace via Procrustes alignment) and the
// population Bayes probe, on a fixed per-seed evaluation set shared across the
// n grid.
ExperimentSeries run_phase_experiment(const SyntheticConfig& cfg,
                                      const std::vector<std::size_t>& n_grid, std::size_t seeds,
                                      std::size_t eval_n = 6000);

// Clipping sweep at fixed n: per seed one draw, re-clipped and re-estimated at
// every q in the grid.
ClippingSweep run_clipping_sweep(const SyntheticConfig& cfg, const std::vector<double>& q_grid,
                                 std::size_t n, std::size_t seeds);

// argmin of y_mean; ties break toward smaller x.
SweetSpot sweet_spot(const ExperimentSeries& series);

ScalingResult run_scaling_experiment(const SyntheticConfig& cfg,
                                     const std::vector<std::size_t>& n_grid, std::size_t seeds);

// P(|s_star| <= t) for the Bayes score: closed form (error function) for the
// Gaussian family, 1e5-draw Monte Carlo for Student-t.
ExperimentSeries margin_tail_curve(const SyntheticConfig& cfg, const std::vector<double>& t_grid);

// Interior grid point maximizing discrete curvature |y''| / (1 + y'^2)^{3/2}
// after normalizing the curve to the unit square. Raw second differences of a
// sigmoid are largest at the grid edge; normalization puts the knee at the
// visual elbow.
double max_curvature_knee(const ExperimentSeries& series);

// Phase-experiment calibration: iteratively sets scale_spectrum[k] so that the
// plug-in Bernstein envelope at n = n_star equals the population gap. The
// pilot draw and fixed-point iteration are deterministic in cfg.seed.
SyntheticConfig calibrate_phase_config(const SyntheticConfig& cfg, std::size_t n_star = 500,
                                       double delta = 0.5, std::size_t pilot_n = 2000,
                                       std::size_t iterations = 8);

}  // namespace sip
