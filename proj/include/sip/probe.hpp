#pragma once

#include <vector>

#include "sip/fisher.hpp"

namespace sip {

// Linear probe: score(h) = a^T (U^T h) + bias, classify by sign.
struct Probe {
    Matrix subspace;   // d x k orthonormal
    Vector direction;  // unit vector in R^k
    double bias = 0.0;
};

// Fisher discriminant within a given orthonormal d x k subspace: project rows
// onto it, solve (S_w + ridge I) a = (mean_+ - mean_-), normalize,
// bias = -a^T (mean_+ + mean_-) / 2. Needs both classes present
// (DegenerateLabels) and a solvable scatter (SingularScatter when ridge = 0).
Probe fit_direction(const FeatureMatrix& f, const Matrix& subspace, double ridge = 1e-6);

double score(const Probe& p, const double* h, std::size_t d);
double score(const Probe& p, const Vector& h);
std::vector<double> score(const Probe& p, const FeatureMatrix& f);

// sign of score; score exactly 0 maps to +1.
int classify(const Probe& p, const Vector& h);
std::vector<int> classify(const Probe& p, const FeatureMatrix& f);

// Fraction of rows where the two probes disagree. Empty input: TooFewSamples.
double disagreement_risk(const Probe& a, const Probe& b, const FeatureMatrix& f);

// |score| per row.
std::vector<double> margin_samples(const Probe& p, const FeatureMatrix& f);

}  // namespace sip
