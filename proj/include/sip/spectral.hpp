#pragma once

#include <cstdint>

#include "sip/linalg.hpp"

namespace sip {

// Eigenvalues descending; vectors holds the matching orthonormal eigenvectors
// as columns. Sign convention: each eigenvector's largest-magnitude component
// is positive (ties broken toward the lowest index), so decompositions are
// reproducible across runs and platforms.
struct SpectralDecomposition {
    Vector eigenvalues;
    Matrix vectors;
};

struct PrincipalAngles {
    Vector sines;  // descending
    double max_sine = 0.0;
};

// Dense symmetric eigendecomposition: Householder tridiagonalization followed
// by implicit-shift QL. Throws InvalidInput on non-finite entries, ShapeError
// on non-square, InvalidInput on asymmetry beyond 1e-8 * max|entry|.
SpectralDecomposition eigh(const Matrix& m);

// Largest singular value via power iteration on A^T A. Deterministic: unit e1
// start plus one seeded restart; the max of the two Rayleigh limits is taken
// (the restart covers starts orthogonal to the top singular direction).
double operator_norm(const Matrix& m);

// First k columns of the decomposition. 1 <= k < d, else InvalidRank. When
// lambda_k and lambda_{k+1} agree within 1e-12 the subspace is not identified;
// the basis is still returned and *degenerate_gap (if given) is set.
Matrix top_k_subspace(const SpectralDecomposition& dec, std::size_t k,
                      bool* degenerate_gap = nullptr);

// Principal angles between two d x k orthonormal bases: sines are
// sqrt(1 - sigma_i^2) for singular values sigma_i of A^T B, clamped to [0,1],
// returned descending.
PrincipalAngles sin_theta(const Matrix& a, const Matrix& b);

// Orthogonal k x k factor Q (polar factor of U^T Uhat) minimizing
// ||Uhat - U Q||_F. AlignmentDegenerate if U^T Uhat is numerically singular
// (smallest singular value < 1e-12).
Matrix procrustes_align(const Matrix& u, const Matrix& u_hat);

// Randomized range finder for symmetric m: Gaussian sketch with oversampling,
// subspace iteration with power_iters sweeps as a floor plus extra sweeps until
// the top-k subspace stabilizes. Returns an orthonormal d x k basis.
Matrix randomized_range(const Matrix& m, std::size_t k, std::size_t oversample,
                        std::size_t power_iters, std::uint64_t seed);

}  // namespace sip
