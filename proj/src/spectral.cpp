#include "sip/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sip/rng.hpp"

namespace sip {

namespace {

double hypot2(double a, double b) {
    double aa = std::fabs(a), ab = std::fabs(b);
    if (aa > ab) {
        double r = ab / aa;
        return aa * std::sqrt(1.0 + r * r);
    }
    if (ab == 0.0) return 0.0;
    double r = aa / ab;
    return ab * std::sqrt(1.0 + r * r);
}

// Householder reduction of a symmetric matrix to tridiagonal form, followed by
// the implicit-shift QL iteration with eigenvector accumulation. The classic
// dense recipe, 0-indexed.
void tred2(Matrix& a, Vector& d, Vector& e) {
    std::size_t n = a.rows();
    for (std::size_t i = n; i-- > 1;) {
        std::size_t l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (std::size_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
                for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

void tqli(Vector& d, Vector& e, Matrix& z) {
    std::size_t n = d.size();
    if (n <= 1) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (++iter == 50) fail(ErrorCode::InvalidInput, "eigh: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

SpectralDecomposition eigh(const Matrix& m) {
    std::size_t n = m.rows();
    if (n == 0 || m.cols() != n) fail(ErrorCode::ShapeError, "eigh: matrix must be square");
    if (!all_finite(m)) fail(ErrorCode::InvalidInput, "eigh: non-finite entries");
    double scale = max_abs(m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(m(i, j) - m(j, i)) > 1e-8 * std::max(1.0, scale))
                fail(ErrorCode::InvalidInput, "eigh: matrix is not symmetric");

    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));

    Vector d(n, 0.0), e(n, 0.0);
    tred2(a, d, e);
    tqli(d, e, a);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });

    SpectralDecomposition dec;
    dec.eigenvalues.assign(n, 0.0);
    dec.vectors = Matrix(n, n);
    for (std::size_t jj = 0; jj < n; ++jj) {
        std::size_t j = order[jj];
        dec.eigenvalues[jj] = d[j];
        std::size_t pivot = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = std::fabs(a(i, j));
            if (v > best + 1e-15) {
                best = v;
                pivot = i;
            }
        }
        double flip = a(pivot, j) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) dec.vectors(i, jj) = flip * a(i, j);
    }
    return dec;
}

namespace {

// One power-iteration run on A^T A from a given start; returns the converged
// singular-value estimate (0 if the iterate dies).
double power_run(const Matrix& m, Vector v) {
    double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    for (double& x : v) x /= nv;
    double prev = -1.0;
    for (int it = 0; it < 10000; ++it) {
        Vector w = matvec(m, v);
        Vector z = matvec_transposed(m, w);
        double nz = norm2(z);
        if (nz == 0.0) return 0.0;
        for (double& x : z) x /= nz;
        double lambda = 0.0;  // Rayleigh quotient for A^T A
        {
            Vector w2 = matvec(m, z);
            lambda = dot(w2, w2);
        }
        v.swap(z);
        double sigma = std::sqrt(std::max(0.0, lambda));
        if (prev >= 0.0 && std::fabs(sigma - prev) <= 1e-10 * std::max(1.0, sigma)) return sigma;
        prev = sigma;
    }
    return prev < 0.0 ? 0.0 : prev;
}

}  // namespace

double operator_norm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) fail(ErrorCode::ShapeError, "operator_norm: empty matrix");
    if (!all_finite(m)) fail(ErrorCode::InvalidInput, "operator_norm: non-finite entries");
    if (max_abs(m) == 0.0) return 0.0;

    Vector e1(m.cols(), 0.0);
    e1[0] = 1.0;
    double s1 = power_run(m, e1);

    Rng rng(0x51b0a1d5eedULL);
    Vector r(m.cols());
    for (double& x : r) x = rng.normal();
    double s2 = power_run(m, r);

    return std::max(s1, s2);
}

Matrix top_k_subspace(const SpectralDecomposition& dec, std::size_t k, bool* degenerate_gap) {
    std::size_t d = dec.eigenvalues.size();
    if (k < 1 || k >= d) fail(ErrorCode::InvalidRank, "top_k_subspace: k out of range");
    if (degenerate_gap)
        *degenerate_gap = dec.eigenvalues[k - 1] - dec.eigenvalues[k] <= 1e-12;
    Matrix u(d, k);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < k; ++j) u(i, j) = dec.vectors(i, j);
    return u;
}

namespace {

void check_orthonormal(const Matrix& a, const char* who) {
    Matrix g = gram(a, a);
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) {
            double want = i == j ? 1.0 : 0.0;
            if (std::fabs(g(i, j) - want) > 1e-8)
                fail(ErrorCode::InvalidInput, std::string(who) + ": basis is not orthonormal");
        }
}

}  // namespace

PrincipalAngles sin_theta(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) fail(ErrorCode::ShapeError, "sin_theta: bases differ in shape");
    if (a.rows() < a.cols() || a.cols() == 0)
        fail(ErrorCode::ShapeError, "sin_theta: need d x k with k <= d, k >= 1");
    if (!all_finite(a) || !all_finite(b)) fail(ErrorCode::InvalidInput, "sin_theta: non-finite entries");
    check_orthonormal(a, "sin_theta");
    check_orthonormal(b, "sin_theta");

    Svd svd = jacobi_svd(gram(a, b));
    PrincipalAngles out;
    out.sines.reserve(svd.singular.size());
    for (double s : svd.singular) {
        double c = std::clamp(s, 0.0, 1.0);
        out.sines.push_back(std::sqrt(std::max(0.0, 1.0 - c * c)));
    }
    std::sort(out.sines.begin(), out.sines.end(), std::greater<double>());
    out.max_sine = out.sines.empty() ? 0.0 : out.sines.front();
    return out;
}

Matrix procrustes_align(const Matrix& u, const Matrix& u_hat) {
    if (!u.same_shape(u_hat)) fail(ErrorCode::ShapeError, "procrustes_align: bases differ in shape");
    if (u.rows() < u.cols() || u.cols() == 0)
        fail(ErrorCode::ShapeError, "procrustes_align: need d x k with k <= d, k >= 1");
    check_orthonormal(u, "procrustes_align");
    check_orthonormal(u_hat, "procrustes_align");

    Svd svd = jacobi_svd(gram(u, u_hat));
    if (svd.singular.back() < 1e-12)
        fail(ErrorCode::AlignmentDegenerate, "procrustes_align: subspaces nearly orthogonal");
    // Polar factor W V^T of U^T Uhat.
    Matrix q = matmul(svd.u, transpose(svd.v));
    return q;
}

Matrix randomized_range(const Matrix& m, std::size_t k, std::size_t oversample,
                        std::size_t power_iters, std::uint64_t seed) {
    std::size_t d = m.rows();
    if (m.cols() != d) fail(ErrorCode::ShapeError, "randomized_range: matrix must be square");
    if (k < 1 || k > d) fail(ErrorCode::InvalidRank, "randomized_range: k out of range");
    if (k + oversample > d)
        fail(ErrorCode::InvalidRank, "randomized_range: k + oversample exceeds d");
    if (!all_finite(m)) fail(ErrorCode::InvalidInput, "randomized_range: non-finite entries");

    std::size_t p = k + oversample;
    Rng rng(splitmix64(seed ^ 0xa5a5a5a5deadbeefULL));
    Matrix q(d, p);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < p; ++j) q(i, j) = rng.normal();
    orthonormalize_columns(q);

    Matrix prev_top;
    for (std::size_t sweep = 0; sweep < power_iters + 200; ++sweep) {
        Matrix y = matmul(m, q);
        if (orthonormalize_columns(y) < k)
            fail(ErrorCode::InvalidRank, "randomized_range: matrix rank below k");
        q = std::move(y);

        // Rayleigh-Ritz on the sketch to read off the current top-k subspace.
        Matrix t = gram(q, matmul(m, q));
        SpectralDecomposition small = eigh(t);
        // Order Ritz pairs by |lambda| (operator-norm sense: extreme ends first).
        std::vector<std::size_t> order(small.eigenvalues.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return std::fabs(small.eigenvalues[x]) > std::fabs(small.eigenvalues[y]);
        });
        Matrix top(d, k);
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t col = order[j];
            for (std::size_t i = 0; i < d; ++i) {
                double s = 0.0;
                for (std::size_t l = 0; l < p; ++l) s += q(i, l) * small.vectors(l, col);
                top(i, j) = s;
            }
        }
        orthonormalize_columns(top);

        if (sweep + 1 >= power_iters && prev_top.rows() == d) {
            PrincipalAngles ang = sin_theta(prev_top, top);
            if (ang.max_sine <= 1e-9) return top;
        }
        prev_top = std::move(top);
    }
    return prev_top;
}

}  // namespace sip
