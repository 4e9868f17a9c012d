#include "sip/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sip {

Matrix matmul(const Matrix& A, const Matrix& B) {
    if (A.cols() != B.rows()) fail(ErrorCode::ShapeError, "matmul: inner dimensions differ");
    Matrix C(A.rows(), B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double* ai = A.row(i);
        double* ci = C.row(i);
        for (std::size_t k = 0; k < A.cols(); ++k) {
            double aik = ai[k];
            if (aik == 0.0) continue;
            const double* bk = B.row(k);
            for (std::size_t j = 0; j < B.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return C;
}

Matrix transpose(const Matrix& A) {
    Matrix T(A.cols(), A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
    return T;
}

Matrix gram(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows()) fail(ErrorCode::ShapeError, "gram: row counts differ");
    Matrix C(A.cols(), B.cols());
    for (std::size_t r = 0; r < A.rows(); ++r) {
        const double* ar = A.row(r);
        const double* br = B.row(r);
        for (std::size_t i = 0; i < A.cols(); ++i) {
            double ari = ar[i];
            if (ari == 0.0) continue;
            double* ci = C.row(i);
            for (std::size_t j = 0; j < B.cols(); ++j) ci[j] += ari * br[j];
        }
    }
    return C;
}

Vector matvec(const Matrix& A, const Vector& x) {
    if (A.cols() != x.size()) fail(ErrorCode::ShapeError, "matvec: dimension mismatch");
    Vector y(A.rows(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double* ai = A.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j) s += ai[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_transposed(const Matrix& A, const Vector& x) {
    if (A.rows() != x.size()) fail(ErrorCode::ShapeError, "matvec_transposed: dimension mismatch");
    Vector y(A.cols(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double* ai = A.row(i);
        double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < A.cols(); ++j) y[j] += ai[j] * xi;
    }
    return y;
}

Matrix subtract(const Matrix& A, const Matrix& B) {
    if (!A.same_shape(B)) fail(ErrorCode::ShapeError, "subtract: shapes differ");
    Matrix C(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows() * A.cols(); ++i) C.data()[i] = A.data()[i] - B.data()[i];
    return C;
}

Matrix add(const Matrix& A, const Matrix& B) {
    if (!A.same_shape(B)) fail(ErrorCode::ShapeError, "add: shapes differ");
    Matrix C(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows() * A.cols(); ++i) C.data()[i] = A.data()[i] + B.data()[i];
    return C;
}

Matrix scale(const Matrix& A, double c) {
    Matrix C(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows() * A.cols(); ++i) C.data()[i] = c * A.data()[i];
    return C;
}

double dot(const Vector& x, const Vector& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

double frobenius_norm(const Matrix& A) {
    double s = 0.0;
    for (std::size_t i = 0; i < A.rows() * A.cols(); ++i) s += A.data()[i] * A.data()[i];
    return std::sqrt(s);
}

double max_abs(const Matrix& A) {
    double m = 0.0;
    for (std::size_t i = 0; i < A.rows() * A.cols(); ++i) m = std::max(m, std::fabs(A.data()[i]));
    return m;
}

bool all_finite(const Matrix& A) {
    for (std::size_t i = 0; i < A.rows() * A.cols(); ++i)
        if (!std::isfinite(A.data()[i])) return false;
    return true;
}

bool all_finite(const Vector& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

std::size_t orthonormalize_columns(Matrix& A, double tol) {
    std::size_t m = A.rows(), n = A.cols();
    std::size_t rank = 0;
    std::vector<double> col(m);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) col[i] = A(i, j);
        double orig = std::sqrt(std::inner_product(col.begin(), col.end(), col.begin(), 0.0));
        // Two MGS passes for numerical orthogonality.
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < rank; ++p) {
                double proj = 0.0;
                for (std::size_t i = 0; i < m; ++i) proj += A(i, p) * col[i];
                for (std::size_t i = 0; i < m; ++i) col[i] -= proj * A(i, p);
            }
        }
        double nrm = std::sqrt(std::inner_product(col.begin(), col.end(), col.begin(), 0.0));
        if (nrm > tol * std::max(1.0, orig)) {
            for (std::size_t i = 0; i < m; ++i) A(i, rank) = col[i] / nrm;
            ++rank;
        }
    }
    for (std::size_t j = rank; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) A(i, j) = 0.0;
    return rank;
}

Svd jacobi_svd(const Matrix& A) {
    std::size_t m = A.rows(), n = A.cols();
    Matrix U = A;
    Matrix V = Matrix::identity(n);
    const double eps = 1e-14;
    // One-sided Jacobi: rotate column pairs of U until all are orthogonal.
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += U(i, p) * U(i, p);
                    beta += U(i, q) * U(i, q);
                    gamma += U(i, p) * U(i, q);
                }
                off = std::max(off, std::fabs(gamma) / std::max(std::sqrt(alpha * beta), 1e-300));
                if (std::fabs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    double up = U(i, p), uq = U(i, q);
                    U(i, p) = c * up - s * uq;
                    U(i, q) = s * up + c * uq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vp = V(i, p), vq = V(i, q);
                    V(i, p) = c * vp - s * vq;
                    V(i, q) = s * vp + c * vq;
                }
            }
        }
        if (off < eps) break;
    }
    Svd out;
    out.singular.assign(n, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) s2 += U(i, j) * U(i, j);
        out.singular[j] = std::sqrt(s2);
        order[j] = j;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.singular[a] > out.singular[b]; });
    Svd sorted;
    sorted.u = Matrix(m, n);
    sorted.v = Matrix(n, n);
    sorted.singular.assign(n, 0.0);
    for (std::size_t jj = 0; jj < n; ++jj) {
        std::size_t j = order[jj];
        double s = out.singular[j];
        sorted.singular[jj] = s;
        for (std::size_t i = 0; i < m; ++i) sorted.u(i, jj) = s > 1e-300 ? U(i, j) / s : 0.0;
        for (std::size_t i = 0; i < n; ++i) sorted.v(i, jj) = V(i, j);
    }
    return sorted;
}

Vector solve_linear(Matrix A, Vector b) {
    if (A.rows() != A.cols() || A.rows() != b.size())
        fail(ErrorCode::ShapeError, "solve_linear: shape mismatch");
    std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(A(r, col)) > std::fabs(A(piv, col))) piv = r;
        if (std::fabs(A(piv, col)) < 1e-12)
            fail(ErrorCode::SingularScatter, "solve_linear: matrix is numerically singular");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(col, j), A(piv, j));
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = A(r, col) / A(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) A(r, j) -= f * A(col, j);
            b[r] -= f * b[col];
        }
    }
    Vector x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    return x;
}

}  // namespace sip
