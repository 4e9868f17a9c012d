#pragma once

#include <cstddef>
#include <vector>

#include "sip/errors.hpp"

namespace sip {

using Vector = std::vector<double>;

// Dense row-major matrix. Small and unclever on purpose; every dimension in
// this project is modest (d up to a few thousand, k tiny).
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    double* row(std::size_t i) { return a_.data() + i * cols_; }
    const double* row(std::size_t i) const { return a_.data() + i * cols_; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

Matrix matmul(const Matrix& A, const Matrix& B);
Matrix transpose(const Matrix& A);
// A^T * B without forming the transposes.
Matrix gram(const Matrix& A, const Matrix& B);
Vector matvec(const Matrix& A, const Vector& x);
Vector matvec_transposed(const Matrix& A, const Vector& x);

Matrix subtract(const Matrix& A, const Matrix& B);
Matrix add(const Matrix& A, const Matrix& B);
Matrix scale(const Matrix& A, double c);

double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);
double frobenius_norm(const Matrix& A);
double max_abs(const Matrix& A);
bool all_finite(const Matrix& A);
bool all_finite(const Vector& x);

// Columns of A orthonormalized in place by modified Gram-Schmidt; returns the
// numerical column rank. Columns that collapse (norm below tol relative to the
// original) are replaced with zeros and pushed to the back.
std::size_t orthonormalize_columns(Matrix& A, double tol = 1e-12);

// Gaussian elimination with partial pivoting; meant for tiny systems (k x k
// within-subspace solves). SingularScatter when a pivot drops below 1e-12.
Vector solve_linear(Matrix A, Vector b);

struct Svd {
    Matrix u;        // m x r
    Vector singular; // descending, length r
    Matrix v;        // n x r
};

// One-sided Jacobi SVD for small matrices (principal angles, Procrustes).
Svd jacobi_svd(const Matrix& A);

}  // namespace sip
