#pragma once

#include <doctest.h>

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "sip/errors.hpp"
#include "sip/fisher.hpp"
#include "sip/linalg.hpp"
#include "sip/rng.hpp"

// Fails the surrounding test case unless `expr` throws a sip::Error carrying
// exactly the named code.
#define CHECK_SIP_ERROR(expr, code_)                                      \
    do {                                                                  \
        bool caught_sip_error_ = false;                                   \
        try {                                                             \
            (void)(expr);                                                 \
        } catch (const sip::Error& e_) {                                  \
            caught_sip_error_ = true;                                     \
            CHECK_MESSAGE(e_.code() == sip::ErrorCode::code_, e_.what()); \
        }                                                                 \
        CHECK_MESSAGE(caught_sip_error_, "no sip::Error from " #expr);    \
    } while (0)

namespace testsupport {

inline sip::Matrix matrix(std::initializer_list<std::initializer_list<double>> rows) {
    sip::Matrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline sip::FeatureMatrix features(std::initializer_list<std::initializer_list<double>> rows,
                                   std::vector<int> labels = {}) {
    sip::FeatureMatrix f;
    f.rows = matrix(rows);
    if (!labels.empty()) f.labels = std::move(labels);
    return f;
}

inline sip::Matrix random_matrix(std::size_t r, std::size_t c, sip::Rng& rng,
                                 double scale = 1.0) {
    sip::Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = scale * rng.normal();
    return m;
}

inline sip::Matrix random_symmetric(std::size_t d, sip::Rng& rng, double scale = 1.0) {
    sip::Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            double v = scale * rng.normal();
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

inline sip::Matrix random_orthonormal(std::size_t d, std::size_t k, sip::Rng& rng) {
    sip::Matrix m = random_matrix(d, k, rng);
    REQUIRE(sip::orthonormalize_columns(m) == k);
    return m;
}

inline double max_abs_diff(const sip::Matrix& a, const sip::Matrix& b) {
    return sip::max_abs(sip::subtract(a, b));
}

inline bool bitwise_equal(const sip::Matrix& a, const sip::Matrix& b) {
    if (!a.same_shape(b)) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

// Max |[A^T A - I]_ij|; zero iff the columns are orthonormal.
inline double orthonormality_defect(const sip::Matrix& a) {
    return max_abs_diff(sip::gram(a, a), sip::Matrix::identity(a.cols()));
}

}  // namespace testsupport
