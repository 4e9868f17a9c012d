#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "sip/probe.hpp"
#include "sip/rng.hpp"
#include "sip/spectral.hpp"
#include "support/test_util.hpp"

using namespace sip;
using testsupport::features;
using testsupport::matrix;
using testsupport::random_orthonormal;

namespace {

// Two symmetric classes at (+-2, 0, 0) with unit scatter spread across the
// first two coordinates; the Fisher direction inside span{e1, e2} is e1.
FeatureMatrix symmetric_toy() {
    return features({{3.0, 0.0, 0.0},
                     {1.0, 0.0, 0.0},
                     {2.0, 1.0, 0.0},
                     {2.0, -1.0, 0.0},
                     {-3.0, 0.0, 0.0},
                     {-1.0, 0.0, 0.0},
                     {-2.0, 1.0, 0.0},
                     {-2.0, -1.0, 0.0}},
                    {1, 1, 1, 1, -1, -1, -1, -1});
}

Matrix e12_basis() {
    return matrix({{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}});
}

}  // namespace

TEST_CASE("fit_direction finds the in-subspace discriminant") {
    Probe p = fit_direction(symmetric_toy(), e12_basis());
    REQUIRE(p.direction.size() == 2);
    CHECK(p.direction[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(p.direction[1]) < 1e-9);
    CHECK(std::abs(p.bias) < 1e-12);
    CHECK(norm2(p.direction) == doctest::Approx(1.0).epsilon(1e-12));

    // The probe classifies its own class means correctly.
    CHECK(classify(p, Vector{2.0, 0.0, 0.0}) == 1);
    CHECK(classify(p, Vector{-2.0, 0.0, 0.0}) == -1);
}

TEST_CASE("fit_direction flips with the labels") {
    // Shift the toy along e1 so the bias is nonzero.
    FeatureMatrix f = symmetric_toy();
    for (std::size_t i = 0; i < f.n(); ++i) f.rows(i, 0) += 0.5;
    Probe p = fit_direction(f, e12_basis());
    CHECK(std::abs(p.bias) > 1e-3);

    FeatureMatrix flipped = f;
    for (int& y : *flipped.labels) y = -y;
    Probe q = fit_direction(flipped, e12_basis());
    CHECK(q.direction[0] == doctest::Approx(-p.direction[0]).epsilon(1e-12));
    CHECK(q.direction[1] == doctest::Approx(-p.direction[1]).epsilon(1e-12));
    CHECK(q.bias == doctest::Approx(-p.bias).epsilon(1e-12));
}

TEST_CASE("fit_direction degenerate inputs") {
    FeatureMatrix one_class = features({{1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}}, {1, 1});
    CHECK_SIP_ERROR(fit_direction(one_class, e12_basis()), DegenerateLabels);

    // All mass on the e1 axis: the within-class scatter is singular along e2.
    FeatureMatrix axis = features(
        {{2.0, 0.0, 0.0}, {3.0, 0.0, 0.0}, {-2.0, 0.0, 0.0}, {-3.0, 0.0, 0.0}},
        {1, 1, -1, -1});
    CHECK_SIP_ERROR(fit_direction(axis, e12_basis(), 0.0), SingularScatter);
    Probe p = fit_direction(axis, e12_basis(), 1e-6);
    CHECK(p.direction[0] == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_SIP_ERROR(fit_direction(symmetric_toy(), matrix({{1.0, 0.0}, {0.0, 1.0}})), ShapeError);
    CHECK_SIP_ERROR(fit_direction(symmetric_toy(), scale(e12_basis(), 2.0)), InvalidInput);
    CHECK_SIP_ERROR(fit_direction(symmetric_toy(), e12_basis(), -1.0), InvalidRidge);
}

TEST_CASE("score projects, rotates and shifts") {
    Probe p;
    p.subspace = matrix({{1.0}, {0.0}});
    p.direction = {1.0};
    p.bias = 0.0;
    CHECK(score(p, Vector{3.0, 7.0}) == 3.0);

    // Orthogonal component only: the score is the bias.
    p.bias = 0.7;
    CHECK(score(p, Vector{0.0, 5.0}) == 0.7);

    // Row overload matches the vector overload entry by entry.
    FeatureMatrix f = features({{3.0, 7.0}, {-1.0, 2.0}, {0.5, 0.0}});
    std::vector<double> s = score(p, f);
    REQUIRE(s.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        Vector h{f.rows(i, 0), f.rows(i, 1)};
        CHECK(s[i] == score(p, h));
    }

    CHECK_SIP_ERROR(score(p, Vector{1.0, 2.0, 3.0}), ShapeError);
}

TEST_CASE("score is linear for zero-bias probes") {
    Rng rng(301);
    Probe p;
    p.subspace = random_orthonormal(5, 2, rng);
    p.direction = {0.6, 0.8};
    p.bias = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Vector h(5);
        for (double& x : h) x = rng.normal();
        double alpha = 3.0 * rng.normal();
        Vector scaled = h;
        for (double& x : scaled) x *= alpha;
        CHECK(score(p, scaled) == doctest::Approx(alpha * score(p, h)).epsilon(1e-12));

        // Direct oracle: a^T (U^T h) + bias.
        double oracle = dot(p.direction, matvec_transposed(p.subspace, h));
        CHECK(score(p, h) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("classify signs scores with ties to +1") {
    Probe p;
    p.subspace = matrix({{1.0}, {0.0}});
    p.direction = {1.0};
    p.bias = 0.0;
    FeatureMatrix f = features({{-1.0, 4.0}, {0.0, 4.0}, {2.0, 4.0}});
    CHECK(classify(p, f) == std::vector<int>{-1, 1, 1});

    // Jointly rescaling (direction, bias) by a positive factor cannot change
    // any classification.
    Rng rng(307);
    Probe base;
    base.subspace = random_orthonormal(4, 2, rng);
    base.direction = {0.28, 0.96};
    base.bias = -0.3;
    Probe scaled = base;
    for (double& x : scaled.direction) x *= 3.5;
    scaled.bias *= 3.5;
    FeatureMatrix r;
    r.rows = testsupport::random_matrix(50, 4, rng);
    CHECK(classify(base, r) == classify(scaled, r));
}

TEST_CASE("disagreement_risk counts sign mismatches") {
    Probe p;
    p.subspace = matrix({{1.0}, {0.0}});
    p.direction = {1.0};
    p.bias = 0.0;

    FeatureMatrix f = features({{-1.0, 0.0}, {0.0, 1.0}, {2.0, 0.0}, {3.0, 1.0}});
    CHECK(disagreement_risk(p, p, f) == 0.0);

    // The negated probe flips every nonzero score; the zero-score row maps
    // to +1 under both.
    Probe q = p;
    q.direction = {-1.0};
    q.bias = -0.0;
    CHECK(disagreement_risk(p, q, f) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(disagreement_risk(q, p, f) == doctest::Approx(0.75).epsilon(1e-15));

    // Brute force on four points against a shifted probe.
    Probe shifted = p;
    shifted.bias = -1.5;  // classifies +1 iff x >= 1.5
    // p gives (-1, +1, +1, +1); shifted gives (-1, -1, +1, +1) -> 1 of 4.
    CHECK(disagreement_risk(p, shifted, f) == doctest::Approx(0.25).epsilon(1e-15));

    FeatureMatrix empty;
    empty.rows = Matrix(0, 2);
    CHECK_SIP_ERROR(disagreement_risk(p, q, empty), TooFewSamples);
}

TEST_CASE("margin_samples are absolute scores") {
    Probe p;
    p.subspace = matrix({{1.0}, {0.0}});
    p.direction = {1.0};
    p.bias = 0.0;
    FeatureMatrix f = features({{-2.0, 9.0}, {1.0, 9.0}, {0.0, 3.0}});
    CHECK(margin_samples(p, f) == std::vector<double>{2.0, 1.0, 0.0});
}

TEST_CASE("plug-in scores degrade no faster than the subspace angle") {
    // Estimated-basis probes transported by the Procrustes rotation: the
    // score error is at most (1 + sqrt 2) ||h|| sin_theta, for any relative
    // orientation of the two bases.
    Rng rng(311);
    std::size_t accepted = 0;
    while (accepted < 1000) {
        std::size_t d = 2 + rng.below(7);
        std::size_t k = 1 + rng.below(std::min<std::uint64_t>(3, d - 1));
        Matrix u = random_orthonormal(d, k, rng);

        Matrix uh;
        if (accepted % 4 == 0) {
            uh = random_orthonormal(d, k, rng);
        } else {
            uh = u;
            double eps = 0.05 + 0.6 * rng.uniform();
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < k; ++j) uh(i, j) += eps * rng.normal();
            if (orthonormalize_columns(uh) != k) continue;
        }

        Matrix q;
        try {
            q = procrustes_align(u, uh);
        } catch (const Error&) {
            continue;
        }
        ++accepted;

        Vector a(k);
        for (double& x : a) x = rng.normal();
        double na = norm2(a);
        for (double& x : a) x /= na;

        Probe ideal;
        ideal.subspace = u;
        ideal.direction = a;
        Probe plugged;
        plugged.subspace = uh;
        plugged.direction = matvec_transposed(q, a);  // Q^T a

        Vector h(d);
        for (double& x : h) x = rng.normal();
        double s = sin_theta(u, uh).max_sine;
        double bound = (1.0 + std::sqrt(2.0)) * norm2(h) * s + 1e-8;
        CHECK(std::abs(score(plugged, h) - score(ideal, h)) <= bound);
    }
}
