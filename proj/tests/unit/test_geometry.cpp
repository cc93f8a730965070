#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperwave/error.hpp"
#include "hyperwave/geometry.hpp"

using namespace hyperwave;

TEST_CASE("origin") {
    const HPoint o3 = origin(3);
    CHECK(o3.dim() == 3);
    CHECK(o3[0] == 1.0);
    CHECK(o3[1] == 0.0);
    CHECK(minkowski(o3.coords(), o3.coords()) == -1.0);
    CHECK(dist(o3, o3) == 0.0);
    CHECK(origin(2).coords().size() == 3);
    CHECK_THROWS_AS(origin(1), DomainError);
}

TEST_CASE("boost translates the origin by its rapidity") {
    const HPoint o = origin(3);
    CHECK(dist(o, apply(boost(3, 1.0, 1), o)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dist(o, apply(boost(3, 2.5, 1), o)) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK((boost(3, 0.0, 1).matrix() - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
    const Isometry prod = compose(boost(3, 1.0, 1), boost(3, -1.0, 1));
    CHECK((prod.matrix() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    const Isometry sum = compose(boost(3, 0.7, 2), boost(3, 1.1, 2));
    CHECK((sum.matrix() - boost(3, 1.8, 2).matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(boost(3, 1.0, 0), DomainError);
    CHECK_THROWS_AS(boost(3, 1.0, 4), DomainError);
}

TEST_CASE("isometry invariants") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ell(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Isometry a = compose(random_rotation(3, rng), compose(boost(3, ell(rng), 1), random_rotation(3, rng)));
        const HPoint x = random_point(3, 2.0 * std::abs(ell(rng)), rng);
        const HPoint y = random_point(3, 2.0 * std::abs(ell(rng)), rng);
        CHECK(minkowski(apply(a, x).coords(), apply(a, y).coords()) ==
              doctest::Approx(minkowski(x.coords(), y.coords())).epsilon(1e-9));
        CHECK(dist(apply(a, x), apply(a, y)) == doctest::Approx(dist(x, y)).epsilon(1e-9));
        const Isometry id = compose(a, inverse(a));
        CHECK((id.matrix() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((apply(Isometry::identity(3), x).coords() - x.coords()).norm() < 1e-13 * x[0]);
    }
}

TEST_CASE("triangle inequality on random triples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rad(0.0, 5.0);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
        const HPoint x = random_point(3, rad(rng), rng);
        const HPoint y = random_point(3, rad(rng), rng);
        const HPoint z = random_point(3, rad(rng), rng);
        if (dist(x, z) > dist(x, y) + dist(y, z) + 1e-10) ++violations;
        CHECK(dist(x, y) == doctest::Approx(dist(y, x)).epsilon(1e-14));
    }
    CHECK(violations == 0);
}

TEST_CASE("conjugated boosts keep their translation length") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const Isometry g = conjugate(boost(3, 2.3, 1), random_rotation(3, rng));
        CHECK(translation_length(g) == doctest::Approx(2.3).epsilon(1e-10));
        CHECK(dist(origin(3), apply(g, origin(3))) == doctest::Approx(2.3).epsilon(1e-10));
    }
    CHECK(translation_length(rotation(3, 1, 2, 0.4)) == 0.0);
}

TEST_CASE("long products stay on the hyperboloid") {
    std::mt19937_64 rng(5);
    const Isometry a = conjugate(boost(3, 0.9, 1), random_rotation(3, rng));
    const Isometry b = conjugate(boost(3, 0.6, 2), random_rotation(3, rng));
    Isometry w = Isometry::identity(3);
    for (int k = 0; k < 64; ++k) w = compose(w, (k % 3 == 0) ? b : a);
    CHECK(w.depth() < 16);
    const HPoint x = apply(w, origin(3));
    CHECK(std::abs(minkowski(x.coords(), x.coords()) + 1.0) < 1e-12 * x.coords()[0] * x.coords()[0]);
    CHECK(w.lorentz_defect() < 1e-8);
    // d(o, w o) agrees with the point recomputed from the spatial part
    CHECK(dist(origin(3), x) == doctest::Approx(std::acosh(x.coords()[0])).epsilon(1e-12));
}

TEST_CASE("invalid inputs are rejected") {
    Eigen::VectorXd bad(4);
    bad << -1.0, 0.0, 0.0, 0.0;
    CHECK_THROWS_AS(HPoint::from_coords(bad), DomainError);
    Eigen::VectorXd off(4);
    off << 2.0, 0.0, 0.0, 0.0;
    CHECK_THROWS_AS(HPoint::from_coords(off, false), DomainError);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
    m(1, 2) = 0.5;
    CHECK_THROWS_AS(Isometry::from_matrix(m), DomainError);
    CHECK_THROWS_AS(dist(origin(2), origin(3)), DomainError);
}
