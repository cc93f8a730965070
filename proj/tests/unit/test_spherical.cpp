#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hyperwave/error.hpp"
#include "hyperwave/spherical.hpp"

using namespace hyperwave;

namespace {

double h3_phi(double lambda, double r) {
    if (r == 0.0) return 1.0;
    if (lambda == 0.0) return r / std::sinh(r);
    return std::sin(lambda * r) / (lambda * std::sinh(r));
}

// radial Laplacian f'' + (n-1) coth(r) f' by central differences
double radial_laplacian(const std::function<double(double)>& f, int n, double r, double h) {
    const double d2 = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
    const double d1 = (f(r + h) - f(r - h)) / (2.0 * h);
    return d2 + (n - 1.0) / std::tanh(r) * d1;
}

}  // namespace

TEST_CASE("space parameters") {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    CHECK(p.rho == 1.0);
    CHECK(p.m_alpha == 2.0);
    CHECK(p.m_2alpha == 0.0);
    CHECK(p.sphere_area() == doctest::Approx(4.0 * std::numbers::pi));
    CHECK(p.sine_integral() == doctest::Approx(2.0));
    CHECK(SpaceParams::hyperbolic(2).sine_integral() == doctest::Approx(std::numbers::pi));
    CHECK(SpaceParams::hyperbolic(5).rho == 2.0);
    CHECK_THROWS_AS(SpaceParams::hyperbolic(1), DomainError);
}

TEST_CASE("phi_lambda normalization and closed form in H^3") {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    CHECK(phi_lambda(p, 2.7, 0.0) == cplx(1.0, 0.0));
    CHECK(phi_lambda(p, 2.0, 1.5).real() == doctest::Approx(std::sin(3.0) / (2.0 * std::sinh(1.5))).epsilon(1e-10));
    CHECK(phi_lambda(p, 2.0, 1.5).real() == doctest::Approx(0.033154).epsilon(1e-4));
    double worst = 0.0;
    for (double lam = 0.0; lam <= 8.0; lam += 0.5) {
        for (double r : {0.01, 0.3, 1.0, 2.5, 5.0, 10.0, 15.0, 20.0}) {
            worst = std::max(worst, std::abs(phi_lambda(p, lam, r) - h3_phi(lam, r)));
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("phi0") {
    const SpaceParams p3 = SpaceParams::hyperbolic(3);
    CHECK(phi0(p3, 0.0) == 1.0);
    CHECK(phi0(p3, 1.0) == doctest::Approx(0.850918).epsilon(1e-6));
    for (int n : {2, 3, 4, 6}) {
        const SpaceParams p = SpaceParams::hyperbolic(n);
        double prev = 1.0;
        double lo = 1e300, hi = 0.0;
        for (double r = 0.25; r <= 40.0; r += 0.25) {
            const double v = phi0(p, r);
            CHECK(v > 0.0);
            CHECK(v < prev);
            prev = v;
            const double ratio = v / ((1.0 + r) * std::exp(-p.rho * r));
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        CHECK(lo > 0.0);
        CHECK(hi < 1e3);
        MESSAGE("n=" << n << " phi0/((1+r)e^{-rho r}) in [" << lo << ", " << hi << "]");
    }
}

TEST_CASE("eigen-equation by finite differences") {
    for (int n : {2, 3, 5}) {
        const SpaceParams p = SpaceParams::hyperbolic(n);
        for (double lam : {0.0, 1.3, 3.0}) {
            auto f = [&](double r) { return phi_lambda(p, lam, r).real(); };
            for (double r : {0.7, 2.0}) {
                const double target = -(lam * lam + p.rho * p.rho) * f(r);
                const double e1 = std::abs(radial_laplacian(f, n, r, 1e-2) - target);
                const double e2 = std::abs(radial_laplacian(f, n, r, 5e-3) - target);
                CHECK(e1 < 1e-3);
                // second order: halving h cuts the residual by ~4
                if (e1 > 1e-8) CHECK(e2 < 0.35 * e1);
            }
        }
    }
}

TEST_CASE("three phi routes agree") {
    for (int n : {2, 4, 5, 7}) {
        const SpaceParams p = SpaceParams::hyperbolic(n);
        for (double r : {0.05, 0.5, 1.0, 3.0, 8.0, 20.0}) {
            const PhiRule rule(p, r, 12.0);
            for (double lam : {0.0, 0.4, 1.0, 2.5, 7.0, 12.0}) {
                const double theta = phi_lambda(p, lam, r).real();
                const double scale = phi0(p, r);
                CHECK(std::abs(rule(lam) - theta) < 1e-10 * scale + 1e-14);
                if (lam >= 1.0 && r >= 0.5) CHECK(std::abs(phi_hc(p, lam, r) - theta) < 1e-10 * scale + 1e-14);
                CHECK(std::abs(phi_real(p, lam, r) - theta) < 1e-10 * scale + 1e-14);
            }
        }
    }
}

TEST_CASE("evenness and the phi0 bound") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> lam(-10.0, 10.0), rad(0.0, 10.0);
    for (int n : {2, 3, 4}) {
        const SpaceParams p = SpaceParams::hyperbolic(n);
        for (int i = 0; i < 30; ++i) {
            const double l = lam(rng), r = rad(rng);
            const cplx a = phi_lambda(p, l, r);
            CHECK(std::abs(a - phi_lambda(p, -l, r)) < 1e-12);
            CHECK(std::abs(a) <= phi0(p, r) + 1e-12);
        }
    }
}

TEST_CASE("plancherel density") {
    const SpaceParams p3 = SpaceParams::hyperbolic(3);
    CHECK(plancherel_density(p3, 0.0) == 0.0);
    CHECK(plancherel_density(p3, 1e-6) < 1e-11);
    for (double l : {0.5, 1.0, 2.0}) {
        CHECK(plancherel_density(p3, 2.0 * l) / plancherel_density(p3, l) == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(plancherel_density(p3, l) == doctest::Approx(l * l).epsilon(1e-12));
    }
    CHECK(std::abs(c_function(p3, cplx(0.0, -1.0)) - 1.0) < 1e-13);
    // H^2: |c|^{-2} = pi lambda tanh(pi lambda)
    const SpaceParams p2 = SpaceParams::hyperbolic(2);
    for (double l : {0.3, 1.0, 4.0}) {
        CHECK(plancherel_density(p2, l) ==
              doctest::Approx(std::numbers::pi * l * std::tanh(std::numbers::pi * l)).epsilon(1e-12));
    }
    for (int n : {2, 3, 4, 5, 8}) {
        const SpaceParams p = SpaceParams::hyperbolic(n);
        CHECK(std::abs(c_function(p, cplx(0.0, -p.rho)) - 1.0) < 1e-12);
        std::mt19937_64 rng(n);
        std::uniform_real_distribution<double> u(0.0, 50.0);
        for (int i = 0; i < 10; ++i) {
            const double l = u(rng);
            CHECK(plancherel_density(p, l) == plancherel_density(p, -l));
            CHECK(plancherel_density(p, l) >= 0.0);
        }
        const double slope = std::log(plancherel_density(p, 1000.0) / plancherel_density(p, 100.0)) / std::log(10.0);
        CHECK(std::abs(slope - (n - 1.0)) < 0.05);
        CHECK(std::isfinite(plancherel_density(p, 5000.0)));
    }
}

TEST_CASE("inversion constant agrees with the analytic normalization") {
    // C_0 = 2^{n-2} / (pi A_n), where A_n is the area of S^{n-1}
    for (int n : {2, 3, 4, 5}) {
        const SpaceParams p = SpaceParams::hyperbolic(n);
        const double expected = std::pow(2.0, n - 2.0) / (std::numbers::pi * p.sphere_area());
        MESSAGE("n=" << n << " C0=" << inversion_constant(p) << " analytic=" << expected);
        CHECK(inversion_constant(p) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("round trip of the transform pair") {
    for (int n : {2, 3, 4}) {
        const SpaceParams p = SpaceParams::hyperbolic(n);
        const std::vector<std::function<cplx(double)>> profiles = {
            [](double l) { return cplx(std::exp(-l * l)); },
            [](double l) { return cplx(std::exp(-0.5 * l * l) * (1.0 + l * l)); },
            [](double l) { return cplx(std::exp(-0.5 * l * l) * std::cos(l)); },
        };
        for (const auto& g : profiles) {
            std::vector<double> grid;
            std::vector<cplx> vals;
            for (int i = 0; i <= 400; ++i) {
                const double r = 0.025 * i;
                grid.push_back(r);
                vals.push_back(inverse_transform(p, g, r, 12.0));
            }
            const RadialFunction f(grid, vals);
            double worst = 0.0;
            for (double l = 0.0; l <= 4.0; l += 0.25) worst = std::max(worst, std::abs(spherical_transform(p, f, l) - g(l)));
            CHECK(worst < 1e-6);
        }
    }
}

TEST_CASE("transform of zero and of the Laplacian") {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    const RadialFunction zero(std::vector<double>{0.0, 1.0, 2.0, 3.0}, std::vector<cplx>(4, 0.0));
    CHECK(spherical_transform(p, zero, 1.3) == cplx(0.0, 0.0));
    for (int n : {3, 4}) {
        const SpaceParams q = SpaceParams::hyperbolic(n);
        // smooth bump supported in [0, 2)
        auto f = [](double r) { return r < 2.0 ? std::exp(-1.0 / (1.0 - r * r / 4.0)) : 0.0; };
        auto lap = [&](double r) {
            if (r >= 2.0) return 0.0;
            const double h = 1e-3;
            if (r < 2 * h) r = 2 * h;
            const double d2 = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
            const double d1 = (f(r + h) - f(r - h)) / (2.0 * h);
            return -(d2 + (n - 1.0) / std::tanh(r) * d1);
        };
        for (double l : {0.5, 1.5, 3.0}) {
            const cplx lhs = spherical_transform(q, [&](double r) { return cplx(lap(r)); }, l, 2.0);
            const cplx rhs = (l * l + q.rho * q.rho) * spherical_transform(q, [&](double r) { return cplx(f(r)); }, l, 2.0);
            CHECK(std::abs(lhs - rhs) < 1e-4 * std::abs(rhs));
        }
    }
}
