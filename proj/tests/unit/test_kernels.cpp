#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hyperwave/error.hpp"
#include "hyperwave/kernels.hpp"
#include "hyperwave/quadrature.hpp"

using namespace hyperwave;

namespace {

// omega with the given multiplier, integrated directly on [0, L] for n = 3
// using sin(lambda r)/(lambda sinh r), density lambda^2 and C_0 = 1/(2 pi^2)
cplx h3_direct(const WaveParams& wp, double r, double lo, double hi, const CutoffPair& cut, bool high) {
    auto f = [&](double l) -> cplx {
        const double chi = high ? cut.chi_inf(l) : cut.chi0(l);
        const double phi = r == 0.0 ? 1.0 : std::sin(l * r) / (l * std::sinh(r));
        const cplx damp = std::pow(cplx(l * l + wp.kappa_tilde * wp.kappa_tilde), -0.5 * wp.sigma);
        return chi * damp * std::polar(1.0, wp.t * std::sqrt(l * l + wp.kappa * wp.kappa)) * phi * l * l;
    };
    AdaptiveOptions o;
    o.abs_tol = 1e-14;
    o.rel_tol = 1e-12;
    o.max_panels = 200000;
    std::vector<double> bp;
    for (double x = lo; x < hi; x += 0.5) bp.push_back(x);
    bp.push_back(hi);
    const auto res = integrate_adaptive<cplx>(f, std::span<const double>(bp), o);
    return 2.0 / (2.0 * std::numbers::pi * std::numbers::pi) * res.value;
}

}  // namespace

TEST_CASE("cutoff pair") {
    for (auto prof : {CutoffProfile::exponential, CutoffProfile::squared}) {
        const CutoffPair c = cutoffs(prof);
        CHECK(c.chi0(0.5) == 1.0);
        CHECK(c.chi0(-1.0) == 1.0);
        CHECK(c.chi_inf(3.0) == 1.0);
        CHECK(c.chi_inf(-2.0) == 1.0);
        for (double l = -3.0; l <= 3.0; l += 0.01) {
            CHECK(c.chi0(l) + c.chi_inf(l) == 1.0);
            CHECK(c.chi0(l) >= 0.0);
            CHECK(c.chi0(l) <= 1.0);
            CHECK(c.chi0(l) == c.chi0(-l));
        }
    }
    CHECK(cutoffs().chi0(1.5) == doctest::Approx(0.5));
    CHECK(cutoffs().chi0(1.3) != cutoffs(CutoffProfile::squared).chi0(1.3));
}

TEST_CASE("wave parameter validation") {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    WaveParams wp = WaveParams::low_defaults(p, 1.0);
    CHECK(wp.kappa == 1.0);
    CHECK(wp.kappa_tilde == 2.0);
    CHECK_NOTHROW(wp.validate(p));
    wp.kappa_tilde = 1.0;
    CHECK_THROWS_AS(wp.validate(p), DomainError);
    wp = WaveParams::low_defaults(p, 0.0);
    CHECK_THROWS_AS(omega0(p, wp, 1.0), DomainError);
    CHECK(WaveParams::high_defaults(p, 1.0).sigma == cplx(2.0, 1.0));
}

TEST_CASE("omega0 against direct integration in H^3") {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    for (double t : {0.3, 2.0, 17.0}) {
        for (double r : {0.0, 0.8, 5.0}) {
            const WaveParams wp = WaveParams::low_defaults(p, t);
            const cplx a = omega0(p, wp, r);
            const cplx b = h3_direct(wp, r, 0.0, 2.0, cutoffs(), false);
            CHECK(std::abs(a - b) < 1e-9 * std::abs(b) + 1e-15);
        }
    }
}

TEST_CASE("omega0 conjugation symmetry for real sigma") {
    for (int n : {2, 3, 4}) {
        const SpaceParams p = SpaceParams::hyperbolic(n);
        for (double r : {0.0, 0.6, 3.0}) {
            const cplx a = omega0(p, WaveParams::low_defaults(p, 2.5), r);
            const cplx b = omega0(p, WaveParams::low_defaults(p, -2.5), r);
            CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
        }
    }
}

TEST_CASE("omega0 bounded by a multiple of phi0") {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    double c = 0.0;
    for (double t : {0.1, 0.5, 2.0, 8.0, 32.0, 64.0}) {
        for (double r = 0.0; r <= 2.0 * t; r += std::max(0.05, t / 40.0)) {
            c = std::max(c, std::abs(omega0(p, WaveParams::low_defaults(p, t), r)) / phi0(p, r));
        }
    }
    MESSAGE("empirical constant sup |omega0| / phi0 = " << c);
    CHECK(std::isfinite(c));
    CHECK(c < 10.0);
}

TEST_CASE("prefactor at the strip edge") {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    WaveParams wp = WaveParams::low_defaults(p, 0.5);
    wp.sigma = 2.0;
    const HighFrequencyValue zero = omega_inf_tilde(p, wp, 1.0);
    CHECK(zero.value == cplx(0.0, 0.0));
    CHECK(zero.reliable);
    CHECK(zero.prefactor == cplx(0.0, 0.0));
    wp.sigma = cplx(2.0, 1.0);
    const HighFrequencyValue v = omega_inf_tilde(p, wp, 1.0);
    CHECK(std::abs(v.prefactor) > 0.0);
    CHECK(std::isfinite(std::abs(v.prefactor)));
    CHECK(v.levels.size() == 4);
    wp.sigma = cplx(2.5, 0.0);
    CHECK_THROWS_AS(omega_inf_tilde(p, wp, 1.0), DomainError);
}

TEST_CASE("light-cone band is refused") {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    const WaveParams wp = WaveParams::high_defaults(p, 1.0);
    CHECK(in_light_cone_band(1.0, 1.05));
    CHECK(in_light_cone_band(-1.0, 0.95));
    CHECK_FALSE(in_light_cone_band(1.0, 1.2));
    CHECK_THROWS_AS(omega_inf_tilde(p, wp, 1.05), LightConeError);
    CHECK_THROWS_AS(omega_inf(p, wp, 0.92), LightConeError);
}

TEST_CASE("Abel sum equals the convergent integral when it exists") {
    // sigma = 4 in H^3: the high-frequency integrand decays like lambda^{-3}
    const SpaceParams p = SpaceParams::hyperbolic(3);
    WaveParams wp = WaveParams::low_defaults(p, 0.7);
    wp.sigma = 4.0;
    for (double r : {0.3, 2.0}) {
        const HighFrequencyValue v = omega_inf(p, wp, r);
        const cplx direct = h3_direct(wp, r, 1.0, 4000.0, cutoffs(), true);
        CHECK(v.reliable);
        // log(eta) terms in the Abel expansion limit integer-power extrapolation
        CHECK(std::abs(v.value - direct) < 5e-4 * std::abs(direct));
    }
}

TEST_CASE("extrapolation is stable under a longer Abel ladder") {
    for (int n : {2, 3}) {
        const SpaceParams p = SpaceParams::hyperbolic(n);
        const WaveParams wp = WaveParams::high_defaults(p, 0.1);
        KernelOptions longer;
        longer.etas = {0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625};
        const cplx a = omega_inf_tilde(p, wp, 1.0).value;
        const cplx b = omega_inf_tilde(p, wp, 1.0, cutoffs(), longer).value;
        CHECK(std::abs(a - b) < 0.02 * std::abs(b));
    }
}

TEST_CASE("full kernel does not depend on the cutoff shape") {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    for (double t : {0.4, 3.0}) {
        WaveParams wp = WaveParams::low_defaults(p, t);
        wp.sigma = 2.0;
        const double r = 1.5;
        const CutoffPair a = cutoffs(CutoffProfile::exponential);
        const CutoffPair b = cutoffs(CutoffProfile::squared);
        const cplx fa = omega0(p, wp, r, a) + omega_inf(p, wp, r, a).value;
        const cplx fb = omega0(p, wp, r, b) + omega_inf(p, wp, r, b).value;
        CHECK(std::abs(omega0(p, wp, r, a) - omega0(p, wp, r, b)) > 1e-3 * std::abs(fa));
        CHECK(std::abs(fa - fb) < 1e-4 * std::abs(fa));
    }
}

TEST_CASE("continuity in Im sigma") {
    const SpaceParams p = SpaceParams::hyperbolic(3);
    WaveParams wp = WaveParams::high_defaults(p, 0.3);
    double worst = 0.0;
    cplx prev{};
    const double h = 0.05;
    for (int k = 0; k <= 10; ++k) {
        wp.sigma = cplx(2.0, 0.5 + h * k);
        const cplx v = omega_inf_tilde(p, wp, 1.0).value;
        if (k > 0) worst = std::max(worst, std::abs(v - prev) / h);
        prev = v;
    }
    CHECK(std::isfinite(worst));
    CHECK(worst < 50.0);
}

TEST_CASE("decay fits") {
    std::vector<std::pair<double, double>> s1, s2, s3;
    for (int k = 0; k < 12; ++k) {
        const double t = std::pow(2.0, 0.5 * k);
        s1.emplace_back(t, std::pow(t, -1.5));
        s2.emplace_back(t, 3.0 * std::pow(t, -2.0));
        s3.emplace_back(t, std::pow(t, -1.5) * (1.0 + 0.01 * std::sin(t)));
    }
    const DecayFit f1 = fit_decay_exponent(s1);
    CHECK(f1.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(f1.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(fit_decay_exponent(s2).slope + 2.0) < 1e-12);
    CHECK(fit_decay_exponent(s2).intercept == doctest::Approx(std::log(3.0)));
    CHECK(std::abs(fit_decay_exponent(s3).slope + 1.5) < 0.02);
    s1.resize(4);
    CHECK_THROWS_AS(fit_decay_exponent(s1), DomainError);
    s2[2].second = -1.0;
    CHECK_THROWS_AS(fit_decay_exponent(s2), DomainError);
}
