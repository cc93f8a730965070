#include "hyperwave/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace hyperwave {
namespace {

constexpr double kLanczosG = 7.0;

// Fitted so the Lanczos form is exact at z = 0..14 (60-digit arithmetic).
constexpr std::array<double, 15> kLanczos = {
    1.0000000000000000074,
    676.52036812188353721,
    -1259.1392167222817739,
    771.32342877543770652,
    -176.61502914598978109,
    12.507343225028745327,
    -0.13857103233328224313,
    0.000010091126294731372862,
    -3.4345842252531046081e-7,
    8.3593378357125965382e-7,
    -8.5977556445396087554e-7,
    6.0464973384949281078e-7,
    -2.9113287278906137139e-7,
    8.5891293135682268559e-8,
    -1.1646065639867851529e-8,
};

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// sin(pi x), cos(pi x) for real x with exact values at integers and half-integers
void sincos_pi(double x, double& s, double& c) {
    const double r = std::remainder(x, 2.0);  // r in [-1, 1]
    if (r == 0.0) {
        s = 0.0;
        c = 1.0;
    } else if (r == 1.0 || r == -1.0) {
        s = 0.0;
        c = -1.0;
    } else if (r == 0.5) {
        s = 1.0;
        c = 0.0;
    } else if (r == -0.5) {
        s = -1.0;
        c = 0.0;
    } else {
        s = std::sin(std::numbers::pi * r);
        c = std::cos(std::numbers::pi * r);
    }
}

cplx lanczos_lgamma(cplx z) {
    // Re z >= 1/2
    const cplx zm = z - 1.0;
    cplx sum = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) {
        sum += kLanczos[k] / (zm + static_cast<double>(k));
    }
    const cplx t = zm + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (zm + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

cplx sin_pi(cplx z) {
    double s, c;
    sincos_pi(z.real(), s, c);
    const double y = std::numbers::pi * z.imag();
    return {s * std::cosh(y), c * std::sinh(y)};
}

cplx log_sin_pi(cplx z) {
    const double y = z.imag();
    if (std::abs(y) < 8.0) return std::log(sin_pi(z));
    const double pi = std::numbers::pi;
    const double x = z.real();
    double s, c;
    sincos_pi(2.0 * x, s, c);
    const double small = std::exp(-2.0 * pi * std::abs(y));
    if (y > 0.0) {
        // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
        const cplx w{small * c, small * s};
        return cplx{pi * y - std::numbers::ln2, 0.5 * pi - pi * x} + std::log(1.0 - w);
    }
    // sin(pi z) = (-i/2) e^{i pi z} (1 - e^{-2 i pi z})
    const cplx w{small * c, -small * s};
    return cplx{-pi * y - std::numbers::ln2, pi * x - 0.5 * pi} + std::log(1.0 - w);
}

cplx lgamma(cplx z) {
    if (z.real() < 0.5) {
        return std::log(std::numbers::pi) - log_sin_pi(z) - lanczos_lgamma(1.0 - z);
    }
    return lanczos_lgamma(z);
}

cplx gamma(cplx z) {
    if (is_nonpositive_integer(z)) return {std::numeric_limits<double>::infinity(), 0.0};
    if (z.real() < 0.5) {
        return std::numbers::pi / (sin_pi(z) * std::exp(lanczos_lgamma(1.0 - z)));
    }
    return std::exp(lanczos_lgamma(z));
}

cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return {0.0, 0.0};
    if (z.real() < 0.5) {
        return sin_pi(z) * std::exp(lanczos_lgamma(1.0 - z)) / std::numbers::pi;
    }
    return std::exp(-lanczos_lgamma(z));
}

}  // namespace hyperwave
