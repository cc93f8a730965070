#include "hyperwave/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <numbers>
#include <string>

#include "hyperwave/error.hpp"
#include "hyperwave/special.hpp"

namespace hyperwave {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

// log sinh x for x > 0 without overflow
double log_sinh(double x) {
    if (x > 20.0) return x - kLn2 + std::log1p(-std::exp(-2.0 * x));
    return std::log(std::sinh(x));
}

double sinh_pow(double r, int k) {
    if (k == 0) return 1.0;
    return std::exp(k * log_sinh(r));
}

void check_radius(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("radius must be finite and >= 0");
}

double phi_h3(double lambda, double r) {
    if (r == 0.0) return 1.0;
    lambda = std::abs(lambda);
    if (lambda == 0.0) return r / std::sinh(r);
    // sin(lambda r) / (lambda sinh r), with sinh evaluated in logs for large r
    return std::sin(lambda * r) / lambda * std::exp(-log_sinh(r));
}

}  // namespace

SpaceParams SpaceParams::hyperbolic(int n) {
    if (n < 2) throw DomainError("dimension n must be >= 2, got " + std::to_string(n));
    SpaceParams p;
    p.n = n;
    p.m_alpha = n - 1.0;
    p.m_2alpha = 0.0;
    p.rho = 0.5 * (p.m_alpha + 2.0 * p.m_2alpha);
    return p;
}

double SpaceParams::sphere_area() const {
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double SpaceParams::sine_integral() const {
    return std::sqrt(kPi) * std::exp(std::lgamma(0.5 * (n - 1.0)) - std::lgamma(0.5 * n));
}

RadialFunction::RadialFunction(std::vector<double> grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() != values_.size()) throw DomainError("RadialFunction: grid/value size mismatch");
    if (grid_.size() < 4) throw DomainError("RadialFunction: need at least 4 samples");
    if (grid_.front() != 0.0) throw DomainError("RadialFunction: grid must start at 0");
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        if (!(grid_[i] > grid_[i - 1])) throw DomainError("RadialFunction: grid must be strictly increasing");
    }
}

cplx RadialFunction::operator()(double r) const {
    if (!(r >= 0.0) || r > grid_.back()) {
        throw DomainError("RadialFunction: r = " + std::to_string(r) + " outside the sampled range");
    }
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
    std::ptrdiff_t cell = std::distance(grid_.begin(), it) - 1;
    const auto last = static_cast<std::ptrdiff_t>(grid_.size()) - 1;
    if (cell >= last) cell = last - 1;
    const std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(cell - 1, 0, last - 3);
    cplx sum{};
    for (std::ptrdiff_t i = lo; i < lo + 4; ++i) {
        double basis = 1.0;
        for (std::ptrdiff_t j = lo; j < lo + 4; ++j) {
            if (j != i) basis *= (r - grid_[j]) / (grid_[i] - grid_[j]);
        }
        sum += basis * values_[i];
    }
    return sum;
}

cplx phi_lambda(const SpaceParams& p, cplx lambda, double r) {
    check_radius(r);
    if (r == 0.0) return 1.0;
    const cplx expo = cplx(0.0, 1.0) * lambda - p.rho;
    const double sh = std::sinh(r);
    const double er = std::exp(-r);
    const int m = p.n - 2;
    auto integrand = [&](double theta) -> cplx {
        const double s = std::sin(0.5 * theta);
        const double u = std::log(er + 2.0 * sh * s * s);
        const double w = m == 0 ? 1.0 : std::pow(std::sin(theta), m);
        return std::exp(expo * u) * w;
    };
    // base of the power varies on the scale e^{-r} near theta = 0
    std::vector<double> bp{0.0};
    for (double th = er; th < 0.5; th *= 4.0) bp.push_back(th);
    bp.push_back(0.5);
    bp.push_back(kPi);
    AdaptiveOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-12;
    const auto res = integrate_adaptive<cplx>(integrand, std::span<const double>(bp), opts);
    const double cn = p.sine_integral();
    if (res.error / cn > 1e-10) {
        throw NumericalError("phi_lambda: quadrature did not converge", res.error / cn);
    }
    return res.value / cn;
}

double phi0(const SpaceParams& p, double r) { return phi_lambda(p, 0.0, r).real(); }

PhiRule::PhiRule(const SpaceParams& p, double r, double lambda_max)
    : r_(r), lambda_max_(lambda_max) {
    check_radius(r);
    if (!(lambda_max >= 0.0)) throw DomainError("PhiRule: lambda_max must be >= 0");
    if (r == 0.0) return;
    const double lam = std::max(lambda_max, 1.0);
    const double log_k = 0.5 * (p.n - 1.0) * kLn2 - std::log(p.sine_integral()) - (p.n - 2.0) * log_sinh(r);
    const double power = 0.5 * (p.n - 3.0);
    auto log_gap = [&](double u) {  // log(cosh r - cosh u)
        return kLn2 + log_sinh(0.5 * (r + u)) + log_sinh(0.5 * (r - u));
    };
    const GaussRule& g = gauss_legendre(16);

    // endpoint layer u = r - s^2 removes the (r - u)^{(n-3)/2} endpoint behaviour
    const double a = std::min(1.0, r);
    const double smax = std::sqrt(a);
    const double swidth = std::min(0.5, 3.0 / lam);
    const int spanels = static_cast<int>(std::ceil(smax / swidth));
    const double hs = smax / spanels;
    for (int k = 0; k < spanels; ++k) {
        const double mid = (k + 0.5) * hs;
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            const double s = mid + 0.5 * hs * g.nodes[j];
            const double u = r - s * s;
            const double wq = 0.5 * hs * g.weights[j] * 2.0 * s;
            u_.push_back(u);
            w_.push_back(wq * std::exp(log_k + power * log_gap(u)));
        }
    }
    if (r > a) {
        const double b = r - a;
        const double width = std::min(1.0, 6.0 / lam);
        const int panels = static_cast<int>(std::ceil(b / width));
        const double h = b / panels;
        for (int k = 0; k < panels; ++k) {
            const double mid = (k + 0.5) * h;
            for (std::size_t j = 0; j < g.nodes.size(); ++j) {
                const double u = mid + 0.5 * h * g.nodes[j];
                u_.push_back(u);
                w_.push_back(0.5 * h * g.weights[j] * std::exp(log_k + power * log_gap(u)));
            }
        }
    }
}

double PhiRule::operator()(double lambda) const {
    if (r_ == 0.0) return 1.0;
    if (std::abs(lambda) > lambda_max_ * (1.0 + 1e-12) && std::abs(lambda) > 1.0) {
        throw DomainError("PhiRule: lambda beyond the rule's lambda_max");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < u_.size(); ++j) sum += w_[j] * std::cos(lambda * u_[j]);
    return sum;
}

double phi_hc(const SpaceParams& p, double lambda, double r) {
    check_radius(r);
    if (!(r > 0.0)) throw DomainError("phi_hc: needs r > 0");
    if (lambda == 0.0) throw DomainError("phi_hc: needs lambda != 0");
    const cplx il(0.0, lambda);
    const double q = std::exp(-2.0 * r);
    const int max_terms = 40 + static_cast<int>(std::ceil(45.0 / r));
    std::vector<cplx> coef{1.0};
    cplx running{};  // sum_{m<k} (i lambda - rho - 2m) Gamma_m
    cplx series = 1.0;
    double qk = 1.0;
    int small_terms = 0;
    for (int k = 1; k <= max_terms; ++k) {
        running += (il - p.rho - 2.0 * (k - 1)) * coef.back();
        const cplx gk = -p.rho / (static_cast<double>(k) * (static_cast<double>(k) - il)) * running;
        coef.push_back(gk);
        qk *= q;
        const cplx term = gk * qk;
        series += term;
        if (std::abs(term) < 1e-17 * std::abs(series)) {
            if (++small_terms >= 3) break;
        } else {
            small_terms = 0;
        }
    }
    const cplx lead = std::polar(std::exp(-p.rho * r), lambda * r);
    return 2.0 * (c_function(p, lambda) * lead * series).real();
}

PhiEvaluator::PhiEvaluator(const SpaceParams& p, double r, double lambda_max) : p_(p), r_(r) {
    check_radius(r);
    if (p.n == 3 || r == 0.0) return;
    // the series covers lambda >= 1 once r >= 0.5
    rule_.emplace(p, r, r >= 0.5 ? 1.0 : std::max(lambda_max, 1.0));
}

double PhiEvaluator::operator()(double lambda) const {
    lambda = std::abs(lambda);
    if (p_.n == 3) return phi_h3(lambda, r_);
    if (r_ == 0.0) return 1.0;
    if (lambda >= 1.0 && r_ >= 0.5) return phi_hc(p_, lambda, r_);
    return (*rule_)(lambda);
}

double phi_real(const SpaceParams& p, double lambda, double r) {
    return PhiEvaluator(p, r, std::abs(lambda))(lambda);
}

cplx log_c_function(const SpaceParams& p, cplx lambda) {
    const cplx il = cplx(0.0, 1.0) * lambda;
    const double half = 0.5 * p.m_alpha;
    const double log_c0 = p.rho * kLn2 + std::lgamma(0.5 * (p.rho + half + 1.0)) +
                          std::lgamma(0.5 * (p.rho + half + p.m_2alpha)) - std::lgamma(p.rho);
    return log_c0 - il * kLn2 + lgamma(il) - lgamma(0.5 * (il + half + 1.0)) -
           lgamma(0.5 * (il + half + p.m_2alpha));
}

cplx c_function(const SpaceParams& p, cplx lambda) { return std::exp(log_c_function(p, lambda)); }

double plancherel_density(const SpaceParams& p, double lambda) {
    if (!std::isfinite(lambda)) throw DomainError("plancherel_density: lambda must be finite");
    lambda = std::abs(lambda);
    if (lambda == 0.0) return 0.0;
    return std::exp(-2.0 * log_c_function(p, lambda).real());
}

namespace {

// |f| against the size of phi_0 times the radial measure, up to constants
double envelope(const SpaceParams& p, double f_abs, double r) {
    return f_abs * (1.0 + r) * std::exp(-p.rho * r) * sinh_pow(r, p.n - 1);
}

void check_tail(double tail, double peak) {
    if (tail > 1e-300 && tail > 1e-8 * peak) {
        throw NumericalError("spherical_transform: profile not negligible at the end of its range", tail / peak);
    }
}

}  // namespace

cplx spherical_transform(const SpaceParams& p, const RadialFunction& f, double lambda) {
    // one fixed rule per grid cell: exact on the cubic interpolant
    const GaussRule& g = gauss_legendre(8);
    const auto& grid = f.grid();
    const double area = p.sphere_area();
    cplx sum{};
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i];
        const double b = grid[i + 1];
        const double h = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            const double r = mid + h * g.nodes[j];
            sum += h * g.weights[j] * f(r) * phi_real(p, lambda, r) * sinh_pow(r, p.n - 1);
        }
    }
    sum *= area;
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) peak = std::max(peak, envelope(p, std::abs(f.values()[i]), grid[i]));
    check_tail(envelope(p, std::abs(f.values().back()), f.r_max()), peak);
    return sum;
}

cplx spherical_transform(const SpaceParams& p, const std::function<cplx(double)>& f, double lambda,
                         double r_max) {
    if (!(r_max > 0.0)) throw DomainError("spherical_transform: r_max must be positive");
    auto integrand = [&](double r) { return f(r) * phi_real(p, lambda, r) * sinh_pow(r, p.n - 1); };
    std::vector<double> bp;
    const double step = std::min(1.0, std::max(0.1, kPi / (std::abs(lambda) + 1e-300)));
    for (double r = 0.0; r < r_max; r += step) bp.push_back(r);
    bp.push_back(r_max);
    AdaptiveOptions opts;
    opts.abs_tol = 1e-14;
    opts.rel_tol = 1e-12;
    const auto res = integrate_adaptive<cplx>(integrand, std::span<const double>(bp), opts);
    const cplx value = p.sphere_area() * res.value;
    if (!res.converged && res.error * p.sphere_area() > 1e-9 * std::max(1.0, std::abs(value))) {
        throw NumericalError("spherical_transform: quadrature did not converge", res.error);
    }
    double peak = 0.0;
    for (double r = 0.0; r < r_max; r += 0.125) peak = std::max(peak, envelope(p, std::abs(f(r)), r));
    check_tail(envelope(p, std::abs(f(r_max)), r_max), peak);
    return value;
}

namespace {

cplx raw_inverse(const SpaceParams& p, const std::function<cplx(double)>& g, double r, double lambda_max) {
    check_radius(r);
    if (!(lambda_max > 0.0)) throw DomainError("inverse_transform: lambda_max must be positive");
    const PhiEvaluator phi(p, r, lambda_max);
    auto integrand = [&](double lam) { return g(lam) * phi(lam) * plancherel_density(p, lam); };
    std::vector<double> bp;
    const double step = std::min(1.0, 2.0 * kPi / (r + 1.0));
    for (double l = 0.0; l < lambda_max; l += step) bp.push_back(l);
    bp.push_back(lambda_max);
    AdaptiveOptions opts;
    opts.abs_tol = 1e-15;
    opts.rel_tol = 1e-12;
    const auto res = integrate_adaptive<cplx>(integrand, std::span<const double>(bp), opts);
    const double end = std::abs(g(lambda_max)) * plancherel_density(p, lambda_max);
    if (end > 1e-14 && end > 1e-10 * std::abs(res.value)) {
        throw NumericalError("inverse_transform: spectral profile not negligible at lambda_max", end);
    }
    return res.value;
}

}  // namespace

cplx inverse_transform(const SpaceParams& p, const std::function<cplx(double)>& g, double r,
                       double lambda_max) {
    return inversion_constant(p) * raw_inverse(p, g, r, lambda_max);
}

double inversion_constant(const SpaceParams& p) {
    static std::mutex mu;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(p.n); it != cache.end()) return it->second;

    // exp(-r^2) sinh^{n-1} r is below e^{-40} beyond this radius
    const double half = 0.5 * (p.n - 1.0);
    const double r_max = half + std::sqrt(half * half + 40.0);
    const std::function<cplx(double)> f = [](double r) { return cplx(std::exp(-r * r)); };
    const std::function<cplx(double)> ghat = [&](double lam) {
        return spherical_transform(p, f, lam, r_max);
    };
    // the transform of exp(-r^2) decays like exp(-lambda^2 / 4)
    const double lambda_max = 2.0 * std::sqrt(40.0 + (p.n + 2.0) * std::log(10.0 + p.n));
    const cplx total = raw_inverse(p, ghat, 0.0, lambda_max);
    const double c0 = 1.0 / total.real();
    cache.emplace(p.n, c0);
    return c0;
}

}  // namespace hyperwave
