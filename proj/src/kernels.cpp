#include "hyperwave/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hyperwave/error.hpp"
#include "hyperwave/special.hpp"

namespace hyperwave {
namespace {

constexpr double kPi = std::numbers::pi;

double psi(double s, CutoffProfile profile) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    double a = 1.0 / (1.0 - s);
    double b = 1.0 / s;
    if (profile == CutoffProfile::squared) {
        a *= a;
        b *= b;
    }
    // e^{-a} / (e^{-a} + e^{-b}) = 1 / (1 + e^{a-b})
    return 1.0 / (1.0 + std::exp(a - b));
}

// max panel width resolving the phase speed |t| + r
double panel_width(double t, double r) { return std::min(0.25, kPi / (4.0 * (std::abs(t) + r + 1.0))); }

// (lambda^2 + kappa~^2)^{-sigma/2} e^{it sqrt(lambda^2 + kappa^2)} |c(lambda)|^{-2}
cplx multiplier(const SpaceParams& p, const WaveParams& wp, double lambda) {
    const double l2 = lambda * lambda;
    const cplx damp = std::exp(-0.5 * wp.sigma * std::log(l2 + wp.kappa_tilde * wp.kappa_tilde));
    const double phase = wp.t * std::sqrt(l2 + wp.kappa * wp.kappa);
    return damp * std::polar(1.0, phase) * plancherel_density(p, lambda);
}

void check_radius(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("radius must be finite and >= 0");
}

}  // namespace

WaveParams WaveParams::low_defaults(const SpaceParams& p, double t) {
    WaveParams wp;
    wp.t = t;
    wp.kappa = p.rho;
    wp.kappa_tilde = p.rho + 1.0;
    wp.sigma = 2.0;
    return wp;
}

WaveParams WaveParams::high_defaults(const SpaceParams& p, double t) {
    WaveParams wp = low_defaults(p, t);
    wp.sigma = cplx(0.5 * (p.n + 1.0), 1.0);
    return wp;
}

void WaveParams::validate(const SpaceParams& p) const {
    if (!std::isfinite(t) || t == 0.0) throw DomainError("WaveParams: t must be finite and nonzero");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("WaveParams: kappa must be > 0");
    if (!(kappa_tilde > p.rho) || !std::isfinite(kappa_tilde)) {
        throw DomainError("WaveParams: kappa_tilde must exceed rho");
    }
    if (!std::isfinite(sigma.real()) || !std::isfinite(sigma.imag())) {
        throw DomainError("WaveParams: sigma must be finite");
    }
}

double CutoffPair::chi0(double lambda) const { return psi(std::abs(lambda) - 1.0, profile); }

CutoffPair cutoffs(CutoffProfile profile) { return CutoffPair{profile}; }

bool in_light_cone_band(double t, double r, double band) { return std::abs(r - std::abs(t)) < band; }

cplx omega0(const SpaceParams& p, const WaveParams& wp, double r, const CutoffPair& cut) {
    wp.validate(p);
    check_radius(r);
    const PhiEvaluator phi(p, r, 2.0);
    auto integrand = [&](double lambda) -> cplx {
        const double c = cut.chi0(lambda);
        if (c == 0.0) return 0.0;
        return c * multiplier(p, wp, lambda) * phi(lambda);
    };
    const double w = panel_width(wp.t, r);
    std::vector<double> bp;
    const int panels = static_cast<int>(std::ceil(2.0 / w));
    for (int k = 0; k <= panels; ++k) bp.push_back(2.0 * k / panels);
    // kernel values scale like (1+r) e^{-rho r}
    const double scale = (1.0 + r) * std::exp(-p.rho * r);
    AdaptiveOptions opts;
    opts.abs_tol = 1e-13 * scale;
    opts.rel_tol = 1e-11;
    const auto res = integrate_adaptive<cplx>(integrand, std::span<const double>(bp), opts);
    if (!res.converged && res.error > 1e-9 * std::max(scale, std::abs(res.value))) {
        throw NumericalError("omega0: quadrature did not converge", res.error);
    }
    // the integrand is even in lambda
    return 2.0 * inversion_constant(p) * res.value;
}

HighFrequencyValue omega_inf(const SpaceParams& p, const WaveParams& wp, double r, const CutoffPair& cut,
                             const KernelOptions& opts) {
    wp.validate(p);
    check_radius(r);
    if (in_light_cone_band(wp.t, r, opts.light_cone_band)) {
        throw LightConeError("omega_inf: (t, r) = (" + std::to_string(wp.t) + ", " + std::to_string(r) +
                             ") lies in the light-cone exclusion band");
    }
    if (opts.etas.size() < 2) throw DomainError("omega_inf: need at least two Abel parameters");
    for (std::size_t k = 0; k < opts.etas.size(); ++k) {
        if (!(opts.etas[k] > 0.0) || (k > 0 && std::abs(opts.etas[k] - 0.5 * opts.etas[k - 1]) > 1e-15)) {
            throw DomainError("omega_inf: Abel parameters must be positive and halve at each step");
        }
    }
    const double lambda_end = opts.abel_cutoff / opts.etas.back();
    const double lambda_min = 1.0;  // chi_inf vanishes below
    if (!(lambda_end > 2.0)) throw DomainError("omega_inf: Abel cutoff too small");

    // one composite rule shared by every eta; finer on the cutoff transition
    const double w = panel_width(wp.t, r);
    const double edges[] = {lambda_min, 2.0};
    QuadRule rule = composite_rule(edges, std::min(w, 1.0 / 32.0), 16);
    const double tail_edges[] = {2.0, lambda_end};
    const QuadRule tail = composite_rule(tail_edges, w, 16);
    rule.nodes.insert(rule.nodes.end(), tail.nodes.begin(), tail.nodes.end());
    rule.weights.insert(rule.weights.end(), tail.weights.begin(), tail.weights.end());

    const PhiEvaluator phi(p, r, lambda_end);
    std::vector<cplx> values(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double lambda = rule.nodes[j];
        const double c = cut.chi_inf(lambda);
        values[j] = c == 0.0 ? cplx{} : rule.weights[j] * c * multiplier(p, wp, lambda) * phi(lambda);
    }

    const double c0 = 2.0 * inversion_constant(p);
    HighFrequencyValue out;
    for (double eta : opts.etas) {
        const double stop = opts.abel_cutoff / eta;
        cplx sum{};
        for (std::size_t j = 0; j < rule.size() && rule.nodes[j] <= stop; ++j) {
            sum += values[j] * std::exp(-eta * rule.nodes[j]);
        }
        out.abel_samples.push_back(c0 * sum);
    }
    const auto table = richardson_table<cplx>(out.abel_samples);
    for (std::size_t k = 0; k < table.size(); ++k) out.levels.push_back(table[k][k]);
    out.value = out.levels.back();
    const cplx prev = out.levels[out.levels.size() - 2];
    const double mag = std::abs(out.value);
    out.level_gap = mag > 0.0 ? std::abs(out.value - prev) / mag : (prev == cplx{} ? 0.0 : INFINITY);
    out.reliable = out.level_gap <= opts.reliability_gap;
    return out;
}

HighFrequencyValue omega_inf_tilde(const SpaceParams& p, const WaveParams& wp, double r, const CutoffPair& cut,
                                   const KernelOptions& opts) {
    wp.validate(p);
    check_radius(r);
    const double top = 0.5 * (p.n + 1.0);
    if (wp.sigma.real() < 0.0 || wp.sigma.real() > top) {
        throw DomainError("omega_inf_tilde: Re sigma must lie in [0, (n+1)/2]");
    }
    if (in_light_cone_band(wp.t, r, opts.light_cone_band)) {
        throw LightConeError("omega_inf_tilde: (t, r) = (" + std::to_string(wp.t) + ", " + std::to_string(r) +
                             ") lies in the light-cone exclusion band");
    }
    const cplx prefactor = std::exp(wp.sigma * wp.sigma) * rgamma(top - wp.sigma);
    if (prefactor == cplx{}) {
        HighFrequencyValue zero;
        zero.prefactor = prefactor;
        return zero;
    }
    HighFrequencyValue out = omega_inf(p, wp, r, cut, opts);
    out.prefactor = prefactor;
    out.value *= prefactor;
    for (auto& v : out.abel_samples) v *= prefactor;
    for (auto& v : out.levels) v *= prefactor;
    return out;
}

KernelValue omega_full(const SpaceParams& p, const WaveParams& wp, double r, const CutoffPair& cut,
                       const KernelOptions& opts) {
    KernelValue out;
    out.value = omega0(p, wp, r, cut);
    const cplx prefactor = std::exp(wp.sigma * wp.sigma) * rgamma(0.5 * (p.n + 1.0) - wp.sigma);
    if (prefactor == cplx{}) return out;
    if (in_light_cone_band(wp.t, r, opts.light_cone_band)) {
        out.in_band = true;
        out.reliable = false;
        return out;
    }
    const HighFrequencyValue high = omega_inf_tilde(p, wp, r, cut, opts);
    out.value += high.value;
    out.reliable = high.reliable;
    return out;
}

DecayFit fit_decay_exponent(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 5) throw DomainError("fit_decay_exponent: need at least 5 samples");
    double sx = 0.0, sy = 0.0;
    for (const auto& [t, v] : samples) {
        if (!(t > 0.0) || !(v > 0.0) || !std::isfinite(t) || !std::isfinite(v)) {
            throw DomainError("fit_decay_exponent: times and values must be positive and finite");
        }
        sx += std::log(t);
        sy += std::log(v);
    }
    const double m = static_cast<double>(samples.size());
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [t, v] : samples) {
        const double dx = std::log(t) - mx, dy = std::log(v) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw DomainError("fit_decay_exponent: times must not all coincide");
    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

}  // namespace hyperwave
