#include "hyperwave/locsym.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>

#include "hyperwave/error.hpp"
#include "hyperwave/quadrature.hpp"
#include "hyperwave/special.hpp"

namespace hyperwave {
namespace {

constexpr double kTailRelTol = 1e-4;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RadialIntegral {
    double value = 0.0;  // without A_n
    double tail = 0.0;
    double end_slope = 0.0;
};

// int_0^inf h over the grid (8-point Gauss per cell) plus an exponential tail fitted
// to the last tenth of the grid
RadialIntegral radial_integral(const std::vector<double>& grid, const std::function<double(double)>& h,
                               const std::string& what) {
    const GaussRule& g8 = gauss_legendre(8);
    RadialIntegral out;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i], b = grid[i + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t k = 0; k < g8.nodes.size(); ++k) out.value += half * g8.weights[k] * h(mid + half * g8.nodes[k]);
    }
    const double R = grid.back();
    const double h_end = h(R);
    if (h_end == 0.0) return out;
    std::vector<double> xs, ys;
    for (std::size_t i = grid.size(); i-- > 0;) {
        if (grid[i] < 0.9 * R && xs.size() >= 4) break;
        const double v = h(grid[i]);
        if (v > 0.0) {
            xs.push_back(grid[i]);
            ys.push_back(std::log(v));
        }
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    out.end_slope = sxx > 0.0 ? sxy / sxx : 0.0;
    if (!(out.end_slope < 0.0)) {
        throw NumericalError(what + ": integrand does not decay at r = " + num(R) + " (log-slope " +
                                 num(out.end_slope) + "); the integral diverges",
                             out.end_slope);
    }
    out.tail = h_end / -out.end_slope;
    if (out.tail > kTailRelTol * std::abs(out.value)) {
        throw NumericalError(what + ": tail beyond r = " + num(R) + " is " + num(out.tail / std::abs(out.value)) +
                                 " of the integral (log-slope " + num(out.end_slope) + "); extend the grid",
                             out.tail);
    }
    return out;
}

double sinh_pow(const SpaceParams& p, double r) { return std::pow(std::sinh(r), p.n - 1); }

}  // namespace

double default_epsilon(const SpaceParams& p, double delta_hat) { return 0.5 * (p.rho - delta_hat); }

double weight_mu(const SpaceParams& p, double delta_hat, double r, std::optional<double> eps) {
    const double e = eps.value_or(default_epsilon(p, delta_hat));
    if (!(e > 0.0) || !(e < p.rho - delta_hat)) {
        throw DomainError("weight_mu: need 0 < eps < rho - delta_hat, got eps = " + num(e) + " with rho - delta_hat = " +
                          num(p.rho - delta_hat));
    }
    if (!(r >= 0.0)) throw DomainError("weight_mu: radius must be >= 0");
    return std::exp((delta_hat + e) * r);
}

QuotientSetup prepare_quotient(const GroupPresentation& g, const SpaceParams& p) {
    if (g.n != p.n) throw DomainError("prepare_quotient: group acts on H^" + std::to_string(g.n) + ", not H^" +
                                      std::to_string(p.n));
    QuotientSetup q;
    q.group = g;
    if (g.generators.empty()) {
        q.epsilon = default_epsilon(p, 0.0);
        return q;
    }
    const HPoint o = origin(p.n);
    double R = 30.0;
    while (enumerate_orbit(g, o, o, R).size() < 200) R *= 1.5;
    const DeltaEstimate est = estimate_delta(g, R);
    q.delta_hat = est.counting;
    q.growth = est.growth;
    const double worst = std::max(est.counting, est.abscissa);
    if (!(worst < p.rho - 0.1)) {
        throw DomainError("prepare_quotient: estimated critical exponent " + num(worst) + " is not below rho - 0.1 = " +
                          num(p.rho - 0.1));
    }
    q.epsilon = default_epsilon(p, q.delta_hat);
    return q;
}

QuotientKernelValue summed_kernel_from_distances(const QuotientSetup& q, const SpaceParams& p, const WaveParams& wp,
                                                 std::span<const double> distances, double shift, double R,
                                                 const CutoffPair& cut, const KernelOptions& opts) {
    QuotientKernelValue out;
    out.truncation_radius = R;
    for (double d : distances) {
        const KernelValue kv = omega_full(p, wp, d, cut, opts);
        out.value += kv.value;
        if (kv.in_band) ++out.band_hits;
        if (!kv.reliable) out.reliable = false;
        out.envelope_constant = std::max(out.envelope_constant, std::abs(kv.value) / ((1.0 + d) * std::exp(-p.rho * d)));
        ++out.terms;
    }
    if (!q.growth.empty && q.growth.amplitude > 0.0) {
        const double delta = q.growth.delta;
        double sum = 0.0;
        for (double k = std::ceil(R); k < std::ceil(R) + 1e5; k += 1.0) {
            const double term = q.growth.amplitude * std::exp(delta * (k + shift) - p.rho * k) * (2.0 + k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        out.tail_bound = out.envelope_constant * sum;
    }
    const bool small_tail = out.tail_bound <= 1e-3 * std::abs(out.value) || out.tail_bound <= 1e-9;
    out.reliable = out.reliable && small_tail;
    return out;
}

QuotientKernelValue summed_kernel(const QuotientSetup& q, const SpaceParams& p, const WaveParams& wp,
                                  const HPoint& x, const HPoint& y, double R, const CutoffPair& cut,
                                  const KernelOptions& opts) {
    if (!(q.delta_hat < p.rho)) throw DomainError("summed_kernel: needs delta_hat < rho");
    const auto orbit = enumerate_orbit(q.group, x, y, R);
    std::vector<double> d;
    d.reserve(orbit.size());
    for (const auto& s : orbit) d.push_back(s.distance);
    const HPoint o = origin(p.n);
    return summed_kernel_from_distances(q, p, wp, d, dist(o, x) + dist(o, y), R, cut, opts);
}

double kunze_stein_bound(const SpaceParams& p, const RadialFunction& psi) {
    const auto h = [&](double r) {
        const double v = std::abs(psi(r));
        return v == 0.0 ? 0.0 : v * phi0(p, r) * sinh_pow(p, r);
    };
    const RadialIntegral I = radial_integral(psi.grid(), h, "kunze_stein_bound");
    return p.sphere_area() * (I.value + I.tail);
}

double bilinear_bound(const SpaceParams& p, double delta_hat, double eps, const RadialFunction& g, double q) {
    if (!(q >= 2.0) || !std::isfinite(q)) throw DomainError("bilinear_bound: q must lie in [2, inf)");
    (void)weight_mu(p, delta_hat, 0.0, eps);  // range check on eps
    const double rate = delta_hat + eps;
    const auto h = [&](double r) {
        const double v = std::abs(g(r));
        return v == 0.0 ? 0.0 : phi0(p, r) * std::exp(-rate * r) * std::pow(v, 0.5 * q) * sinh_pow(p, r);
    };
    RadialIntegral I;
    try {
        I = radial_integral(g.grid(), h, "bilinear_bound");
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " [exponent balance: rho = " + num(p.rho) +
                                 ", delta_hat + eps = " + num(rate) + ", q/2 = " + num(0.5 * q) + "]",
                             e.estimate());
    }
    const double total = p.sphere_area() * (I.value + I.tail);
    return total == 0.0 ? 0.0 : std::pow(total, 2.0 / q);
}

std::vector<double> log_spaced(double a, double b, int count) {
    if (!(a > 0.0) || !(b > a) || count < 2) throw DomainError("log_spaced: need 0 < a < b and count >= 2");
    std::vector<double> out(static_cast<std::size_t>(count));
    const double step = std::log(b / a) / (count - 1);
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = a * std::exp(step * k);
    out.front() = a;
    out.back() = b;
    return out;
}

std::vector<std::pair<HPoint, HPoint>> sample_pairs(int n, std::size_t count, double radius, std::uint64_t seed) {
    if (!(radius >= 0.0)) throw DomainError("sample_pairs: radius must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, radius);
    std::vector<std::pair<HPoint, HPoint>> out;
    for (std::size_t i = 0; i < count; ++i) {
        HPoint x = random_point(n, u(rng), rng);
        HPoint y = random_point(n, u(rng), rng);
        out.emplace_back(std::move(x), std::move(y));
    }
    return out;
}

DispersiveResult dispersive_decay_experiment(const QuotientSetup& q, const SpaceParams& p,
                                             const DispersiveConfig& cfg) {
    if (!(cfg.q > 2.0)) throw DomainError("dispersive experiment: q must exceed 2");
    const double needed = (p.n + 1.0) * (0.5 - 1.0 / cfg.q);
    if (cfg.sigma.real() < needed - 1e-12) {
        throw DomainError("dispersive experiment: Re sigma = " + num(cfg.sigma.real()) + " is below (n+1)(1/2-1/q) = " +
                          num(needed));
    }
    if (cfg.t_grid.empty() || cfg.pairs.empty()) throw DomainError("dispersive experiment: empty t grid or pair list");
    {
        WaveParams probe = WaveParams::low_defaults(p, cfg.t_grid.front());
        if (cfg.kappa) probe.kappa = *cfg.kappa;
        if (cfg.kappa_tilde) probe.kappa_tilde = *cfg.kappa_tilde;
        probe.validate(p);
    }
    const bool high_active = rgamma(0.5 * (p.n + 1.0) - cfg.sigma) != cplx{};
    const HPoint o = origin(p.n);

    std::vector<std::vector<double>> orbits;
    std::vector<double> shifts;
    for (std::size_t i = 0; i < cfg.pairs.size(); ++i) {
        const auto& [x, y] = cfg.pairs[i];
        if (high_active) {
            for (double t : cfg.t_grid) {
                if (in_light_cone_band(t, dist(x, y), cfg.kernel.light_cone_band)) {
                    throw DomainError("dispersive experiment: pair " + std::to_string(i) + " lies in the light-cone band at t = " +
                                      num(t));
                }
            }
        }
        std::vector<double> d;
        for (const auto& s : enumerate_orbit(q.group, x, y, cfg.R)) d.push_back(s.distance);
        orbits.push_back(std::move(d));
        shifts.push_back(dist(o, x) + dist(o, y));
    }

    DispersiveResult res;
    const std::size_t np = cfg.pairs.size();
    res.cells.resize(cfg.t_grid.size() * np);
    (void)inversion_constant(p);
    for_each_index(res.cells.size(), cfg.mode, [&](std::size_t k) {
        const std::size_t it = k / np, ip = k % np;
        WaveParams wp = WaveParams::low_defaults(p, cfg.t_grid[it]);
        wp.sigma = cfg.sigma;
        if (cfg.kappa) wp.kappa = *cfg.kappa;
        if (cfg.kappa_tilde) wp.kappa_tilde = *cfg.kappa_tilde;
        DispersiveCell& c = res.cells[k];
        c.t = cfg.t_grid[it];
        c.pair_id = ip;
        c.value = summed_kernel_from_distances(q, p, wp, orbits[ip], shifts[ip], cfg.R, cfg.cut, cfg.kernel);
    });

    for (std::size_t it = 0; it < cfg.t_grid.size(); ++it) {
        DispersiveRow row;
        row.t = cfg.t_grid[it];
        for (std::size_t ip = 0; ip < np; ++ip) {
            const auto& v = res.cells[it * np + ip].value;
            row.sup = std::max(row.sup, std::abs(v.value));
            row.reliable = row.reliable && v.reliable;
        }
        res.rows.push_back(row);
    }

    auto fit_window = [&](std::pair<double, double> w, double target, double tol) {
        WindowFit f;
        f.lo = w.first;
        f.hi = w.second;
        f.target = target;
        f.tolerance = tol;
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : res.rows) {
            const double t = std::abs(row.t);
            if (t >= w.first * (1 - 1e-12) && t <= w.second * (1 + 1e-12) && row.reliable && row.sup > 0.0) {
                pts.emplace_back(t, row.sup);
            }
        }
        f.points = pts.size();
        if (pts.size() >= 5) f.fit = fit_decay_exponent(pts);
        return f;
    };
    res.small = fit_window(cfg.small_window, -0.5 * (p.n - 1.0), cfg.small_tolerance);
    res.large = fit_window(cfg.large_window, -1.5, cfg.large_tolerance);
    return res;
}

void write_dispersive_csv(std::ostream& os, const DispersiveResult& r) {
    os << "t,pair_id,value_re,value_im,tail_bound,reliable\n";
    for (const auto& c : r.cells) {
        os << num(c.t) << ',' << c.pair_id << ',' << num(c.value.value.real()) << ',' << num(c.value.value.imag())
           << ',' << num(c.value.tail_bound) << ',' << (c.value.reliable ? 1 : 0) << '\n';
    }
}

nlohmann::json dispersive_summary(const DispersiveResult& r) {
    auto window = [](const WindowFit& f) {
        nlohmann::json j;
        j["range"] = {f.lo, f.hi};
        j["target"] = f.target;
        j["tolerance"] = f.tolerance;
        j["points"] = f.points;
        if (f.fit) {
            j["slope"] = f.fit->slope;
            j["r2"] = f.fit->r2;
        } else {
            j["slope"] = nullptr;
            j["r2"] = nullptr;
        }
        j["within_tolerance"] = f.within_tolerance();
        return j;
    };
    nlohmann::json j;
    j["small_slope"] = r.small.fit ? nlohmann::json(r.small.fit->slope) : nlohmann::json(nullptr);
    j["large_slope"] = r.large.fit ? nlohmann::json(r.large.fit->slope) : nlohmann::json(nullptr);
    j["windows"] = {{"small", window(r.small)}, {"large", window(r.large)}};
    j["tolerances"] = {{"small", r.small.tolerance}, {"large", r.large.tolerance}};
    return j;
}

}  // namespace hyperwave
