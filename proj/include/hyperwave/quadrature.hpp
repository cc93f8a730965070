#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace hyperwave {

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule with `order` points (1 <= order <= 128). Thread-safe.
const GaussRule& gauss_legendre(int order);

/// A fixed quadrature rule on an interval: sum_j weights[j] * f(nodes[j]).
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Composite Gauss–Legendre rule over consecutive breakpoints; every interval
/// between breakpoints is cut into equal panels no wider than `max_width`.
QuadRule composite_rule(std::span<const double> breakpoints, double max_width, int order);

template <class T>
struct IntegrationResult {
    T value{};
    double error = 0.0;
    std::size_t panels = 0;
    bool converged = false;
};

struct AdaptiveOptions {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    int order = 16;
    std::size_t max_panels = 20000;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T, class F>
T gauss_panel(const F& f, double a, double b, const GaussRule& rule) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    T sum{};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        sum += rule.weights[j] * f(mid + half * rule.nodes[j]);
    }
    return sum * half;
}

}  // namespace detail

/// Globally adaptive Gauss–Legendre integration over [breakpoints.front(),
/// breakpoints.back()]. Each panel is estimated by one rule on the whole panel
/// and by the same rule on its two halves; the panel with the largest
/// difference is bisected until the summed difference falls below
/// max(abs_tol, rel_tol * |I|).
template <class T, class F>
IntegrationResult<T> integrate_adaptive(const F& f, std::span<const double> breakpoints,
                                        const AdaptiveOptions& opts = {}) {
    const GaussRule& rule = gauss_legendre(opts.order);

    struct Panel {
        double a, b;
        T coarse;  // rule on [a,b]
        T fine;    // rule on both halves
        double err;
    };
    auto make_panel = [&](double a, double b, const T& coarse) {
        const double m = 0.5 * (a + b);
        T fine = detail::gauss_panel<T>(f, a, m, rule) + detail::gauss_panel<T>(f, m, b, rule);
        return Panel{a, b, coarse, fine, detail::magnitude(fine - coarse)};
    };
    auto worse = [](const Panel& x, const Panel& y) { return x.err < y.err; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);

    T total{};
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(b > a)) continue;
        Panel p = make_panel(a, b, detail::gauss_panel<T>(f, a, b, rule));
        total += p.fine;
        total_err += p.err;
        heap.push(p);
    }

    IntegrationResult<T> result;
    while (!heap.empty()) {
        const double tol = std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(total));
        if (total_err <= tol) {
            result.converged = true;
            break;
        }
        if (heap.size() >= opts.max_panels) break;
        Panel worst = heap.top();
        heap.pop();
        total -= worst.fine;
        total_err -= worst.err;
        const double m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b)) {
            // interval no longer divisible in double precision; keep it as is
            total += worst.fine;
            total_err += worst.err;
            result.converged = false;
            break;
        }
        const T left_coarse = detail::gauss_panel<T>(f, worst.a, m, rule);
        const T right_coarse = worst.fine - left_coarse;
        Panel left = make_panel(worst.a, m, left_coarse);
        Panel right = make_panel(m, worst.b, right_coarse);
        total += left.fine + right.fine;
        total_err += left.err + right.err;
        heap.push(left);
        heap.push(right);
    }
    if (heap.empty()) result.converged = true;

    // re-sum to shed accumulated cancellation from the running updates
    T resum{};
    double err_sum = 0.0;
    result.panels = heap.size();
    while (!heap.empty()) {
        resum += heap.top().fine;
        err_sum += heap.top().err;
        heap.pop();
    }
    result.value = resum;
    result.error = err_sum;
    return result;
}

template <class T, class F>
IntegrationResult<T> integrate_adaptive(const F& f, double a, double b,
                                        const AdaptiveOptions& opts = {}) {
    const double bp[2] = {a, b};
    return integrate_adaptive<T>(f, std::span<const double>(bp, 2), opts);
}

/// Richardson extrapolation for samples taken at h, h/2, h/4, ... assuming an
/// error expansion in integer powers of h. Returns the Neville table; the
/// diagonal entry table[k][k] is the k-th extrapolation level.
template <class T>
std::vector<std::vector<T>> richardson_table(std::span<const T> samples) {
    std::vector<std::vector<T>> table(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        table[k].resize(k + 1);
        table[k][0] = samples[k];
        double factor = 1.0;
        for (std::size_t j = 1; j <= k; ++j) {
            factor *= 2.0;
            table[k][j] = table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (factor - 1.0);
        }
    }
    return table;
}

}  // namespace hyperwave
