#include "hyperwave/quadrature.hpp"

#include <array>
#include <numbers>

#include "hyperwave/error.hpp"

namespace hyperwave {
namespace {

constexpr int kMaxOrder = 128;

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // one more derivative evaluation at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1 || order > kMaxOrder) {
        throw DomainError("gauss_legendre: order must be in [1, 128]");
    }
    static const std::array<GaussRule, kMaxOrder + 1> table = [] {
        std::array<GaussRule, kMaxOrder + 1> t;
        t[1] = GaussRule{{0.0}, {2.0}};
        for (int n = 2; n <= kMaxOrder; ++n) t[n] = compute_rule(n);
        return t;
    }();
    return table[order];
}

QuadRule composite_rule(std::span<const double> breakpoints, double max_width, int order) {
    if (!(max_width > 0.0)) throw DomainError("composite_rule: max_width must be positive");
    const GaussRule& g = gauss_legendre(order);
    QuadRule rule;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(b > a)) continue;
        const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_width));
        const double h = (b - a) / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const double lo = a + h * static_cast<double>(p);
            const double mid = lo + 0.5 * h;
            for (std::size_t j = 0; j < g.nodes.size(); ++j) {
                rule.nodes.push_back(mid + 0.5 * h * g.nodes[j]);
                rule.weights.push_back(0.5 * h * g.weights[j]);
            }
        }
    }
    return rule;
}

}  // namespace hyperwave
