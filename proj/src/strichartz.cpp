#include "hyperwave/strichartz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "hyperwave/error.hpp"

namespace hyperwave {
namespace {

bool same(double a, double b) { return std::abs(a - b) <= 1e-14; }

void check_n(int n, int lo) {
    if (n < lo) throw DomainError("dimension n must be >= " + std::to_string(lo) + ", got " + std::to_string(n));
}

bool open_square(ExponentPair e) { return e.inv_p > 0.0 && e.inv_p < 0.5 && e.inv_q > 0.0 && e.inv_q < 0.5; }

bool top_corner(ExponentPair e) { return e.inv_p == 0.0 && e.inv_q == 0.5; }

bool right_corner(int n, ExponentPair e) { return n >= 4 && e.inv_p == 0.5 && same(e.inv_q, 0.5 - 1.0 / (n - 1)); }

}  // namespace

ExponentPair ExponentPair::make(double inv_p, double inv_q) {
    if (!std::isfinite(inv_p) || !std::isfinite(inv_q) || inv_p < 0.0 || inv_p > 0.5 || inv_q < 0.0 || inv_q > 0.5) {
        throw DomainError("exponent pair (1/p, 1/q) must lie in [0, 1/2]^2");
    }
    return ExponentPair{inv_p, inv_q};
}

bool is_admissible(int n, ExponentPair e) {
    check_n(n, 2);
    e = ExponentPair::make(e.inv_p, e.inv_q);
    if (top_corner(e) || right_corner(n, e)) return true;
    if (!open_square(e)) return false;
    const double edge = 0.5 * (n - 1) * (0.5 - e.inv_q);
    return n == 2 ? e.inv_p > edge : e.inv_p >= edge;
}

bool in_sobolev_region(int n, ExponentPair e) {
    check_n(n, 2);
    e = ExponentPair::make(e.inv_p, e.inv_q);
    if (n >= 3) {
        return top_corner(e) || right_corner(n, e) || (e.inv_p < 0.5 && e.inv_q > 0.0 && e.inv_q < 0.5);
    }
    if (is_admissible(n, e)) return true;
    return e.inv_p < 0.25 && e.inv_q > 0.0 && e.inv_q < 0.5 && e.inv_p <= 0.5 * (0.5 - e.inv_q);
}

double sigma_pq(int n, ExponentPair e) {
    if (!in_sobolev_region(n, e)) {
        throw DomainError("sigma_pq: (1/p, 1/q) = (" + std::to_string(e.inv_p) + ", " + std::to_string(e.inv_q) +
                          ") is outside the region where the estimate is available");
    }
    const double gap = 0.5 - e.inv_q;
    return 0.5 * (n + 1) * gap + std::max(0.0, 0.5 * (n - 1) * gap - e.inv_p);
}

GwpThresholds gwp_thresholds(int n) {
    check_n(n, 3);
    const double d = n;
    GwpThresholds g;
    g.gamma1 = 1.0 + 3.0 / d;
    g.gamma2 = 1.0 + 2.0 / ((d - 1.0) / 2.0 + 2.0 / (d - 1.0));
    g.gamma_c = 1.0 + 4.0 / (d - 1.0);
    if (n <= 5) {
        const double b = (6.0 - d) / 2.0 + 2.0 / (d - 1.0);
        g.gamma3 = ((d + 6.0) / 2.0 + 2.0 / (d - 1.0) + std::sqrt(4.0 * d + b * b)) / d;
        g.gamma4 = 1.0 + 4.0 / (d - 2.0);
    } else {
        g.gamma3 = 1.0 + 2.0 / ((d - 1.0) / 2.0 - 1.0 / (d - 1.0));
        const double b = (d - 3.0) / 2.0 + 3.0 / (d + 1.0);
        g.gamma4 = (d - 1.0) / 2.0 + 3.0 / (d + 1.0) - std::sqrt(b * b - 4.0 * (d - 1.0) / (d + 1.0));
    }
    const double tol = 1e-12;
    if (!(g.gamma1 <= g.gamma2 + tol && g.gamma2 <= g.gamma_c + tol && g.gamma_c <= g.gamma3 + tol &&
          g.gamma3 <= g.gamma4 + tol && g.gamma1 > 1.0)) {
        throw NumericalError("gwp_thresholds: ordering gamma1 <= gamma2 <= gamma_c <= gamma3 <= gamma4 fails for n = " +
                                 std::to_string(n),
                             static_cast<double>(n));
    }
    return g;
}

double gwp_sigma1(int n, double gamma) {
    const double d = n;
    return (d + 1.0) / 4.0 - (d + 1.0) * (d + 5.0) / (8.0 * d) / (gamma - (d + 1.0) / (2.0 * d));
}

double gwp_sigma2(int n, double gamma) { return (n + 1.0) / 4.0 - 1.0 / (gamma - 1.0); }

double gwp_sigma3(int n, double gamma) { return n / 2.0 - 2.0 / (gamma - 1.0); }

GwpRegularity gwp_regularity(int n, double gamma) {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DomainError("gwp_regularity: power gamma must exceed 1");
    const GwpThresholds g = gwp_thresholds(n);
    GwpRegularity out;
    if (gamma <= g.gamma1) {
        out.open_threshold = true;
    } else if (gamma <= g.gamma2) {
        out.branch = 1;
        out.sigma = gwp_sigma1(n, gamma);
    } else if (gamma <= g.gamma_c) {
        // for n = 3, gamma1 = gamma2 and this branch starts right at gamma1
        out.branch = 2;
        out.sigma = gwp_sigma2(n, gamma);
    } else if (gamma <= g.gamma4) {
        out.branch = 3;
        out.sigma = gwp_sigma3(n, gamma);
    } else {
        out.above_gamma4 = true;
        out.sigma = NAN;
    }
    return out;
}

bool sobolev_embedding_ok(int n, double sigma1, double q1, double sigma2, double q2) {
    check_n(n, 1);
    if (!(q1 > 1.0 && q1 < INFINITY && q2 > 1.0 && q2 < INFINITY)) {
        throw DomainError("sobolev_embedding_ok: exponents must lie in (1, inf)");
    }
    const double drop = n / q1 - n / q2;
    return drop >= 0.0 && sigma1 - sigma2 >= drop;
}

void write_region_raster(std::ostream& os, int n, int m) {
    check_n(n, 2);
    if (m < 1) throw DomainError("raster size must be >= 1");
    os << "inv_p,inv_q,admissible,sigma_pq\n";
    char buf[128];
    for (int j = 0; j <= m; ++j) {
        for (int i = 0; i <= m; ++i) {
            const ExponentPair e{0.5 * i / m, 0.5 * j / m};
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,", e.inv_p, e.inv_q, is_admissible(n, e) ? 1 : 0);
            os << buf;
            if (in_sobolev_region(n, e)) {
                std::snprintf(buf, sizeof buf, "%.17g", sigma_pq(n, e));
                os << buf;
            }
            os << '\n';
        }
    }
}

}  // namespace hyperwave
