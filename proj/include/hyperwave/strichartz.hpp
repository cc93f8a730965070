#pragma once

#include <iosfwd>

namespace hyperwave {

/// Coordinates (1/p, 1/q), each in [0, 1/2].
struct ExponentPair {
    double inv_p = 0.0;
    double inv_q = 0.0;

    static ExponentPair make(double inv_p, double inv_q);
};

/// Admissible (p, q) on M. n >= 3: the closed-below triangle
/// 1/p >= ((n-1)/2)(1/2 - 1/q) inside the open square, plus (0, 1/2) and, for
/// n >= 4, (1/2, 1/2 - 1/(n-1)). n = 2: strict inequality, plus (0, 1/2).
bool is_admissible(int n, ExponentPair e);

/// Domain of sigma_pq: the square [0, 1/2) x (0, 1/2) with the two corner points
/// for n >= 3; for n = 2 the admissible set together with
/// {0 <= 1/p < 1/4, 0 < 1/q < 1/2, 1/p <= (1/2)(1/2 - 1/q)}.
bool in_sobolev_region(int n, ExponentPair e);

/// ((n+1)/2)(1/2 - 1/q) + max{0, ((n-1)/2)(1/2 - 1/q) - 1/p}.
double sigma_pq(int n, ExponentPair e);

struct GwpThresholds {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma_c = 0.0;
    double gamma3 = 0.0;
    double gamma4 = 0.0;
};

/// Critical powers for n >= 3; gamma3 and gamma4 switch formula between n = 5 and 6.
GwpThresholds gwp_thresholds(int n);

struct GwpRegularity {
    double sigma = 0.0;
    /// sigma is 0+: any small positive regularity works
    bool open_threshold = false;
    /// gamma > gamma4, no result
    bool above_gamma4 = false;
    /// 0 for the 0+ regime, 1..3 for sigma_1..sigma_3
    int branch = 0;
};

double gwp_sigma1(int n, double gamma);
double gwp_sigma2(int n, double gamma);
double gwp_sigma3(int n, double gamma);

/// Sobolev regularity for small-data global well-posedness with power gamma > 1.
GwpRegularity gwp_regularity(int n, double gamma);

/// H^{sigma1, q1} embeds in H^{sigma2, q2}: sigma1 - sigma2 >= n/q1 - n/q2 >= 0.
bool sobolev_embedding_ok(int n, double sigma1, double q1, double sigma2, double q2);

/// CSV inv_p, inv_q, admissible, sigma_pq on the nodes (i/(2m), j/(2m)),
/// 0 <= i, j <= m; sigma_pq is empty outside its domain.
void write_region_raster(std::ostream& os, int n, int m);

}  // namespace hyperwave
