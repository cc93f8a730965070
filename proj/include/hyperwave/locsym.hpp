#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hyperwave/groups.hpp"
#include "hyperwave/kernels.hpp"
#include "hyperwave/parallel.hpp"

namespace hyperwave {

/// mu(r) = e^{(delta_hat + eps) r}; eps defaults to (rho - delta_hat)/2 and must lie in (0, rho - delta_hat).
double weight_mu(const SpaceParams& p, double delta_hat, double r, std::optional<double> eps = {});

double default_epsilon(const SpaceParams& p, double delta_hat);

/// A group together with its verified growth data.
struct QuotientSetup {
    GroupPresentation group;
    double delta_hat = 0.0;
    double epsilon = 0.0;
    GrowthModel growth;
};

/// Estimates delta_hat (radius grown until 200 orbit points) and requires
/// delta_hat < rho - 0.1. The trivial group has delta_hat = 0 and no growth.
QuotientSetup prepare_quotient(const GroupPresentation& g, const SpaceParams& p);

struct QuotientKernelValue {
    cplx value{};
    double truncation_radius = 0.0;
    double tail_bound = 0.0;
    bool reliable = true;
    std::size_t terms = 0;
    /// orbit points inside the light-cone band with an active high part
    std::size_t band_hits = 0;
    /// max over the orbit terms of |omega(d)| / ((1 + d) e^{-rho d})
    double envelope_constant = 0.0;
};

/// Sum of omega_full(d(x, gamma y)) over the orbit within R. The tail bound is
/// envelope_constant * sum_{k >= ceil(R)} a e^{delta_hat (k + s)} (2 + k) e^{-rho k},
/// with growth amplitude a and shift s = d(o,x) + d(o,y).
QuotientKernelValue summed_kernel(const QuotientSetup& q, const SpaceParams& p, const WaveParams& wp,
                                  const HPoint& x, const HPoint& y, double R, const CutoffPair& cut = cutoffs(),
                                  const KernelOptions& opts = {});

/// Same from precomputed orbit distances; `shift` as above.
QuotientKernelValue summed_kernel_from_distances(const QuotientSetup& q, const SpaceParams& p, const WaveParams& wp,
                                                 std::span<const double> distances, double shift, double R,
                                                 const CutoffPair& cut = cutoffs(), const KernelOptions& opts = {});

/// A_n int_0^inf |psi(r)| phi_0(r) sinh^{n-1}(r) dr. The part beyond the grid is
/// extrapolated from the decay rate at its end; throws NumericalError when the
/// integrand does not decay or that tail is not small.
double kunze_stein_bound(const SpaceParams& p, const RadialFunction& psi);

/// (A_n int_0^inf phi_0 mu^{-1} |g|^{q/2} sinh^{n-1} dr)^{2/q} for q >= 2.
double bilinear_bound(const SpaceParams& p, double delta_hat, double eps, const RadialFunction& g, double q);

struct DispersiveConfig {
    cplx sigma = 2.0;
    /// Wave parameters; the low_defaults values when unset.
    std::optional<double> kappa;
    std::optional<double> kappa_tilde;
    /// Lebesgue exponent, (2, inf]; sigma must satisfy Re sigma >= (n+1)(1/2 - 1/q).
    double q = INFINITY;
    std::vector<double> t_grid;
    std::vector<std::pair<HPoint, HPoint>> pairs;
    double R = 12.0;
    std::pair<double, double> small_window{1.0 / 64.0, 0.25};
    std::pair<double, double> large_window{4.0, 64.0};
    double small_tolerance = 0.15;
    double large_tolerance = 0.15;
    CutoffPair cut;
    KernelOptions kernel;
    ExecutionMode mode = ExecutionMode::parallel;
};

struct DispersiveCell {
    double t = 0.0;
    std::size_t pair_id = 0;
    QuotientKernelValue value;
};

struct DispersiveRow {
    double t = 0.0;
    double sup = 0.0;
    bool reliable = true;
};

struct WindowFit {
    double lo = 0.0;
    double hi = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    std::size_t points = 0;
    std::optional<DecayFit> fit;  // needs 5 reliable rows

    bool within_tolerance() const { return fit && std::abs(fit->slope - target) <= tolerance; }
};

struct DispersiveResult {
    std::vector<DispersiveCell> cells;  // t-major, then pair
    std::vector<DispersiveRow> rows;
    WindowFit small;
    WindowFit large;
};

/// S(t) = max over pairs of |summed kernel| for every t, with log-log fits on
/// the small window (target -(n-1)/2) and the large window (target -3/2).
/// Rows holding an unreliable value are excluded from the fits.
DispersiveResult dispersive_decay_experiment(const QuotientSetup& q, const SpaceParams& p,
                                             const DispersiveConfig& cfg);

/// Columns t, pair_id, value_re, value_im, tail_bound, reliable.
void write_dispersive_csv(std::ostream& os, const DispersiveResult& r);
nlohmann::json dispersive_summary(const DispersiveResult& r);

/// count points from a to b, equally spaced in log.
std::vector<double> log_spaced(double a, double b, int count);

/// Pairs of independent random points with d(o, .) uniform in [0, radius].
std::vector<std::pair<HPoint, HPoint>> sample_pairs(int n, std::size_t count, double radius, std::uint64_t seed);

}  // namespace hyperwave
