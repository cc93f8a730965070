#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "hyperwave/spherical.hpp"

namespace hyperwave {

/// Multiplier parameters of (D~)^{-sigma} e^{itD} with D = sqrt(-Delta - rho^2 + kappa^2).
struct WaveParams {
    double t = 1.0;
    double kappa = 1.0;
    double kappa_tilde = 2.0;
    cplx sigma = 2.0;

    /// kappa = rho (wave equation), kappa~ = rho + 1, sigma = 2.
    static WaveParams low_defaults(const SpaceParams& p, double t);
    /// As low_defaults but sigma = (n+1)/2 + i, on the edge of the analytic strip.
    static WaveParams high_defaults(const SpaceParams& p, double t);

    /// t finite and nonzero, kappa > 0, kappa~ > rho.
    void validate(const SpaceParams& p) const;
};

enum class CutoffProfile {
    exponential,  // psi(s) = e^{-1/(1-s)} / (e^{-1/(1-s)} + e^{-1/s})
    squared,      // same with the exponents squared; a second admissible shape
};

/// chi_0(lambda) = psi(|lambda| - 1), chi_inf = 1 - chi_0.
struct CutoffPair {
    CutoffProfile profile = CutoffProfile::exponential;

    double chi0(double lambda) const;
    double chi_inf(double lambda) const { return 1.0 - chi0(lambda); }
};

CutoffPair cutoffs(CutoffProfile profile = CutoffProfile::exponential);

struct KernelOptions {
    double light_cone_band = 0.1;
    /// Abel parameters, each half the previous one.
    std::vector<double> etas{0.2, 0.1, 0.05, 0.025};
    /// The spectral integral for parameter eta stops at lambda = abel_cutoff / eta.
    double abel_cutoff = 36.0;
    /// Relative gap between the last two extrapolation levels that flags a value.
    double reliability_gap = 0.05;
};

/// Abel-summed high-frequency integral with its Richardson ladder.
struct HighFrequencyValue {
    cplx value{};
    bool reliable = true;
    /// |L_last - L_prev| / |L_last| for the last two diagonal levels.
    double level_gap = 0.0;
    cplx prefactor = 1.0;
    std::vector<cplx> abel_samples;
    std::vector<cplx> levels;
};

/// True if |r - |t|| < band.
bool in_light_cone_band(double t, double r, double band = 0.1);

/// Low-frequency kernel omega_t^{sigma,0}(r).
cplx omega0(const SpaceParams& p, const WaveParams& wp, double r, const CutoffPair& cut = cutoffs());

/// High-frequency kernel without the Gamma prefactor, Abel-summed.
/// Throws LightConeError inside the band.
HighFrequencyValue omega_inf(const SpaceParams& p, const WaveParams& wp, double r,
                             const CutoffPair& cut = cutoffs(), const KernelOptions& opts = {});

/// Regularized high-frequency kernel e^{sigma^2} / Gamma((n+1)/2 - sigma) * omega_inf.
/// Requires 0 <= Re sigma <= (n+1)/2; exactly zero without integration when the
/// reciprocal Gamma vanishes.
HighFrequencyValue omega_inf_tilde(const SpaceParams& p, const WaveParams& wp, double r,
                                   const CutoffPair& cut = cutoffs(), const KernelOptions& opts = {});

/// omega0 + omega_inf_tilde at the same sigma.
struct KernelValue {
    cplx value{};
    bool reliable = true;
    /// r lies in the light-cone band; the high part was left out.
    bool in_band = false;
};

/// Full kernel. Inside the light-cone band the high part is omitted and the value
/// flagged unreliable, unless its prefactor vanishes (then it is exact).
KernelValue omega_full(const SpaceParams& p, const WaveParams& wp, double r, const CutoffPair& cut = cutoffs(),
                       const KernelOptions& opts = {});

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least squares of log(value) against log(t). At least 5 samples, all positive.
DecayFit fit_decay_exponent(std::span<const std::pair<double, double>> samples);

}  // namespace hyperwave
