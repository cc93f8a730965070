#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "hyperwave/quadrature.hpp"

namespace hyperwave {

using cplx = std::complex<double>;

/// Root data of real hyperbolic space H^n with |alpha| = 1 (curvature -1).
struct SpaceParams {
    int n = 3;
    double m_alpha = 2.0;
    double m_2alpha = 0.0;
    double rho = 1.0;

    static SpaceParams hyperbolic(int n);

    /// Area of the unit sphere S^{n-1}.
    double sphere_area() const;
    /// c_n = integral of sin^{n-2} over [0, pi].
    double sine_integral() const;
};

/// Radial profile sampled on a strictly increasing grid starting at 0, read
/// back with local cubic (4-point Lagrange) interpolation. Evaluation outside
/// the grid throws.
class RadialFunction {
public:
    RadialFunction(std::vector<double> grid, std::vector<cplx> values);

    cplx operator()(double r) const;
    double r_max() const { return grid_.back(); }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<cplx>& values() const { return values_; }

private:
    std::vector<double> grid_;
    std::vector<cplx> values_;
};

/// phi_lambda(r) from its integral over theta in [0, pi], adaptive
/// Gauss–Legendre. Throws NumericalError if the error estimate exceeds 1e-10.
cplx phi_lambda(const SpaceParams& p, cplx lambda, double r);

/// Ground spherical function phi_0(r).
double phi0(const SpaceParams& p, double r);

/// Precomputed quadrature for lambda -> phi_lambda(r) at a fixed radius,
/// accurate for |lambda| <= lambda_max. Built from the Abel-type
/// representation phi_lambda(r) = K(r) * int_0^r cos(lambda u) (cosh r - cosh u)^{(n-3)/2} du,
/// so each evaluation is a single cosine sum.
class PhiRule {
public:
    PhiRule(const SpaceParams& p, double r, double lambda_max);

    double operator()(double lambda) const;
    double radius() const { return r_; }
    double lambda_max() const { return lambda_max_; }
    std::size_t size() const { return u_.size(); }

private:
    double r_;
    double lambda_max_;
    std::vector<double> u_;
    std::vector<double> w_;
};

/// Harish-Chandra expansion phi = 2 Re(c(lambda) Phi_lambda(r)). Intended for
/// lambda >= 1 and r >= 0.5, where the series converges quickly.
double phi_hc(const SpaceParams& p, double lambda, double r);

/// lambda -> phi_lambda(r) at fixed r for real |lambda| <= lambda_max, choosing
/// per lambda between the H^3 closed form, the Harish-Chandra series
/// (lambda >= 1, r >= 0.5) and a PhiRule built once.
class PhiEvaluator {
public:
    PhiEvaluator(const SpaceParams& p, double r, double lambda_max);

    double operator()(double lambda) const;

private:
    SpaceParams p_;
    double r_;
    std::optional<PhiRule> rule_;
};

/// Fastest accurate route for real lambda: closed form for n = 3, the
/// Harish-Chandra series for lambda >= 1 and r >= 0.5, PhiRule otherwise.
double phi_real(const SpaceParams& p, double lambda, double r);

/// Harish-Chandra c-function, normalized so that c(-i rho) = 1.
cplx c_function(const SpaceParams& p, cplx lambda);
/// log c(lambda); imaginary part modulo 2 pi.
cplx log_c_function(const SpaceParams& p, cplx lambda);

/// |c(lambda)|^{-2}; zero at lambda = 0.
double plancherel_density(const SpaceParams& p, double lambda);

/// Forward transform int_0^R f(r) phi_lambda(r) A_n sinh^{n-1}(r) dr over the
/// sampled range of f. Throws NumericalError when the integrand at the end of
/// the grid is not negligible.
cplx spherical_transform(const SpaceParams& p, const RadialFunction& f, double lambda);

/// Same for a callable profile integrated over [0, r_max].
cplx spherical_transform(const SpaceParams& p, const std::function<cplx(double)>& f, double lambda,
                         double r_max);

/// C_0 int_0^lambda_max g(lambda) phi_lambda(r) |c(lambda)|^{-2} d lambda.
/// Throws NumericalError when g is not negligible at lambda_max.
cplx inverse_transform(const SpaceParams& p, const std::function<cplx(double)>& g, double r,
                       double lambda_max);

/// Constant C_0 of the inversion formula, calibrated once per dimension by
/// transforming the Gaussian exp(-r^2) and requiring the round trip to return
/// its value at r = 0. Cached; thread-safe.
double inversion_constant(const SpaceParams& p);

}  // namespace hyperwave
