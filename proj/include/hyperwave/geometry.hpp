#pragma once

#include <Eigen/Dense>
#include <random>

namespace hyperwave {

/// Minkowski form <x,y> = -x0 y0 + x1 y1 + ... + xn yn.
double minkowski(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Point on the future sheet of the hyperboloid <x,x> = -1 in R^{n,1}.
class HPoint {
public:
    /// Validates (and by default rescales onto the hyperboloid) raw coordinates.
    static HPoint from_coords(Eigen::VectorXd coords, bool normalize = true);

    int dim() const { return static_cast<int>(coords_.size()) - 1; }
    const Eigen::VectorXd& coords() const { return coords_; }
    double operator[](int i) const { return coords_[i]; }

private:
    explicit HPoint(Eigen::VectorXd c) : coords_(std::move(c)) {}
    Eigen::VectorXd coords_;
};

/// Element of O+(n,1). `depth` counts compositions since the last
/// J-orthonormalization; it is reset every 16 products. Products with entries
/// above 1e4 are not re-orthonormalized, since their column norms cancel.
class Isometry {
public:
    static Isometry from_matrix(Eigen::MatrixXd m);
    static Isometry identity(int n);

    int dim() const { return static_cast<int>(m_.rows()) - 1; }
    const Eigen::MatrixXd& matrix() const { return m_; }
    int depth() const { return depth_; }

    /// max entry of |M^T J M - J|
    double lorentz_defect() const;

private:
    Isometry(Eigen::MatrixXd m, int depth) : m_(std::move(m)), depth_(depth) {}
    Eigen::MatrixXd m_;
    int depth_ = 0;

    friend Isometry compose(const Isometry& a, const Isometry& b);
    friend Isometry renormalize(const Isometry& a);
};

HPoint origin(int n);
double dist(const HPoint& x, const HPoint& y);

/// Hyperbolic translation of rapidity `ell` along coordinate `axis` (1..n).
Isometry boost(int n, double ell, int axis);

/// Rotation by `angle` in the spatial (i, j) plane, 1 <= i, j <= n; fixes the origin.
Isometry rotation(int n, int i, int j, double angle);

Isometry compose(const Isometry& a, const Isometry& b);
Isometry inverse(const Isometry& a);
HPoint apply(const Isometry& a, const HPoint& x);

/// Gram–Schmidt of the columns with respect to J = diag(-1, 1, ..., 1).
/// Well conditioned only for moderate entries.
Isometry renormalize(const Isometry& a);

/// Conjugate c a c^{-1}.
Isometry conjugate(const Isometry& a, const Isometry& c);

/// Translation length log(max |eigenvalue|); zero for elliptic/parabolic elements.
double translation_length(const Isometry& a);

/// Uniformly random rotation about the origin (Haar on SO(n)).
Isometry random_rotation(int n, std::mt19937_64& rng);

/// Random point at geodesic distance `radius` from the origin in a uniform direction.
HPoint random_point(int n, double radius, std::mt19937_64& rng);

}  // namespace hyperwave
