#include "hyperwave/geometry.hpp"

#include <cmath>
#include <string>

#include "hyperwave/error.hpp"

namespace hyperwave {
namespace {

constexpr int kRenormEvery = 16;
constexpr double kPointTol = 1e-12;
constexpr double kLorentzTol = 1e-10;
constexpr double kBlowupTol = 1e-8;
constexpr double kRenormMaxEntry = 1e4;

Eigen::MatrixXd lorentz_j(int n) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n + 1, n + 1);
    j(0, 0) = -1.0;
    return j;
}

double defect(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd j = lorentz_j(static_cast<int>(m.rows()) - 1);
    // scale by the entry size so long words are judged relatively
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const Eigen::MatrixXd ms = m / scale;
    return (ms.transpose() * j * ms - j / (scale * scale)).cwiseAbs().maxCoeff();
}

void check_dim(int n) {
    if (n < 2) throw DomainError("dimension n must be >= 2, got " + std::to_string(n));
}

}  // namespace

double minkowski(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return -x[0] * y[0] + x.tail(x.size() - 1).dot(y.tail(y.size() - 1));
}

HPoint HPoint::from_coords(Eigen::VectorXd coords, bool normalize) {
    if (coords.size() < 3) throw DomainError("HPoint needs at least 3 coordinates");
    if (!coords.allFinite()) throw DomainError("HPoint coordinates must be finite");
    if (!(coords[0] >= 1.0 - kPointTol)) throw DomainError("HPoint must lie on the future sheet (x0 >= 1)");
    // <x,x> / x0^2, computed without squaring huge entries
    const double x0 = coords[0];
    const double spatial = coords.tail(coords.size() - 1).stableNorm();
    const double ratio = spatial / x0;
    const double q = (ratio - 1.0) * (ratio + 1.0);
    if (!(q < kPointTol)) throw DomainError("HPoint coordinates are not timelike");
    if (normalize) {
        // fixing the spatial part and recomputing x0 is well conditioned even far out
        coords[0] = spatial < 1.0 ? std::sqrt(1.0 + spatial * spatial) : spatial * std::sqrt(1.0 + 1.0 / (spatial * spatial));
    } else if (std::abs(q + 1.0 / (x0 * x0)) > kPointTol) {
        throw DomainError("HPoint violates <x,x> = -1");
    }
    return HPoint(std::move(coords));
}

Isometry Isometry::from_matrix(Eigen::MatrixXd m) {
    if (m.rows() != m.cols() || m.rows() < 3) throw DomainError("Isometry matrix must be square, size >= 3");
    if (!m.allFinite()) throw DomainError("Isometry matrix must be finite");
    if (!(m(0, 0) > 0.0)) throw DomainError("Isometry must preserve the future sheet (M00 > 0)");
    if (defect(m) > kLorentzTol) throw DomainError("matrix is not Lorentz: M^T J M != J");
    return Isometry(std::move(m), 0);
}

Isometry Isometry::identity(int n) {
    check_dim(n);
    return Isometry(Eigen::MatrixXd::Identity(n + 1, n + 1), 0);
}

double Isometry::lorentz_defect() const { return defect(m_); }

HPoint origin(int n) {
    check_dim(n);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n + 1);
    v[0] = 1.0;
    return HPoint::from_coords(std::move(v), false);
}

double dist(const HPoint& x, const HPoint& y) {
    if (x.dim() != y.dim()) throw DomainError("dist: dimension mismatch");
    const double c = -minkowski(x.coords(), y.coords());
    return std::acosh(std::max(1.0, c));
}

Isometry boost(int n, double ell, int axis) {
    check_dim(n);
    if (axis < 1 || axis > n) throw DomainError("boost: axis must be in 1..n");
    if (!std::isfinite(ell)) throw DomainError("boost: rapidity must be finite");
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + 1, n + 1);
    m(0, 0) = m(axis, axis) = std::cosh(ell);
    m(0, axis) = m(axis, 0) = std::sinh(ell);
    return Isometry::from_matrix(std::move(m));
}

Isometry rotation(int n, int i, int j, double angle) {
    check_dim(n);
    if (i < 1 || i > n || j < 1 || j > n || i == j) throw DomainError("rotation: need distinct axes in 1..n");
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + 1, n + 1);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    m(i, i) = c;
    m(j, j) = c;
    m(i, j) = -s;
    m(j, i) = s;
    return Isometry::from_matrix(std::move(m));
}

Isometry renormalize(const Isometry& a) {
    Eigen::MatrixXd m = a.matrix();
    const Eigen::Index size = m.cols();
    for (Eigen::Index k = 0; k < size; ++k) {
        Eigen::VectorXd c = m.col(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const double eta = (j == 0) ? -1.0 : 1.0;
            c -= eta * minkowski(c, m.col(j)) * m.col(j);
        }
        const double q = minkowski(c, c);
        c /= std::sqrt(std::abs(q));
        m.col(k) = c;
    }
    return Isometry(std::move(m), 0);
}

Isometry compose(const Isometry& a, const Isometry& b) {
    if (a.dim() != b.dim()) throw DomainError("compose: dimension mismatch");
    Isometry out(a.matrix() * b.matrix(), a.depth() + b.depth() + 1);
    if (out.depth() >= kRenormEvery) {
        // Minkowski norms of columns with huge entries cancel catastrophically; such
        // products are left alone (their relative drift is only ~depth * eps)
        if (out.matrix().cwiseAbs().maxCoeff() <= kRenormMaxEntry) {
            out = renormalize(out);
        } else {
            out = Isometry(out.matrix(), 0);
        }
    }
    if (defect(out.matrix()) > kBlowupTol) {
        throw NumericalError("compose: Lorentz invariant lost (word too long)", defect(out.matrix()));
    }
    return out;
}

Isometry inverse(const Isometry& a) {
    const Eigen::MatrixXd j = lorentz_j(a.dim());
    return Isometry::from_matrix(j * a.matrix().transpose() * j);
}

HPoint apply(const Isometry& a, const HPoint& x) {
    if (a.dim() != x.dim()) throw DomainError("apply: dimension mismatch");
    return HPoint::from_coords(a.matrix() * x.coords(), true);
}

Isometry conjugate(const Isometry& a, const Isometry& c) { return compose(compose(c, a), inverse(c)); }

double translation_length(const Isometry& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a.matrix(), false);
    double top = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) top = std::max(top, std::abs(es.eigenvalues()[i]));
    const double ell = std::log(top);
    return ell < 1e-7 ? 0.0 : ell;
}

Isometry random_rotation(int n, std::mt19937_64& rng) {
    check_dim(n);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
        if (r(i, i) < 0.0) q.col(i) *= -1.0;
    if (q.determinant() < 0.0) q.col(0) *= -1.0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + 1, n + 1);
    m.bottomRightCorner(n, n) = q;
    return Isometry::from_matrix(std::move(m));
}

HPoint random_point(int n, double radius, std::mt19937_64& rng) {
    check_dim(n);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd dir(n);
    for (int i = 0; i < n; ++i) dir[i] = gauss(rng);
    dir.normalize();
    Eigen::VectorXd v(n + 1);
    v[0] = std::cosh(radius);
    v.tail(n) = std::sinh(radius) * dir;
    return HPoint::from_coords(std::move(v), true);
}

}  // namespace hyperwave
