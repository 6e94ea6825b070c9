#include "imtrack/moments.hpp"

#include <cmath>
#include <sstream>

#include "imtrack/errors.hpp"

namespace imtrack {

bool MomentVector::valid() const {
  if (!(n20 > 0.0) || !(n02 > 0.0)) return false;
  const double sum = n20 + n02;
  return det() > kMomentDetTol * sum * sum;
}

Eigen::VectorXd ExtendedState::vec() const {
  Eigen::VectorXd v(kStateDim);
  v[kN11] = moments.n11;
  v[kN20] = moments.n20;
  v[kN02] = moments.n02;
  v[kXc] = pos.x();
  v[kVx] = vel.x();
  v[kYc] = pos.y();
  v[kVy] = vel.y();
  v[kOmega] = omega;
  return v;
}

ExtendedState ExtendedState::from_vec(const Eigen::VectorXd& v) {
  ExtendedState s;
  s.moments = {v[kN11], v[kN20], v[kN02]};
  s.pos = {v[kXc], v[kYc]};
  s.vel = {v[kVx], v[kVy]};
  s.omega = v[kOmega];
  return s;
}

double normalize_orientation(double alpha) {
  double a = std::fmod(alpha, kPi);
  if (a <= -kPi / 2.0) a += kPi;
  if (a > kPi / 2.0) a -= kPi;
  return a;
}

MomentVector ellipse_to_moments(const EllipseShape& e) {
  if (!(e.a2 > 0.0) || !(e.a1 >= e.a2)) {
    std::ostringstream msg;
    msg << "ellipse_to_moments: invalid semi-axes a1=" << e.a1 << " a2=" << e.a2;
    throw NumericalError(msg.str());
  }
  const double c = std::cos(e.alpha);
  const double s = std::sin(e.alpha);
  const double q1 = e.a1 * e.a1;
  const double q2 = e.a2 * e.a2;
  MomentVector m;
  m.n20 = (q1 * c * c + q2 * s * s) / 4.0;
  m.n02 = (q1 * s * s + q2 * c * c) / 4.0;
  m.n11 = (q1 - q2) * std::sin(2.0 * e.alpha) / 8.0;
  return m;
}

EllipseShape moments_to_ellipse(const MomentVector& m, const Eigen::Vector2d& centroid) {
  if (!m.valid()) {
    std::ostringstream msg;
    msg << "moments_to_ellipse: moment matrix not positive definite"
        << " (n11=" << m.n11 << " n20=" << m.n20 << " n02=" << m.n02 << ")";
    throw NumericalError(msg.str());
  }
  const double sum = m.n20 + m.n02;
  const double diff = m.n20 - m.n02;
  const double root = std::hypot(diff, 2.0 * m.n11);

  EllipseShape e;
  e.a1 = std::sqrt(2.0 * (sum + root));
  // 2*(sum - root) rationalized to avoid cancellation for flat ellipses.
  e.a2 = std::sqrt(8.0 * m.det() / (sum + root));
  e.centroid = centroid;

  // Orientation from t = tan(alpha); both branches are cancellation free.
  if (std::abs(m.n11) < kMomentDetTol * sum) {
    e.alpha = (m.n20 >= m.n02) ? 0.0 : kPi / 2.0;
  } else if (diff > 0.0) {
    e.alpha = std::atan(2.0 * m.n11 / (root + diff));
  } else {
    e.alpha = std::atan((root - diff) / (2.0 * m.n11));
  }
  return e;
}

double implicit_value(const Eigen::Vector2d& x, const ExtendedState& s) {
  if (!s.moments.valid()) {
    throw NumericalError("implicit_value: moment matrix not positive definite");
  }
  const Eigen::Vector2d d = x - s.pos;
  return detail::implicit_value_raw(d.x(), d.y(), s.moments.n11, s.moments.n20, s.moments.n02);
}

double area(const MomentVector& m) {
  if (!m.valid()) {
    throw NumericalError("area: moment matrix not positive definite");
  }
  return 4.0 * kPi * std::sqrt(m.det());
}

MomentVector project_to_cone(const MomentVector& m) {
  if (m.valid()) return m;
  Eigen::Matrix2d n;
  n << m.n20, m.n11, m.n11, m.n02;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(n);
  const Eigen::Vector2d lam = es.eigenvalues();
  // Flooring both eigenvalues at 1e-3 of the dominant magnitude keeps
  // det > kMomentDetTol * trace^2 with a wide margin.
  const double floor = std::max(1e-3 * lam.cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::Vector2d clamped = lam.cwiseMax(floor);
  const Eigen::Matrix2d fixed =
      es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
  return {fixed(0, 1), fixed(0, 0), fixed(1, 1)};
}

bool contains(const EllipseShape& e, const Eigen::Vector2d& x) {
  ExtendedState s;
  s.moments = ellipse_to_moments(e);
  s.pos = e.centroid;
  return implicit_value(x, s) <= 1.0 + 1e-12;
}

}  // namespace imtrack
