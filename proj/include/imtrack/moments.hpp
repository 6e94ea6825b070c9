#pragma once

#include <Eigen/Dense>

namespace imtrack {

inline constexpr double kPi = 3.14159265358979323846;

// Relative threshold below which the moment matrix counts as degenerate.
inline constexpr double kMomentDetTol = 1e-12;

//! Normalized centered second-order image moments of a planar region.
//!
//! For a region with area-normalized density, n20 = E[(x-xc)^2],
//! n02 = E[(y-yc)^2], n11 = E[(x-xc)(y-yc)]. A uniform elliptic region with
//! semi-axes a1 >= a2 maps one-to-one onto a positive definite moment matrix
//! [[n20, n11], [n11, n02]].
struct MomentVector {
  double n11 = 0.0;
  double n20 = 0.0;
  double n02 = 0.0;

  Eigen::Vector3d vec() const { return {n11, n20, n02}; }
  static MomentVector from_vec(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

  double det() const { return n20 * n02 - n11 * n11; }

  // Positive definite within the conversion threshold:
  // n20 > 0, n02 > 0 and det > kMomentDetTol * (n20 + n02)^2.
  bool valid() const;
};

//! Elliptic extent: semi-axes a1 >= a2 > 0, major-axis orientation alpha
//! normalized to (-pi/2, pi/2].
struct EllipseShape {
  double a1 = 1.0;
  double a2 = 1.0;
  double alpha = 0.0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
};

// Index layout of the common 8-dim filter state vector.
enum StateIndex : int {
  kN11 = 0,
  kN20,
  kN02,
  kXc,
  kVx,
  kYc,
  kVy,
  kOmega,
  kStateDim,
};

//! Full track state: extent moments plus planar kinematics. The turn rate
//! omega is carried by every model; constant-velocity dynamics leave it
//! untouched.
struct ExtendedState {
  MomentVector moments;
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  Eigen::Vector2d vel = Eigen::Vector2d::Zero();
  double omega = 0.0;

  Eigen::VectorXd vec() const;
  static ExtendedState from_vec(const Eigen::VectorXd& v);
};

// Wraps an angle into (-pi/2, pi/2] (ellipse orientations are pi-periodic).
double normalize_orientation(double alpha);

// Moment vector of the uniform ellipse (centroid ignored):
//   n20 = (a1^2 cos^2 a + a2^2 sin^2 a)/4
//   n02 = (a1^2 sin^2 a + a2^2 cos^2 a)/4
//   n11 = (a1^2 - a2^2) sin(2a)/8
MomentVector ellipse_to_moments(const EllipseShape& e);

// Inverse of ellipse_to_moments; the returned centroid is the one supplied.
// Throws NumericalError when the moment matrix is not positive definite.
EllipseShape moments_to_ellipse(const MomentVector& m,
                                const Eigen::Vector2d& centroid = Eigen::Vector2d::Zero());

// Scaled implicit ellipse value
//   g(x) = rho * (n02 dx^2 + n20 dy^2 - 2 n11 dx dy),  rho = 1/(4 det),
// with d = x - centroid. Equals s^2 for points on the s-scaled boundary:
// 0 at the centroid, 1 on the full boundary.
double implicit_value(const Eigen::Vector2d& x, const ExtendedState& s);

// Region area implied by the moments: 4*pi*sqrt(det) = pi*a1*a2.
double area(const MomentVector& m);

// Nearest-in-spectrum projection onto the valid cone: eigenvalues of the
// moment matrix are floored at a small fraction of the dominant one, so the
// result always satisfies MomentVector::valid(). Identity for valid input.
// Filter updates linearize the measurement, so an aggressive step can push
// the estimated moments outside the cone; this pulls them back.
MomentVector project_to_cone(const MomentVector& m);

// Closed-region membership test: implicit_value <= 1 (tiny tolerance so that
// exactly constructed boundary points count as inside).
bool contains(const EllipseShape& e, const Eigen::Vector2d& x);

namespace detail {

// Raw implicit value without validity checks; used on unscented sigma points
// whose moment block may leave the positive definite cone. The denominator is
// clamped away from zero so the result stays finite.
inline double implicit_value_raw(double dx, double dy, double n11, double n20, double n02) {
  double den = 4.0 * (n20 * n02 - n11 * n11);
  constexpr double kTiny = 1e-300;
  if (den > -kTiny && den < kTiny) den = (den < 0.0) ? -kTiny : kTiny;
  return (n02 * dx * dx + n20 * dy * dy - 2.0 * n11 * dx * dy) / den;
}

}  // namespace detail

}  // namespace imtrack
