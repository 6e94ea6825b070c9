#pragma once

#include <vector>

#include <Eigen/Dense>

#include "imtrack/moments.hpp"

namespace imtrack {

//! Per-axis measurement noise variances (axis-aligned Gaussian).
struct NoiseSpec {
  double sigma_x2 = 0.0;
  double sigma_y2 = 0.0;
};

//! Gaussian approximation of the squared boundary scale s^2.
//!
//! Each measurement source lies on an s-scaled copy of the extent boundary
//! with s^2 ~ U(0,1) (area-uniform sources).  The squared scale enters the
//! pseudo-measurement linearly and is approximated as N(2/3, 1/18) -- the
//! mean and variance of the *size-biased* U(0,1) (density 2u on [0,1]), not
//! of U(0,1) itself (1/2, 1/12).  The size-biased moments are what keep the
//! sequential scalar update unbiased: each point's update weights the
//! residual by the measurement Jacobian, which in the extent directions is
//! itself proportional to the point's implicit value u = s^2.  The resulting
//! weighted-least-squares fixed point satisfies E[u(u - mean)] = 0, giving
//! mean = E[u^2]/E[u] = 2/3 and residual variance E[u(u - 2/3)^2]/E[u] =
//! 1/18.  Using the raw U(0,1) moments instead leaves a fixed-point extent
//! inflation of E[u^2]/(E[u]^2) = 4/3 in every moment.
struct ScaleDistribution {
  static constexpr double kMean = 2.0 / 3.0;
  static constexpr double kVariance = 1.0 / 18.0;
};

//! One sensor scan: timestamped point cloud plus the noise it was drawn with.
struct MeasurementScan {
  double time = 0.0;
  std::vector<Eigen::Vector2d> points;
  NoiseSpec noise;
};

// Pseudo-measurement for one point: g(z, state) - f_value - scale^2, where g
// is the scaled implicit ellipse value. The observed value is always 0.
double pseudo_measurement(const Eigen::Vector2d& z, const ExtendedState& state,
                          double f_value, double scale);

//! First two moments of the measurement-noise polynomial f(z, nu, state).
struct FMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Closed-form mean and variance of the noise polynomial at measurement z:
//   mean = rho (n02 sx2 + n20 sy2)
//   var  = rho^2 (2 n02^2 sx2^2 + 2 n20^2 sy2^2 + 4 n11^2 sx2 sy2
//                 + 4 (n02 dx - n11 dy)^2 sx2 + 4 (n20 dy - n11 dx)^2 sy2)
// with d = z - centroid and rho = 1/(4 det).
FMoments noise_poly_moments(const Eigen::Vector2d& z, const ExtendedState& state,
                            const NoiseSpec& noise);

// Exact noise polynomial evaluated at one noise draw nu; only the sampling
// oracle tests use this.
double noise_poly_sample(const Eigen::Vector2d& z, const ExtendedState& state,
                         const Eigen::Vector2d& nu);

}  // namespace imtrack
