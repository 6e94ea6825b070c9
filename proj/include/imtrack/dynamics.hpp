#pragma once

#include <Eigen/Dense>

#include "imtrack/moments.hpp"
#include "imtrack/ukf.hpp"

namespace imtrack {

// Turn rates with |omega|*T below this use the series-limit kinematics.
inline constexpr double kOmegaSeriesTol = 1e-8;

// Inert turn-rate variance added by the constant-velocity model so the common
// 8-dim covariance stays positive definite.
inline constexpr double kOmegaFloorVariance = 1e-12;

//! Constant-velocity process noise: white-acceleration power spectral density
//! q plus an additive per-step covariance on the moment block.
struct CvNoiseParams {
  double q = 0.0;
  Eigen::Matrix3d moment_cov = Eigen::Matrix3d::Zero();
};

//! Coordinated-turn process noise variances
//! [n11, n20, n02, accel_x, accel_y, turn_rate].
struct CtNoiseParams {
  Eigen::Matrix<double, 6, 1> w_var = Eigen::Matrix<double, 6, 1>::Zero();
};

enum class MotionModel { kConstantVelocity, kCoordinatedTurn };

//! One motion model with its process noise.
struct ModelConfig {
  MotionModel model = MotionModel::kConstantVelocity;
  CvNoiseParams cv;
  CtNoiseParams ct;
};

//! Linear constant-velocity transition over the 7-dim state
//! [n11, n20, n02, x, vx, y, vy]: moments are static, kinematics integrate.
struct CvTransition {
  Eigen::Matrix<double, 7, 7> F;
  Eigen::Matrix<double, 7, 7> C;
};

CvTransition cv_transition(double T, const CvNoiseParams& params);

// Exact moment rotation over one step: M(theta) with theta = omega*tau,
//   [[ cos 2t,  sin(2t)/2, -sin(2t)/2],
//    [-sin 2t,  cos^2 t,    sin^2 t  ],
//    [ sin 2t,  sin^2 t,    cos^2 t  ]]
// acting on [n11, n20, n02]. Satisfies the semigroup property and preserves
// n20 + n02 and n20*n02 - n11^2.
Eigen::Matrix3d ct_moment_transition(double omega, double tau);

//! Coordinated-turn transition over the 8-dim state together with the process
//! noise input matrix Gamma = blockdiag(I3, Gamma_ct).
struct CtTransition {
  Eigen::Matrix<double, 8, 8> F;
  Eigen::Matrix<double, 8, 6> G;
};

CtTransition ct_transition(double omega, double T);
CtTransition ct_transition(const ExtendedState& state, double T);

// One prediction step over the scan period. CV propagates in closed form
// (cov' = F cov F^T + C); CT propagates the state augmented with its process
// noise through the unscented transform, evaluating F at each sigma point's
// own turn rate.
GaussianBelief predict(const GaussianBelief& belief, const ModelConfig& model, double T,
                       const UtParams& params);

}  // namespace imtrack
