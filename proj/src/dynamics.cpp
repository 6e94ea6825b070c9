#include "imtrack/dynamics.hpp"

#include <cmath>

#include "imtrack/errors.hpp"

namespace imtrack {

CvTransition cv_transition(double T, const CvNoiseParams& params) {
  CvTransition out;
  out.F.setIdentity();
  out.F(3, 4) = T;  // x  <- x + T vx
  out.F(5, 6) = T;  // y  <- y + T vy

  Eigen::Matrix2d cw;
  cw << params.q * T * T * T / 3.0, params.q * T * T / 2.0,
        params.q * T * T / 2.0,     params.q * T;
  out.C.setZero();
  out.C.topLeftCorner<3, 3>() = params.moment_cov;
  out.C.block<2, 2>(3, 3) = cw;
  out.C.block<2, 2>(5, 5) = cw;
  return out;
}

Eigen::Matrix3d ct_moment_transition(double omega, double tau) {
  const double theta = omega * tau;
  const double c2 = std::cos(2.0 * theta);
  const double s2 = std::sin(2.0 * theta);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix3d m;
  m <<  c2,  0.5 * s2, -0.5 * s2,
       -s2,  c * c,     s * s,
        s2,  s * s,     c * c;
  return m;
}

CtTransition ct_transition(double omega, double T) {
  // sin(wT)/w and (1-cos(wT))/w with their series limits near w = 0.
  double sw, cw;
  if (std::abs(omega * T) < kOmegaSeriesTol) {
    sw = T;
    cw = omega * T * T / 2.0;
  } else {
    sw = std::sin(omega * T) / omega;
    cw = (1.0 - std::cos(omega * T)) / omega;
  }
  const double cT = std::cos(omega * T);
  const double sT = std::sin(omega * T);

  CtTransition out;
  out.F.setZero();
  out.F.topLeftCorner<3, 3>() = ct_moment_transition(omega, T);
  Eigen::Matrix<double, 5, 5> a;
  a << 1.0, sw,  0.0, -cw, 0.0,
       0.0, cT,  0.0, -sT, 0.0,
       0.0, cw,  1.0,  sw, 0.0,
       0.0, sT,  0.0,  cT, 0.0,
       0.0, 0.0, 0.0, 0.0, 1.0;
  out.F.bottomRightCorner<5, 5>() = a;

  out.G.setZero();
  out.G.topLeftCorner<3, 3>().setIdentity();
  out.G(kXc, 3) = T * T / 2.0;
  out.G(kVx, 3) = T;
  out.G(kYc, 4) = T * T / 2.0;
  out.G(kVy, 4) = T;
  out.G(kOmega, 5) = T;
  return out;
}

CtTransition ct_transition(const ExtendedState& state, double T) {
  return ct_transition(state.omega, T);
}

GaussianBelief predict(const GaussianBelief& belief, const ModelConfig& model, double T,
                       const UtParams& params) {
  if (belief.dim() != kStateDim) {
    throw ConfigError("predict: belief dimension must match the extended state");
  }

  GaussianBelief out;
  if (model.model == MotionModel::kConstantVelocity) {
    const CvTransition t = cv_transition(T, model.cv);
    Eigen::MatrixXd f = Eigen::MatrixXd::Identity(kStateDim, kStateDim);
    f.topLeftCorner<7, 7>() = t.F;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(kStateDim, kStateDim);
    c.topLeftCorner<7, 7>() = t.C;
    c(kOmega, kOmega) = kOmegaFloorVariance;
    out.mean = f * belief.mean;
    out.cov = f * belief.cov * f.transpose() + c;
  } else {
    // Augment with the 6-dim noise vector; each sigma point carries its own
    // turn rate into the transition.
    const Eigen::VectorXd extra_mean = Eigen::VectorXd::Zero(6);
    SigmaPoints sp = augmented_sigma_points(belief, extra_mean, model.ct.w_var, params);
    const int n = sp.count();
    Eigen::MatrixXd prop(kStateDim, n);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd& x = sp.points.col(i);
      const CtTransition t = ct_transition(x[kOmega], T);
      prop.col(i) = t.F * x.head(kStateDim) + t.G * x.tail(6);
    }
    out.mean = prop * sp.w_mean;
    out.cov = Eigen::MatrixXd::Zero(kStateDim, kStateDim);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd d = prop.col(i) - out.mean;
      out.cov += sp.w_cov[i] * d * d.transpose();
    }
  }
  const MomentVector projected =
      project_to_cone({out.mean[kN11], out.mean[kN20], out.mean[kN02]});
  out.mean[kN11] = projected.n11;
  out.mean[kN20] = projected.n20;
  out.mean[kN02] = projected.n02;
  condition_covariance(out.cov, "predict");
  return out;
}

}  // namespace imtrack
