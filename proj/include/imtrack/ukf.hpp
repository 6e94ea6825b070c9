#pragma once

#include <functional>

#include <Eigen/Dense>

#include "imtrack/measurement.hpp"
#include "imtrack/moments.hpp"

namespace imtrack {

//! Scaled unscented transform parameters. With the defaults (alpha = 1,
//! beta = 2, kappa = 0) lambda is 0 and the spread is sqrt(M).
struct UtParams {
  double alpha = 1.0;
  double beta = 2.0;
  double kappa = 0.0;

  double lambda(int dim) const { return alpha * alpha * (dim + kappa) - dim; }
};

//! Gaussian state belief (mean + covariance).
struct GaussianBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int dim() const { return static_cast<int>(mean.size()); }
};

//! 2M+1 sigma points (columns) with mean and covariance weights.
struct SigmaPoints {
  Eigen::MatrixXd points;
  Eigen::VectorXd w_mean;
  Eigen::VectorXd w_cov;

  int count() const { return static_cast<int>(points.cols()); }
};

// Sigma points mean +- columns of sqrt((M+lambda) cov) via Cholesky.
// Throws ConfigError for invalid parameters and NumericalError (with the
// offending matrix in the message) when the factorization fails.
SigmaPoints sigma_points(const GaussianBelief& belief, const UtParams& params);

// Sigma points for an augmented belief whose covariance is
// blockdiag(core.cov, diag(extra_var)). The extra block is factored exactly,
// so zero extra variances are fine.
SigmaPoints augmented_sigma_points(const GaussianBelief& core, const Eigen::VectorXd& extra_mean,
                                   const Eigen::VectorXd& extra_var, const UtParams& params);

//! Unscented transform output with the input-output cross covariance.
struct UtResult {
  GaussianBelief belief;
  Eigen::MatrixXd cross_cov;
};

UtResult unscented_transform(const GaussianBelief& belief, const UtParams& params,
                             const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn);

// In-place symmetrization: C <- (C + C^T)/2.
void symmetrize(Eigen::MatrixXd& cov);

// Symmetrizes and repairs slightly indefinite covariances: a smallest
// eigenvalue in (-1e-9*trace, 0] gets jitter 1e-12*trace*I. Anything worse,
// or a matrix that still fails to factor afterwards, throws NumericalError.
void condition_covariance(Eigen::MatrixXd& cov, const char* context);

//! Unscented moments of one scalar pseudo-measurement, with the cross
//! covariance against the (unaugmented) state.
struct PseudoMeasurementMoments {
  double mean = 0.0;
  double variance = 0.0;
  Eigen::VectorXd state_cross;
};

// Augments the belief with the noise polynomial f and the boundary scale s,
// then propagates pseudo_measurement through sigma points. Shared by the
// sequential update and by the IMM likelihood evaluation. The overload taking
// f_moments supports the sequential update, where f is matched at the scan's
// predicted state rather than at the per-point running belief.
PseudoMeasurementMoments pseudo_measurement_moments(const GaussianBelief& belief,
                                                    const Eigen::Vector2d& z,
                                                    const FMoments& f_moments,
                                                    const UtParams& params);
PseudoMeasurementMoments pseudo_measurement_moments(const GaussianBelief& belief,
                                                    const Eigen::Vector2d& z,
                                                    const NoiseSpec& noise,
                                                    const UtParams& params);

// Sequential scan update: one scalar Kalman update per point, in scan order,
// against the constant pseudo-measurement 0. An empty scan returns the belief
// unchanged. Throws NumericalError (naming the point index) on a non-positive
// innovation variance or a covariance repair failure.
GaussianBelief ukf_update_scan(const GaussianBelief& belief, const MeasurementScan& scan,
                               const NoiseSpec& noise, const UtParams& params);

}  // namespace imtrack
