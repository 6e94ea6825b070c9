#include "imtrack/ukf.hpp"

#include <cmath>
#include <sstream>

#include "imtrack/errors.hpp"

namespace imtrack {

namespace {

void validate_params(const UtParams& p, int dim) {
  if (!(p.alpha > 0.0) || p.alpha > 1.0) {
    throw ConfigError("ut params: alpha must lie in (0, 1]");
  }
  if (!(dim + p.lambda(dim) > 0.0)) {
    throw ConfigError("ut params: dim + lambda must be positive");
  }
}

void fill_weights(const UtParams& p, int dim, Eigen::VectorXd& w_mean, Eigen::VectorXd& w_cov) {
  const double lambda = p.lambda(dim);
  const double denom = dim + lambda;
  w_mean.resize(2 * dim + 1);
  w_cov.resize(2 * dim + 1);
  w_mean[0] = lambda / denom;
  w_cov[0] = lambda / denom + (1.0 - p.alpha * p.alpha + p.beta);
  for (int i = 1; i <= 2 * dim; ++i) {
    w_mean[i] = 1.0 / (2.0 * denom);
    w_cov[i] = w_mean[i];
  }
}

SigmaPoints points_from_sqrt(const Eigen::VectorXd& mean, const Eigen::MatrixXd& scaled_sqrt,
                             const UtParams& params) {
  const int dim = static_cast<int>(mean.size());
  SigmaPoints sp;
  sp.points.resize(dim, 2 * dim + 1);
  sp.points.col(0) = mean;
  for (int i = 0; i < dim; ++i) {
    sp.points.col(1 + i) = mean + scaled_sqrt.col(i);
    sp.points.col(1 + dim + i) = mean - scaled_sqrt.col(i);
  }
  fill_weights(params, dim, sp.w_mean, sp.w_cov);
  return sp;
}

Eigen::MatrixXd cholesky_or_throw(const Eigen::MatrixXd& cov, const char* context) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << context << ": covariance factorization failed, matrix =\n" << cov;
    throw NumericalError(msg.str());
  }
  return llt.matrixL();
}

}  // namespace

SigmaPoints sigma_points(const GaussianBelief& belief, const UtParams& params) {
  const int dim = belief.dim();
  validate_params(params, dim);
  const double scale = dim + params.lambda(dim);
  Eigen::MatrixXd root = cholesky_or_throw(scale * belief.cov, "sigma_points");
  return points_from_sqrt(belief.mean, root, params);
}

SigmaPoints augmented_sigma_points(const GaussianBelief& core, const Eigen::VectorXd& extra_mean,
                                   const Eigen::VectorXd& extra_var, const UtParams& params) {
  const int nc = core.dim();
  const int ne = static_cast<int>(extra_mean.size());
  const int dim = nc + ne;
  validate_params(params, dim);

  Eigen::VectorXd mean(dim);
  mean.head(nc) = core.mean;
  mean.tail(ne) = extra_mean;

  const double scale = dim + params.lambda(dim);
  Eigen::MatrixXd root = Eigen::MatrixXd::Zero(dim, dim);
  root.topLeftCorner(nc, nc) =
      cholesky_or_throw(scale * core.cov, "augmented_sigma_points");
  for (int i = 0; i < ne; ++i) {
    if (extra_var[i] < 0.0) {
      throw NumericalError("augmented_sigma_points: negative augmented variance");
    }
    root(nc + i, nc + i) = std::sqrt(scale * extra_var[i]);
  }
  return points_from_sqrt(mean, root, params);
}

UtResult unscented_transform(const GaussianBelief& belief, const UtParams& params,
                             const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn) {
  SigmaPoints sp = sigma_points(belief, params);
  const int n = sp.count();

  Eigen::MatrixXd out(fn(sp.points.col(0)).size(), n);
  out.col(0) = fn(sp.points.col(0));
  for (int i = 1; i < n; ++i) out.col(i) = fn(sp.points.col(i));

  UtResult r;
  r.belief.mean = out * sp.w_mean;
  r.belief.cov = Eigen::MatrixXd::Zero(out.rows(), out.rows());
  r.cross_cov = Eigen::MatrixXd::Zero(belief.dim(), out.rows());
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd dy = out.col(i) - r.belief.mean;
    r.belief.cov += sp.w_cov[i] * dy * dy.transpose();
    r.cross_cov += sp.w_cov[i] * (sp.points.col(i) - belief.mean) * dy.transpose();
  }
  condition_covariance(r.belief.cov, "unscented_transform");
  return r;
}

void symmetrize(Eigen::MatrixXd& cov) {
  cov = ((cov + cov.transpose()) * 0.5).eval();
}

void condition_covariance(Eigen::MatrixXd& cov, const char* context) {
  symmetrize(cov);
  if (Eigen::LLT<Eigen::MatrixXd>(cov).info() == Eigen::Success) return;

  const double trace = cov.trace();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin > 0.0) return;  // factorization was merely borderline
  if (lmin <= -1e-9 * trace) {
    std::ostringstream msg;
    msg << context << ": covariance indefinite (min eigenvalue " << lmin << ", trace " << trace
        << ")";
    throw NumericalError(msg.str());
  }
  cov += 1e-12 * trace * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
  if (Eigen::LLT<Eigen::MatrixXd>(cov).info() != Eigen::Success) {
    std::ostringstream msg;
    msg << context << ": covariance repair failed (min eigenvalue " << lmin << ")";
    throw NumericalError(msg.str());
  }
}

PseudoMeasurementMoments pseudo_measurement_moments(const GaussianBelief& belief,
                                                    const Eigen::Vector2d& z,
                                                    const FMoments& f_moments,
                                                    const UtParams& params) {
  const int nx = belief.dim();
  Eigen::Vector2d extra_mean(f_moments.mean, ScaleDistribution::kMean);
  Eigen::Vector2d extra_var(f_moments.variance, ScaleDistribution::kVariance);
  SigmaPoints sp = augmented_sigma_points(belief, extra_mean, extra_var, params);

  const int n = sp.count();
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    const auto& x = sp.points.col(i);
    // The augmented scalar is the squared boundary scale s^2; it enters the
    // pseudo-measurement linearly with the moments carried by
    // ScaleDistribution (mean 2/3, variance 1/18).  See the note there for
    // why those are not the raw U(0,1) moments.
    const double s2 = x[nx + 1];
    v[i] = detail::implicit_value_raw(z.x() - x[kXc], z.y() - x[kYc], x[kN11], x[kN20], x[kN02]) -
           x[nx] - s2;
  }

  PseudoMeasurementMoments out;
  out.mean = v.dot(sp.w_mean);
  out.variance = 0.0;
  out.state_cross = Eigen::VectorXd::Zero(nx);
  for (int i = 0; i < n; ++i) {
    const double dv = v[i] - out.mean;
    out.variance += sp.w_cov[i] * dv * dv;
    out.state_cross += sp.w_cov[i] * dv * (sp.points.col(i).head(nx) - belief.mean);
  }
  return out;
}

PseudoMeasurementMoments pseudo_measurement_moments(const GaussianBelief& belief,
                                                    const Eigen::Vector2d& z,
                                                    const NoiseSpec& noise,
                                                    const UtParams& params) {
  const ExtendedState mean_state = ExtendedState::from_vec(belief.mean);
  return pseudo_measurement_moments(belief, z, noise_poly_moments(z, mean_state, noise), params);
}

GaussianBelief ukf_update_scan(const GaussianBelief& belief, const MeasurementScan& scan,
                               const NoiseSpec& noise, const UtParams& params) {
  if (belief.dim() != kStateDim) {
    throw ConfigError("ukf_update_scan: belief dimension must match the extended state");
  }
  // The noise polynomial is moment-matched once at the scan's predicted state;
  // the running belief only feeds the augmented sigma points.  Re-matching f
  // at the running belief per point creates a feedback loop at high noise:
  // the noise mean scales with 1/det(N), so an extent that starts absorbing
  // noise lowers the subtracted noise mean, which feeds further growth.
  const ExtendedState predicted_state = ExtendedState::from_vec(belief.mean);
  GaussianBelief b = belief;
  for (std::size_t l = 0; l < scan.points.size(); ++l) {
    const FMoments fm = noise_poly_moments(scan.points[l], predicted_state, noise);
    const PseudoMeasurementMoments pm = pseudo_measurement_moments(b, scan.points[l], fm, params);
    if (!(pm.variance > 0.0) || !std::isfinite(pm.variance)) {
      std::ostringstream msg;
      msg << "ukf_update_scan: non-positive innovation variance " << pm.variance << " at point "
          << l;
      throw NumericalError(msg.str());
    }
    const Eigen::VectorXd gain = pm.state_cross / pm.variance;
    b.mean += gain * (0.0 - pm.mean);
    b.cov -= pm.state_cross * pm.state_cross.transpose() / pm.variance;
    // The linearized step can overshoot the extent; keep the mean estimable.
    const MomentVector projected =
        project_to_cone({b.mean[kN11], b.mean[kN20], b.mean[kN02]});
    b.mean[kN11] = projected.n11;
    b.mean[kN20] = projected.n20;
    b.mean[kN02] = projected.n02;
    try {
      condition_covariance(b.cov, "ukf_update_scan");
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << e.what() << " (point " << l << ")";
      throw NumericalError(msg.str());
    }
  }
  return b;
}

}  // namespace imtrack
