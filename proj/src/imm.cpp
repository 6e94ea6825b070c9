#include "imtrack/imm.hpp"

#include <cmath>
#include <sstream>

#include "imtrack/errors.hpp"

namespace imtrack {

namespace {

void validate_modes(const ModeSet& modes, std::size_t n_beliefs) {
  const int n = modes.count();
  if (n == 0 || static_cast<std::size_t>(n) != n_beliefs) {
    throw ConfigError("imm: mode count must match the belief count");
  }
  if (modes.transition.rows() != n || modes.transition.cols() != n) {
    throw ConfigError("imm: transition matrix shape must match the mode count");
  }
  if (modes.mu.minCoeff() < 0.0 || std::abs(modes.mu.sum() - 1.0) > 1e-6) {
    throw ConfigError("imm: mode probabilities must be a distribution");
  }
  for (int i = 0; i < n; ++i) {
    if (modes.transition.row(i).minCoeff() < 0.0 ||
        std::abs(modes.transition.row(i).sum() - 1.0) > 1e-6) {
      throw ConfigError("imm: transition rows must be distributions");
    }
  }
}

}  // namespace

GaussianBelief moment_match(std::span<const GaussianBelief> beliefs,
                            const Eigen::VectorXd& weights) {
  if (beliefs.empty() || static_cast<std::size_t>(weights.size()) != beliefs.size()) {
    throw ConfigError("moment_match: weight count must match the belief count");
  }
  GaussianBelief out;
  out.mean = Eigen::VectorXd::Zero(beliefs[0].dim());
  for (std::size_t i = 0; i < beliefs.size(); ++i) out.mean += weights[i] * beliefs[i].mean;
  out.cov = Eigen::MatrixXd::Zero(beliefs[0].dim(), beliefs[0].dim());
  for (std::size_t i = 0; i < beliefs.size(); ++i) {
    const Eigen::VectorXd d = beliefs[i].mean - out.mean;
    out.cov += weights[i] * (beliefs[i].cov + d * d.transpose());
  }
  symmetrize(out.cov);
  return out;
}

MixResult imm_mix(std::span<const GaussianBelief> beliefs, const ModeSet& modes) {
  validate_modes(modes, beliefs.size());
  const int n = modes.count();

  MixResult out;
  out.c_bar = modes.transition.transpose() * modes.mu;
  out.beliefs.reserve(n);
  for (int j = 0; j < n; ++j) {
    if (out.c_bar[j] < 1e-300) {
      std::ostringstream msg;
      msg << "imm_mix: mode " << j << " starved (c_bar = " << out.c_bar[j] << ")";
      throw NumericalError(msg.str());
    }
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = modes.transition(i, j) * modes.mu[i] / out.c_bar[j];
    out.beliefs.push_back(moment_match(beliefs, w));
  }
  return out;
}

LikelihoodReport accumulate_loglik(std::span<const PseudoMeasurementMoments> terms) {
  LikelihoodReport out;
  if (terms.empty()) return out;
  for (const auto& t : terms) {
    if (!(t.variance > 0.0) || !std::isfinite(t.variance)) {
      throw NumericalError("accumulate_loglik: non-positive pseudo-measurement variance");
    }
    out.log_lik += -t.mean * t.mean / (2.0 * t.variance) -
                   0.5 * std::log(2.0 * kPi * t.variance);
  }
  out.avg_lik = std::exp(out.log_lik / static_cast<double>(terms.size()));
  return out;
}

LikelihoodReport model_likelihood(const GaussianBelief& predicted, const MeasurementScan& scan,
                                  const NoiseSpec& noise, const UtParams& params) {
  std::vector<PseudoMeasurementMoments> terms;
  terms.reserve(scan.points.size());
  for (const auto& z : scan.points) {
    terms.push_back(pseudo_measurement_moments(predicted, z, noise, params));
  }
  return accumulate_loglik(terms);
}

Eigen::VectorXd mode_update(const Eigen::VectorXd& c_bar, const Eigen::VectorXd& avg_lik) {
  if (c_bar.size() != avg_lik.size() || c_bar.size() == 0) {
    throw ConfigError("mode_update: c_bar and likelihoods must have equal size");
  }
  Eigen::VectorXd mu = c_bar.cwiseProduct(avg_lik);
  const double total = mu.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericalError("mode_update: all mode likelihoods vanished");
  }
  mu /= total;
  bool floored = false;
  for (int i = 0; i < mu.size(); ++i) {
    if (mu[i] < kModeProbFloor) {
      mu[i] = kModeProbFloor;
      floored = true;
    }
  }
  if (floored) mu /= mu.sum();
  return mu;
}

ImmStepResult imm_step(std::span<const GaussianBelief> beliefs, const ModeSet& modes,
                       std::span<const ModelConfig> models, const MeasurementScan& scan,
                       const NoiseSpec& noise, double T, const UtParams& params) {
  if (models.size() != beliefs.size()) {
    throw ConfigError("imm_step: model count must match the belief count");
  }
  const int n = static_cast<int>(beliefs.size());
  MixResult mixed = imm_mix(beliefs, modes);

  ImmStepResult out;
  out.beliefs.reserve(n);
  out.likelihoods.reserve(n);
  Eigen::VectorXd avg_lik(n);
  for (int j = 0; j < n; ++j) {
    const GaussianBelief pred = predict(mixed.beliefs[j], models[j], T, params);
    const LikelihoodReport lik = model_likelihood(pred, scan, noise, params);
    out.beliefs.push_back(ukf_update_scan(pred, scan, noise, params));
    out.likelihoods.push_back(lik);
    avg_lik[j] = lik.avg_lik;
  }
  out.modes.mu = mode_update(mixed.c_bar, avg_lik);
  out.modes.transition = modes.transition;
  out.combined = moment_match(out.beliefs, out.modes.mu);
  return out;
}

}  // namespace imtrack
