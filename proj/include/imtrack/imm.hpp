#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "imtrack/dynamics.hpp"
#include "imtrack/ukf.hpp"

namespace imtrack {

// Mode probabilities never drop below this floor (renormalized afterwards).
inline constexpr double kModeProbFloor = 1e-6;

//! Mode probabilities plus the row-stochastic transition matrix p_ij
//! (from mode i to mode j).
struct ModeSet {
  Eigen::VectorXd mu;
  Eigen::MatrixXd transition;

  int count() const { return static_cast<int>(mu.size()); }
};

//! Scan likelihood of one model: the per-point log sum and its
//! scan-size-normalized geometric mean avg_lik = exp(log_lik / n).
struct LikelihoodReport {
  double log_lik = 0.0;
  double avg_lik = 1.0;
};

//! Interaction output: per-mode mixed beliefs and the predicted mode
//! probabilities c_bar.
struct MixResult {
  std::vector<GaussianBelief> beliefs;
  Eigen::VectorXd c_bar;
};

// Moment-matched Gaussian mixture: mean = sum w_i m_i,
// cov = sum w_i (C_i + d_i d_i^T).
GaussianBelief moment_match(std::span<const GaussianBelief> beliefs,
                            const Eigen::VectorXd& weights);

// IMM interaction step: mixing weights mu_i|j = p_ij mu_i / c_bar_j with
// c_bar_j = sum_i p_ij mu_i. Throws NumericalError when a mode starves
// (c_bar_j < 1e-300).
MixResult imm_mix(std::span<const GaussianBelief> beliefs, const ModeSet& modes);

// Scan log-likelihood terms from per-point pseudo-measurement moments:
// log_lik = sum_l (-mu_l^2 / (2 var_l) - log sqrt(2 pi var_l)). An empty scan
// reports {0, 1}.
LikelihoodReport accumulate_loglik(std::span<const PseudoMeasurementMoments> terms);

// Per-point pseudo-measurement likelihood of the scan under the predicted
// (pre-update) belief; the belief itself is not modified.
LikelihoodReport model_likelihood(const GaussianBelief& predicted, const MeasurementScan& scan,
                                  const NoiseSpec& noise, const UtParams& params);

// Mode probability update mu_j proportional to avg_lik_j * c_bar_j, floored
// at kModeProbFloor and renormalized.
Eigen::VectorXd mode_update(const Eigen::VectorXd& c_bar, const Eigen::VectorXd& avg_lik);

//! Full cycle output: per-mode posterior beliefs, updated mode set, the
//! moment-matched combined estimate, and the per-mode likelihood reports.
struct ImmStepResult {
  std::vector<GaussianBelief> beliefs;
  ModeSet modes;
  GaussianBelief combined;
  std::vector<LikelihoodReport> likelihoods;
};

// One IMM cycle: mix, per-model predict over T, per-model scan likelihood on
// the predicted belief, per-model sequential update, mode update, combine.
ImmStepResult imm_step(std::span<const GaussianBelief> beliefs, const ModeSet& modes,
                       std::span<const ModelConfig> models, const MeasurementScan& scan,
                       const NoiseSpec& noise, double T, const UtParams& params);

}  // namespace imtrack
