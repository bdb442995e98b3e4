#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "quatcomp/channel_weight.hpp"
#include "quatcomp/observation.hpp"
#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

inline const double kPixelAlpha = 255.0 * std::sqrt(3.0);

struct SolverConfig {
  double mu = 1.0;
  bool mu_adapt = true;
  double tol_rel = 1e-7;
  int max_iter = 1000;
  double alpha = kPixelAlpha;
  double lambda = 0.0;
  ChannelWeight weight = ChannelWeight::identity();

  void validate() const;
};

struct CompletionResult {
  QMatrixd theta_hat;
  int iterations = 0;
  std::vector<double> primal_residuals;  ///< ||Theta - Z||_F per iteration
  std::vector<double> dual_residuals;    ///< mu ||Z - Z_prev||_F per iteration
  std::vector<double> objective_history;
  bool converged = false;
  double final_mu = 0.0;
  /// Share of entries sitting on the (weighted) max-norm bound.
  double binding_fraction = 0.0;
  std::vector<std::string> warnings;
};

/// min ||Theta||_nuc over pixel matrices with ||Theta||_inf <= alpha that
/// match every observation exactly. Ignores config.lambda and config.weight.
CompletionResult complete_clean(const ObservationSet& obs, const SolverConfig& config);

/// min L_w(Theta) + lambda ||Theta||_nuc over pixel matrices with
/// ||Theta||_{w,inf} <= alpha, where L_w(Theta) = (1/2n) sum_k |Y_k - Theta(X_k)|_w^2.
CompletionResult complete_noisy(const ObservationSet& obs, const SolverConfig& config);

/// L_w(theta) for the observation set (0 when it is empty).
double weighted_loss(const ObservationSet& obs, const QMatrixd& theta, const ChannelWeight& w);

}  // namespace quatcomp
