#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "quatcomp/channel_weight.hpp"

namespace quatcomp {

/// Covariance of the (i, j, k) noise components, in squared gray levels.
class NoiseCovariance {
 public:
  /// Throws DomainError unless sigma is symmetric (1e-12) with positive eigenvalues.
  explicit NoiseCovariance(const Eigen::Matrix3d& sigma);

  static NoiseCovariance diagonal(double var_r, double var_g, double var_b);
  /// From the packed upper triangle (s11, s12, s13, s22, s23, s33).
  static NoiseCovariance packed(const double (&upper)[6]);

  const Eigen::Matrix3d& matrix() const { return sigma_; }
  const Eigen::Matrix3d& inverse() const { return inverse_; }
  /// Lower Cholesky factor L with L L^T = Sigma.
  const Eigen::Matrix3d& cholesky() const { return chol_; }
  double condition_number() const { return eig_max_ / eig_min_; }
  Eigen::Vector3d variances() const { return sigma_.diagonal(); }

  NoiseCovariance scaled(double factor) const { return NoiseCovariance(sigma_ * factor); }

 private:
  Eigen::Matrix3d sigma_;
  Eigen::Matrix3d inverse_;
  Eigen::Matrix3d chol_;
  double eig_min_ = 1;
  double eig_max_ = 1;
};

/// W_s = 3 diag(1/var) / sum(1/var): the diagonal trace-3 weight minimizing
/// Tr(W Sigma W) for the given channel variances.
ChannelWeight ws_rebalance(const Eigen::Vector3d& variances);
inline ChannelWeight ws_rebalance(const NoiseCovariance& sigma) {
  return ws_rebalance(sigma.variances());
}

/// W_c = 3 Sigma^{-1} / Tr(Sigma^{-1}), the unique trace-3 minimizer of
/// Tr(W Sigma W). Throws IllConditionedError when cond(Sigma) > 1e12.
ChannelWeight wc_decorrelate(const NoiseCovariance& sigma);

/// (1 - g1 - g2) I + g1 W_s + g2 W_c for g1, g2 >= 0 and g1 + g2 <= 1.
ChannelWeight combine(double gamma1, double gamma2, const ChannelWeight& ws,
                      const ChannelWeight& wc);

/// Tr(W Sigma W).
double weighted_noise_trace(const ChannelWeight& w, const NoiseCovariance& sigma);

/// c * sqrt(Tr(W Sigma W) log(d1 + d2) / (n min(d1, d2))).
double lambda_rule(const ChannelWeight& w, const NoiseCovariance& sigma, std::size_t n,
                   std::size_t d1, std::size_t d2, double c_lambda);

/// The weight-dependent factors of the corrupted-model error bound.
struct BoundFactors {
  double f1 = 0;  ///< ||W||_inf / lambda_min(W)^3
  double f2 = 0;  ///< Tr(W Sigma W) / lambda_min(W)^2
};

BoundFactors bound_factors(const ChannelWeight& w, const NoiseCovariance& sigma);

}  // namespace quatcomp
