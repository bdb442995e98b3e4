#include "quatcomp/weights.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "quatcomp/errors.hpp"

namespace quatcomp {

NoiseCovariance::NoiseCovariance(const Eigen::Matrix3d& sigma) {
  if (!sigma.allFinite()) throw DomainError("NoiseCovariance: non-finite entry");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("NoiseCovariance: matrix is not symmetric");
  }
  sigma_ = 0.5 * (sigma + sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(sigma_, Eigen::EigenvaluesOnly);
  eig_min_ = es.eigenvalues().minCoeff();
  eig_max_ = es.eigenvalues().maxCoeff();
  if (!(eig_min_ > 0)) {
    std::ostringstream os;
    os << "NoiseCovariance: not positive definite (min eigenvalue " << eig_min_ << ")";
    throw DomainError(os.str());
  }
  Eigen::LLT<Eigen::Matrix3d> llt(sigma_);
  if (llt.info() != Eigen::Success) throw DomainError("NoiseCovariance: Cholesky failed");
  chol_ = llt.matrixL();
  inverse_ = llt.solve(Eigen::Matrix3d::Identity());
  inverse_ = 0.5 * (inverse_ + inverse_.transpose()).eval();
}

NoiseCovariance NoiseCovariance::diagonal(double var_r, double var_g, double var_b) {
  return NoiseCovariance(Eigen::Vector3d(var_r, var_g, var_b).asDiagonal().toDenseMatrix());
}

NoiseCovariance NoiseCovariance::packed(const double (&u)[6]) {
  Eigen::Matrix3d s;
  s << u[0], u[1], u[2],
       u[1], u[3], u[4],
       u[2], u[4], u[5];
  return NoiseCovariance(s);
}

ChannelWeight ws_rebalance(const Eigen::Vector3d& variances) {
  if (!(variances.array() > 0).all() || !variances.allFinite()) {
    throw DomainError("ws_rebalance: variances must be positive and finite");
  }
  const Eigen::Vector3d precision = variances.cwiseInverse();
  Eigen::Matrix3d w = (3.0 * precision / precision.sum()).asDiagonal();
  // Pin the trace to 3 against rounding in the three quotients.
  w(2, 2) = 3.0 - w(0, 0) - w(1, 1);
  return ChannelWeight(w);
}

ChannelWeight wc_decorrelate(const NoiseCovariance& sigma) {
  if (sigma.condition_number() > 1e12) {
    std::ostringstream os;
    os << "wc_decorrelate: covariance condition number " << sigma.condition_number()
       << " exceeds 1e12";
    throw IllConditionedError(os.str());
  }
  const Eigen::Matrix3d& inv = sigma.inverse();
  return ChannelWeight(3.0 * inv / inv.trace());
}

ChannelWeight combine(double gamma1, double gamma2, const ChannelWeight& ws,
                      const ChannelWeight& wc) {
  if (!(gamma1 >= 0) || !(gamma2 >= 0) || !(gamma1 + gamma2 <= 1.0 + 1e-12)) {
    std::ostringstream os;
    os << "combine: (gamma1, gamma2) = (" << gamma1 << ", " << gamma2
       << ") is outside the simplex";
    throw DomainError(os.str());
  }
  const double g0 = std::max(0.0, 1.0 - gamma1 - gamma2);
  const Eigen::Matrix3d w =
      g0 * Eigen::Matrix3d::Identity() + gamma1 * ws.matrix() + gamma2 * wc.matrix();
  return ChannelWeight(w);
}

double weighted_noise_trace(const ChannelWeight& w, const NoiseCovariance& sigma) {
  return (w.matrix() * sigma.matrix() * w.matrix()).trace();
}

double lambda_rule(const ChannelWeight& w, const NoiseCovariance& sigma, std::size_t n,
                   std::size_t d1, std::size_t d2, double c_lambda) {
  if (n == 0 || d1 == 0 || d2 == 0) throw DomainError("lambda_rule: n, d1, d2 must be >= 1");
  if (!(c_lambda > 0)) throw DomainError("lambda_rule: c_lambda must be positive");
  const double dmin = static_cast<double>(std::min(d1, d2));
  return c_lambda * std::sqrt(weighted_noise_trace(w, sigma) *
                              std::log(static_cast<double>(d1 + d2)) /
                              (static_cast<double>(n) * dmin));
}

BoundFactors bound_factors(const ChannelWeight& w, const NoiseCovariance& sigma) {
  const double lmin = w.min_eigenvalue();
  return {w.max_entry() / (lmin * lmin * lmin), weighted_noise_trace(w, sigma) / (lmin * lmin)};
}

}  // namespace quatcomp
