#include "quatcomp/metrics.hpp"

#include <cmath>

#include "quatcomp/errors.hpp"
#include "quatcomp/qsvd.hpp"

namespace quatcomp {

namespace {
constexpr double kPeak = 255.0;
}

ErrorMetrics error_metrics(const QMatrixd& estimate, const QMatrixd& truth) {
  QMatrixd::check_same_shape(estimate, truth, "error_metrics");
  const double err = (estimate - truth).squared_norm();
  const double cells = static_cast<double>(truth.size());
  ErrorMetrics out;
  out.mse = err / cells;
  const double truth_norm = truth.squared_norm();
  out.rse = truth_norm > 0 ? err / truth_norm : (err == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  out.psnr = err == 0 ? std::numeric_limits<double>::infinity()
                      : 10.0 * std::log10(kPeak * kPeak * 3.0 * cells / err);
  return out;
}

double mse_from_psnr(double psnr) { return kPeak * kPeak / std::pow(10.0, psnr / 10.0); }

double spikiness(const QMatrixd& theta) {
  const double fro = fro_norm(theta);
  if (!(fro > 0)) throw DomainError("spikiness: zero matrix");
  return std::sqrt(static_cast<double>(theta.size())) * max_norm(theta) / fro;
}

double schatten_q(const QMatrixd& theta, double q) {
  if (!(q >= 0 && q < 1)) throw DomainError("schatten_q: q must lie in [0, 1)");
  const RealVector<double> sigma = singular_values(theta);
  if (q == 0) return static_cast<double>(numerical_rank(sigma, theta.rows(), theta.cols()));
  return sigma.array().pow(q).sum();
}

double rescaled_n(double n, double d, double r_or_rho, double q) {
  if (!(n >= 0 && d > 0 && r_or_rho > 0)) throw DomainError("rescaled_n: n, d, r must be positive");
  const double effective = std::pow(r_or_rho * std::pow(d, -q), 2.0 / (2.0 - q));
  return n / (effective * d * std::log(2.0 * d));
}

double bound_curve(double n_re, double c, double q) { return c / std::pow(n_re, 1.0 - q / 2.0); }

double cone_ratio(double nuclear, double fro, double rho, double q, double c) {
  const double rhs = c * std::pow(rho, 1.0 / (2.0 - q)) * std::pow(fro, (2.0 - 2.0 * q) / (2.0 - q));
  if (rhs == 0) return nuclear == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return nuclear / rhs;
}

}  // namespace quatcomp
