#pragma once

#include <limits>

#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

struct ErrorMetrics {
  double mse = 0;
  double rse = 0;
  double psnr = std::numeric_limits<double>::infinity();
};

/// mse = ||D||_F^2 / (d1 d2), rse = ||D||_F^2 / ||truth||_F^2 and
/// psnr = 10 log10(255^2 / (||D||_F^2 / (3 d1 d2))), D = estimate - truth.
/// Exact recovery gives psnr = +inf.
ErrorMetrics error_metrics(const QMatrixd& estimate, const QMatrixd& truth);

/// Mean squared error per real channel sample for a given PSNR (inverse of the
/// psnr formula).
double mse_from_psnr(double psnr);

/// sqrt(d1 d2) ||theta||_inf / ||theta||_F, in [1, sqrt(d1 d2)].
double spikiness(const QMatrixd& theta);

/// sum_i sigma_i^q for q in (0, 1); q = 0 gives the numerical rank.
double schatten_q(const QMatrixd& theta, double q);

/// Rescaled sample size n / ((rho d^{-q})^{2/(2-q)} d log 2d). For q = 0 and
/// rho = r this is n / (r d log 2d); for q = 1/2 it is n / (rho^{4/3} d^{1/3} log 2d).
double rescaled_n(double n, double d, double r_or_rho, double q);

/// c / n_re^{1 - q/2}.
double bound_curve(double n_re, double c, double q = 0.0);

/// ||D||_nuc <= c rho^{1/(2-q)} ||D||_F^{(2-2q)/(2-q)}: returns the ratio of
/// the left side to the right side (<= 1 when the condition holds).
double cone_ratio(double nuclear, double fro, double rho, double q, double c);

}  // namespace quatcomp
