#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "quatcomp/channel_weight.hpp"
#include "quatcomp/quaternion.hpp"

namespace quatcomp {

// Per-entry feasible set of both completion programs:
//   F = { q pure : q_i, q_j, q_k >= 0, |q|_w <= alpha }.

/// Exact Euclidean projection onto F. Closed form (clamp, then radial scale)
/// when W = I; otherwise the exact active-set solver below.
Quaterniond project_feasible(const Quaterniond& v, double alpha, const ChannelWeight& w);

struct DykstraResult {
  Quaterniond point;
  int sweeps = 0;
  bool converged = false;
};

/// Dykstra alternation between the orthant and the ellipsoid |q|_w <= alpha.
/// Stops when successive iterates move less than `tol`; returns the last
/// iterate with converged = false after `max_sweeps`.
DykstraResult project_feasible_dykstra(const Quaterniond& v, double alpha, const ChannelWeight& w,
                                       int max_sweeps = 200, double tol = 1e-12);

/// Euclidean projection onto the ellipsoid { x : x^T W x <= alpha^2 }.
Eigen::Vector3d project_ellipsoid(const Eigen::Vector3d& v, double alpha, const ChannelWeight& w);

/// argmin 1/2 x^T H x - g^T x over F, for symmetric positive definite H.
///
/// Tries the unconstrained minimizer, then the orthant faces, then the faces
/// with the ellipsoid active (multiplier found by safeguarded bisection).
/// Among feasible candidates the lowest objective is the optimum.
Eigen::Vector3d solve_entry_qp(const Eigen::Matrix3d& hessian, const Eigen::Vector3d& linear,
                               const ChannelWeight& w, double alpha);

/// Theta-update of the corrupted-model ADMM at one entry:
///   argmin (1/2n) sum_k |Y_k - q|_w^2 + (mu/2) |q - v|^2  over F,
/// with `values` the observations at this entry and n the total sample count.
Quaterniond entry_qp(std::span<const Quaterniond> values, std::size_t n_total,
                     const ChannelWeight& w, double mu, const Quaterniond& v, double alpha);

/// Value of the entry_qp objective (without the constant).
double entry_qp_objective(std::span<const Quaterniond> values, std::size_t n_total,
                          const ChannelWeight& w, double mu, const Quaterniond& v,
                          const Quaterniond& q);

/// Hessian and linear term of the entry objective: share = m / n, mean of the
/// m observed values.
void entry_qp_terms(double share, const Eigen::Vector3d& mean, const ChannelWeight& w, double mu,
                    const Eigen::Vector3d& v, Eigen::Matrix3d& hessian, Eigen::Vector3d& linear);

/// KKT residual of x for min 1/2 x^T H x - g^T x over F: stationarity with
/// best-fit nonnegative multipliers plus primal infeasibility, relative to
/// max(1, |g|).
double kkt_residual(const Eigen::Vector3d& x, const Eigen::Matrix3d& hessian,
                    const Eigen::Vector3d& linear, const ChannelWeight& w, double alpha);

}  // namespace quatcomp
