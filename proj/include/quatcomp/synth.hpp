#pragma once

#include <cstdint>

#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

/// Random d1 x d2 non-negative pure quaternion matrix of rank r (generically).
///
/// A rank r-1 product L R with zero real part is built from uniform factors and
/// a null-space basis, then every imaginary channel is shifted by the floor of
/// its minimum (a rank-1 lift) so all components become nonnegative.
/// Requires 2 <= r <= min(d1, d2).
QMatrixd gen_exact(Eigen::Index d1, Eigen::Index d2, Eigen::Index r, std::uint64_t seed);

struct ApproxLowRank {
  QMatrixd base;          ///< gen_exact(d1, d2, r, seed)
  QMatrixd perturbation;  ///< 0.1 tau (Q1 i + Q2 j + Q3 k), tau = min component of base
  QMatrixd theta;         ///< base - perturbation
};

ApproxLowRank gen_approx_parts(Eigen::Index d1, Eigen::Index d2, Eigen::Index r,
                               std::uint64_t seed);

/// Full-rank matrix with r dominant singular values; nonnegative and pure.
inline QMatrixd gen_approx(Eigen::Index d1, Eigen::Index d2, Eigen::Index r, std::uint64_t seed) {
  return gen_approx_parts(d1, d2, r, seed).theta;
}

/// Scales the first `lines` rows and columns by `factor` >= 1. Row and column
/// scalings by positive reals keep rank, purity and nonnegativity while raising
/// the spikiness.
QMatrixd boost_spikiness(const QMatrixd& theta, double factor, Eigen::Index lines = 1);

}  // namespace quatcomp
