#pragma once

#include <Eigen/Core>

#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

/// Cross-channel weight: a symmetric positive definite 3x3 matrix with trace 3.
///
/// Acts on the imaginary 3-vector of pure quaternions. The square root,
/// extreme eigenvalues and largest absolute entry are computed once at
/// construction.
class ChannelWeight {
 public:
  static constexpr double kTraceTolerance = 1e-12;

  /// Throws DomainError unless w is symmetric, positive definite and has trace 3.
  explicit ChannelWeight(const Eigen::Matrix3d& w);

  static ChannelWeight identity() { return ChannelWeight(Eigen::Matrix3d::Identity()); }

  const Eigen::Matrix3d& matrix() const { return w_; }
  const Eigen::Matrix3d& sqrt() const { return sqrt_w_; }
  double min_eigenvalue() const { return eig_min_; }
  double max_eigenvalue() const { return eig_max_; }
  /// Largest absolute entry, ||W||_inf.
  double max_entry() const { return max_entry_; }
  bool is_identity() const { return is_identity_; }

  /// |q|_w = sqrt(q^T W q) for the imaginary part of a pure quaternion.
  double magnitude(const Eigen::Vector3d& q) const { return std::sqrt(q.dot(w_ * q)); }

 private:
  Eigen::Matrix3d w_;
  Eigen::Matrix3d sqrt_w_;
  double eig_min_ = 1;
  double eig_max_ = 1;
  double max_entry_ = 1;
  bool is_identity_ = true;
};

enum class WeightForm { full, sqrt };

/// W A (or sqrt(W) A) applied entrywise; A must be pure.
QMatrixd apply_weight(const ChannelWeight& w, const QMatrixd& a, WeightForm form = WeightForm::full);

/// ||A||_{w,F} = ||sqrt(W) A||_F.
double weighted_fro_norm(const QMatrixd& a, const ChannelWeight& w);
/// ||A||_{w,inf} = ||sqrt(W) A||_inf, evaluated as max sqrt(a^T W a).
double weighted_max_norm(const QMatrixd& a, const ChannelWeight& w);

/// All non-spectral norms of one matrix. Weighted entries are set only when a
/// weight was supplied.
struct Norms {
  double fro = 0;
  double max = 0;
  double two_inf = 0;
  double w_fro = 0;
  double w_max = 0;
  bool weighted = false;
};

Norms norms(const QMatrixd& a);
Norms norms(const QMatrixd& a, const ChannelWeight& w);

}  // namespace quatcomp
