#include "quatcomp/channel_weight.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace quatcomp {

ChannelWeight::ChannelWeight(const Eigen::Matrix3d& w) : w_(w) {
  if (!w.allFinite()) throw DomainError("ChannelWeight: non-finite entry");
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("ChannelWeight: matrix is not symmetric");
  }
  if (std::abs(w.trace() - 3.0) > kTraceTolerance * 3.0) {
    std::ostringstream os;
    os << "ChannelWeight: trace " << w.trace() << " differs from 3";
    throw DomainError(os.str());
  }
  w_ = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(w_);
  eig_min_ = es.eigenvalues().minCoeff();
  eig_max_ = es.eigenvalues().maxCoeff();
  if (!(eig_min_ > 0)) {
    std::ostringstream os;
    os << "ChannelWeight: not positive definite (min eigenvalue " << eig_min_ << ")";
    throw DomainError(os.str());
  }
  sqrt_w_ = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
            es.eigenvectors().transpose();
  sqrt_w_ = 0.5 * (sqrt_w_ + sqrt_w_.transpose()).eval();
  max_entry_ = w_.cwiseAbs().maxCoeff();
  is_identity_ = (w_ == Eigen::Matrix3d::Identity());
  if (is_identity_) sqrt_w_.setIdentity();
}

QMatrixd apply_weight(const ChannelWeight& w, const QMatrixd& a, WeightForm form) {
  return apply_weight<double>(form == WeightForm::full ? w.matrix() : w.sqrt(), a);
}

namespace {

// Per-entry q^T W q as a plane.
Eigen::ArrayXXd weighted_squares(const QMatrixd& a, const ChannelWeight& w) {
  require_pure(a, "weighted norm");
  const Eigen::Matrix3d& m = w.matrix();
  const auto x = a.im_i().array();
  const auto y = a.im_j().array();
  const auto z = a.im_k().array();
  return m(0, 0) * x.square() + m(1, 1) * y.square() + m(2, 2) * z.square() +
         2.0 * (m(0, 1) * x * y + m(0, 2) * x * z + m(1, 2) * y * z);
}

}  // namespace

double weighted_fro_norm(const QMatrixd& a, const ChannelWeight& w) {
  return fro_norm(apply_weight(w, a, WeightForm::sqrt));
}

double weighted_max_norm(const QMatrixd& a, const ChannelWeight& w) {
  if (a.size() == 0) return 0;
  return std::sqrt(std::max(0.0, weighted_squares(a, w).maxCoeff()));
}

Norms norms(const QMatrixd& a) {
  Norms n;
  n.fro = fro_norm(a);
  n.max = max_norm(a);
  n.two_inf = two_inf_norm(a);
  return n;
}

Norms norms(const QMatrixd& a, const ChannelWeight& w) {
  Norms n = norms(a);
  n.w_fro = weighted_fro_norm(a, w);
  n.w_max = weighted_max_norm(a, w);
  n.weighted = true;
  return n;
}

}  // namespace quatcomp
