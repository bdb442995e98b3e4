#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "quatcomp/adjoint.hpp"
#include "quatcomp/errors.hpp"
#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A = U diag(sigma) V* with quaternion-unitary U (d1 x d1), V (d2 x d2) and
/// sigma of length min(d1, d2), descending.
template <typename Scalar>
struct Qsvd {
  QMatrix<Scalar> U;
  RealVector<Scalar> sigma;
  QMatrix<Scalar> V;
};

template <typename Scalar>
struct SpectralNorms {
  Scalar nuclear = 0;
  Scalar op = 0;
};

template <typename Scalar>
struct SvtResult {
  QMatrix<Scalar> matrix;
  /// Nuclear norm of `matrix` (sum of the shrunk singular values).
  Scalar nuclear_norm = 0;
  Eigen::Index rank = 0;
};

namespace detail {

/// Complex SVD of an adjoint. Eigen 3.4.0's BDCSVD can return non-finite
/// factors for strongly rank-deficient inputs while reporting success, so a
/// non-finite result is recomputed with JacobiSVD.
template <typename Scalar>
class ComplexSvd {
 public:
  using Matrix = ComplexPlane<Scalar>;

  explicit ComplexSvd(const Matrix& m, unsigned options = 0) {
    Eigen::BDCSVD<Matrix> fast(m, options);
    if (fast.info() == Eigen::Success && take(fast, options)) return;
    Eigen::JacobiSVD<Matrix> slow(m, options);
    if (slow.info() != Eigen::Success || !take(slow, options)) {
      throw NumericalError("qsvd: complex SVD of the " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + " adjoint did not converge");
    }
  }

  const RealVector<Scalar>& singularValues() const { return s_; }
  const Matrix& matrixU() const { return u_; }
  const Matrix& matrixV() const { return v_; }

 private:
  template <typename Svd>
  bool take(const Svd& svd, unsigned options) {
    s_ = svd.singularValues();
    if (!s_.allFinite()) return false;
    if (options & (Eigen::ComputeFullU | Eigen::ComputeThinU)) {
      u_ = svd.matrixU();
      if (!u_.allFinite()) return false;
    }
    if (options & (Eigen::ComputeFullV | Eigen::ComputeThinV)) {
      v_ = svd.matrixV();
      if (!v_.allFinite()) return false;
    }
    return true;
  }

  RealVector<Scalar> s_;
  Matrix u_;
  Matrix v_;
};

/// Averages each adjacent pair of the 2p descending adjoint singular values.
template <typename Scalar>
RealVector<Scalar> pair_average(const RealVector<Scalar>& s) {
  const Eigen::Index p = s.size() / 2;
  RealVector<Scalar> out(p);
  for (Eigen::Index k = 0; k < p; ++k) out(k) = Scalar(0.5) * (s(2 * k) + s(2 * k + 1));
  return out;
}

/// J conj(c) for one 2n-column; spans the same quaternion line as c.
template <typename Scalar>
ComplexColumn<Scalar> j_conj(const ComplexColumn<Scalar>& c) {
  const Eigen::Index n = c.size() / 2;
  ComplexColumn<Scalar> out(c.size());
  out.head(n) = c.tail(n).conjugate();
  out.tail(n) = -c.head(n).conjugate();
  return out;
}

/// Quaternion Gram-Schmidt carried out on adjoint first columns. Each accepted
/// vector b contributes the complex pair {b, J conj(b)} to the span.
template <typename Scalar>
class QuaternionBasis {
 public:
  QuaternionBasis(Eigen::Index dim, Eigen::Index capacity)
      : complex_span_(2 * dim, 2 * capacity), accepted_(2 * dim, capacity) {}

  Eigen::Index size() const { return count_; }
  Eigen::Index capacity() const { return accepted_.cols(); }
  bool full() const { return count_ == capacity(); }

  /// Orthogonalizes c against the span (two passes) and keeps it when the
  /// remaining norm is at least `keep` times the input norm.
  bool try_add(ComplexColumn<Scalar> c, Scalar keep) {
    if (full()) return false;
    const Scalar before = c.norm();
    if (before == 0) return false;
    for (int pass = 0; pass < 2; ++pass) {
      if (count_ > 0) {
        const auto span = complex_span_.leftCols(2 * count_);
        c -= span * (span.adjoint() * c);
      }
    }
    const Scalar after = c.norm();
    if (!(after >= keep * before)) return false;
    c /= after;
    complex_span_.col(2 * count_) = c;
    complex_span_.col(2 * count_ + 1) = j_conj<Scalar>(c);
    accepted_.col(count_) = c;
    ++count_;
    return true;
  }

  /// Accepted vectors as the columns of a quaternion matrix.
  QMatrix<Scalar> to_quaternion() const {
    const Eigen::Index n = accepted_.rows() / 2;
    using Plane = typename QMatrix<Scalar>::Plane;
    const auto top = accepted_.topRows(n);
    const auto bottom = accepted_.bottomRows(n);
    Plane re = top.real();
    Plane im_i = top.imag();
    Plane im_j = -bottom.real();
    Plane im_k = bottom.imag();
    return QMatrix<Scalar>(std::move(re), std::move(im_i), std::move(im_j), std::move(im_k));
  }

 private:
  ComplexPlane<Scalar> complex_span_;
  ComplexPlane<Scalar> accepted_;
  Eigen::Index count_ = 0;
};

}  // namespace detail

/// Raw singular values of [A]_C (2 min(d1, d2) values, descending). They occur
/// in equal pairs up to rounding.
template <typename Scalar>
RealVector<Scalar> adjoint_singular_values(const QMatrix<Scalar>& a) {
  const auto m = to_adjoint(a).matrix();
  if (m.size() == 0) return RealVector<Scalar>(0);
  detail::ComplexSvd<Scalar> svd(m);
  return svd.singularValues();
}

/// Quaternion singular values sigma_1 >= ... >= sigma_min(d1,d2) >= 0.
template <typename Scalar>
RealVector<Scalar> singular_values(const QMatrix<Scalar>& a) {
  return detail::pair_average<Scalar>(adjoint_singular_values(a));
}

/// Full quaternion SVD through the complex adjoint.
///
/// The adjoint's singular values are paired and averaged. V is assembled by
/// quaternion Gram-Schmidt over the adjoint's right singular vectors, which
/// picks one member of every J-symmetric pair (any member of a degenerate
/// cluster). U takes A v_k / sigma_k where sigma_k is resolvable and is
/// completed from the adjoint's left singular vectors.
template <typename Scalar>
Qsvd<Scalar> qsvd(const QMatrix<Scalar>& a) {
  const Eigen::Index d1 = a.rows();
  const Eigen::Index d2 = a.cols();
  const Eigen::Index p = std::min(d1, d2);
  const auto m = to_adjoint(a).matrix();
  if (m.size() == 0) {
    return {QMatrix<Scalar>::Identity(d1), RealVector<Scalar>(0), QMatrix<Scalar>::Identity(d2)};
  }
  detail::ComplexSvd<Scalar> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RealVector<Scalar> sigma = detail::pair_average<Scalar>(svd.singularValues());

  constexpr Scalar kKeep = Scalar(0.5);
  detail::QuaternionBasis<Scalar> v_basis(d2, d2);
  for (Eigen::Index c = 0; c < svd.matrixV().cols() && !v_basis.full(); ++c) {
    v_basis.try_add(svd.matrixV().col(c), kKeep);
  }
  for (Eigen::Index e = 0; e < 2 * d2 && !v_basis.full(); ++e) {
    v_basis.try_add(ComplexColumn<Scalar>::Unit(2 * d2, e), Scalar(1e-3));
  }
  if (!v_basis.full()) throw NumericalError("qsvd: could not complete the right unitary factor");
  QMatrix<Scalar> v = v_basis.to_quaternion();

  // A v_k = sigma_k u_k in adjoint first-column form: [A]_C [v_k]_C e_1.
  const ComplexPlane<Scalar> vc = to_adjoint(v).matrix().leftCols(d2);
  const Scalar sigma_max = p > 0 ? sigma(0) : Scalar(0);
  const Scalar resolvable = sigma_max * Scalar(1e-13) * Scalar(std::max(d1, d2));
  detail::QuaternionBasis<Scalar> u_basis(d1, d1);
  for (Eigen::Index k = 0; k < p; ++k) {
    if (!(sigma(k) > resolvable)) break;
    ComplexColumn<Scalar> u = (m * vc.col(k)) / sigma(k);
    if (!u_basis.try_add(u, kKeep)) {
      throw NumericalError("qsvd: left singular vectors lost orthogonality");
    }
  }
  for (Eigen::Index c = 0; c < svd.matrixU().cols() && !u_basis.full(); ++c) {
    u_basis.try_add(svd.matrixU().col(c), kKeep);
  }
  for (Eigen::Index e = 0; e < 2 * d1 && !u_basis.full(); ++e) {
    u_basis.try_add(ComplexColumn<Scalar>::Unit(2 * d1, e), Scalar(1e-3));
  }
  if (!u_basis.full()) throw NumericalError("qsvd: could not complete the left unitary factor");
  return {u_basis.to_quaternion(), std::move(sigma), std::move(v)};
}

/// d1 x d2 quaternion matrix U diag(sigma) V*.
template <typename Scalar>
QMatrix<Scalar> reconstruct(const Qsvd<Scalar>& s) {
  const Eigen::Index p = s.sigma.size();
  QMatrix<Scalar> us(s.U.rows(), s.V.rows());
  for (int part = 0; part < 4; ++part) {
    us.part(part).leftCols(p) = s.U.part(part).leftCols(p) * s.sigma.asDiagonal();
  }
  return us * s.V.adjoint();
}

/// Count of sigma_i > 1e-10 * max(d1, d2) * sigma_1.
template <typename Scalar>
Eigen::Index numerical_rank(const RealVector<Scalar>& sigma, Eigen::Index d1, Eigen::Index d2) {
  if (sigma.size() == 0 || sigma(0) <= 0) return 0;
  const Scalar tol = Scalar(1e-10) * Scalar(std::max(d1, d2)) * sigma(0);
  return (sigma.array() > tol).count();
}

template <typename Scalar>
Eigen::Index rank(const QMatrix<Scalar>& a) {
  return numerical_rank<Scalar>(singular_values(a), a.rows(), a.cols());
}

template <typename Scalar>
SpectralNorms<Scalar> spectral_norms(const QMatrix<Scalar>& a) {
  const auto sigma = singular_values(a);
  if (sigma.size() == 0) return {};
  return {sigma.sum(), sigma(0)};
}

template <typename Scalar>
Scalar nuclear_norm(const QMatrix<Scalar>& a) {
  return spectral_norms(a).nuclear;
}

template <typename Scalar>
Scalar op_norm(const QMatrix<Scalar>& a) {
  return spectral_norms(a).op;
}

/// Singular value thresholding, the proximal map of tau * ||.||_nuc:
/// U max(Sigma - tau, 0) V*. Works on the adjoint and re-imposes J-symmetry
/// before reading the quaternion matrix back.
template <typename Scalar>
SvtResult<Scalar> svt(const QMatrix<Scalar>& a, Scalar tau) {
  if (!(tau >= 0)) throw DomainError("svt: tau must be nonnegative");
  const auto m = to_adjoint(a).matrix();
  if (m.size() == 0) return {a, 0, 0};
  detail::ComplexSvd<Scalar> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector<Scalar> sigma = detail::pair_average<Scalar>(svd.singularValues());
  Eigen::Index kept = 0;
  while (kept < sigma.size() && sigma(kept) > tau) ++kept;
  SvtResult<Scalar> out;
  if (kept == 0) {
    out.matrix = QMatrix<Scalar>::Zero(a.rows(), a.cols());
    return out;
  }
  RealVector<Scalar> shrunk(2 * kept);
  for (Eigen::Index k = 0; k < kept; ++k) {
    shrunk(2 * k) = shrunk(2 * k + 1) = sigma(k) - tau;
    out.nuclear_norm += sigma(k) - tau;
  }
  const ComplexPlane<Scalar> d = svd.matrixU().leftCols(2 * kept) * shrunk.asDiagonal() *
                                 svd.matrixV().leftCols(2 * kept).adjoint();
  out.matrix = symmetrized_from_adjoint<Scalar>(d);
  out.rank = kept;
  return out;
}

}  // namespace quatcomp
