#pragma once

#include <complex>

#include <Eigen/Core>

#include "quatcomp/errors.hpp"
#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

template <typename Scalar>
using ComplexPlane = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexColumn = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Relative defect above which a complex matrix is not accepted as an adjoint.
inline constexpr double kAdjointRejectTolerance = 1e-6;

/// Complex adjoint [A]_C of a quaternion matrix A = A1 + A2 j:
///
///     [  A1        A2      ]
///     [ -conj(A2)  conj(A1) ]
///
/// The map is additive and multiplicative and sends A* to [A]_C^*. Every
/// adjoint satisfies J conj(M) J^T = M with J = [[0, I], [-I, 0]].
template <typename Scalar>
class ComplexAdjoint {
 public:
  using Matrix = ComplexPlane<Scalar>;

  ComplexAdjoint() = default;
  /// Wraps an arbitrary even-sized complex matrix; J-symmetry is checked on
  /// conversion back to quaternions, not here.
  explicit ComplexAdjoint(Matrix m) : m_(std::move(m)) {
    if (m_.rows() % 2 != 0 || m_.cols() % 2 != 0) {
      throw DimensionError("ComplexAdjoint: dimensions must be even");
    }
  }

  const Matrix& matrix() const { return m_; }
  Eigen::Index quaternion_rows() const { return m_.rows() / 2; }
  Eigen::Index quaternion_cols() const { return m_.cols() / 2; }

 private:
  Matrix m_;
};

/// J conj(M) J^T for an even-sized complex matrix.
template <typename Scalar>
ComplexPlane<Scalar> j_reflect(const ComplexPlane<Scalar>& m) {
  const Eigen::Index r = m.rows() / 2;
  const Eigen::Index c = m.cols() / 2;
  ComplexPlane<Scalar> out(m.rows(), m.cols());
  out.topLeftCorner(r, c) = m.bottomRightCorner(r, c).conjugate();
  out.topRightCorner(r, c) = -m.bottomLeftCorner(r, c).conjugate();
  out.bottomLeftCorner(r, c) = -m.topRightCorner(r, c).conjugate();
  out.bottomRightCorner(r, c) = m.topLeftCorner(r, c).conjugate();
  return out;
}

/// ||M - J conj(M) J^T||_F / ||M||_F (0 for the zero matrix).
template <typename Scalar>
Scalar j_symmetry_defect(const ComplexPlane<Scalar>& m) {
  const Scalar scale = m.norm();
  if (scale == 0) return 0;
  return (m - j_reflect<Scalar>(m)).norm() / scale;
}

template <typename Scalar>
ComplexAdjoint<Scalar> to_adjoint(const QMatrix<Scalar>& a) {
  const Eigen::Index r = a.rows();
  const Eigen::Index c = a.cols();
  ComplexPlane<Scalar> m(2 * r, 2 * c);
  auto a1 = m.topLeftCorner(r, c);
  auto a2 = m.topRightCorner(r, c);
  a1.real() = a.re();
  a1.imag() = a.im_i();
  a2.real() = a.im_j();
  a2.imag() = a.im_k();
  m.bottomLeftCorner(r, c) = -a2.conjugate();
  m.bottomRightCorner(r, c) = a1.conjugate();
  return ComplexAdjoint<Scalar>(std::move(m));
}

/// Quaternion matrix whose adjoint is (M + J conj(M) J^T) / 2, the nearest
/// J-symmetric matrix to M. No defect check.
template <typename Scalar>
QMatrix<Scalar> symmetrized_from_adjoint(const ComplexPlane<Scalar>& m) {
  const Eigen::Index r = m.rows() / 2;
  const Eigen::Index c = m.cols() / 2;
  const ComplexPlane<Scalar> a1 =
      (m.topLeftCorner(r, c) + m.bottomRightCorner(r, c).conjugate()) * Scalar(0.5);
  const ComplexPlane<Scalar> a2 =
      (m.topRightCorner(r, c) - m.bottomLeftCorner(r, c).conjugate()) * Scalar(0.5);
  return QMatrix<Scalar>(a1.real(), a1.imag(), a2.real(), a2.imag());
}

/// Reads A back from a (possibly slightly perturbed) adjoint after averaging
/// M with J conj(M) J^T. Throws RepresentationError when the relative
/// J-symmetry defect exceeds 1e-6.
template <typename Scalar>
QMatrix<Scalar> from_adjoint(const ComplexPlane<Scalar>& m) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0) {
    throw DimensionError("from_adjoint: dimensions must be even");
  }
  const Scalar defect = j_symmetry_defect<Scalar>(m);
  if (defect > Scalar(kAdjointRejectTolerance)) {
    throw RepresentationError("from_adjoint: J-symmetry defect " + std::to_string(defect) +
                              " exceeds 1e-6");
  }
  return symmetrized_from_adjoint<Scalar>(m);
}

template <typename Scalar>
QMatrix<Scalar> from_adjoint(const ComplexAdjoint<Scalar>& m) {
  return from_adjoint<Scalar>(m.matrix());
}

/// Quaternion column vector read from the first column of its adjoint,
/// c = [x1; -conj(x2)] for x = x1 + x2 j.
template <typename Scalar>
QMatrix<Scalar> quaternion_column(const ComplexColumn<Scalar>& c) {
  const Eigen::Index n = c.size() / 2;
  using Plane = typename QMatrix<Scalar>::Plane;
  Plane re = c.head(n).real();
  Plane im_i = c.head(n).imag();
  Plane im_j = -c.tail(n).real();
  Plane im_k = c.tail(n).imag();
  return QMatrix<Scalar>(std::move(re), std::move(im_i), std::move(im_j), std::move(im_k));
}

}  // namespace quatcomp
