#pragma once

#include <array>
#include <sstream>
#include <string>

#include <Eigen/Core>

#include "quatcomp/errors.hpp"
#include "quatcomp/quaternion.hpp"

namespace quatcomp {

enum class Part { r = 0, i = 1, j = 2, k = 3 };

/// Dense quaternion matrix stored as four real component planes.
///
/// Entry (row, col) is re(row,col) + im_i(row,col) i + im_j(row,col) j +
/// im_k(row,col) k. Plane storage keeps per-channel work (weights, projections)
/// and the complex adjoint split A = (re + im_i i) + (im_j + im_k i) j cheap.
template <typename Scalar>
class QMatrix {
 public:
  using Plane = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Index = Eigen::Index;
  using Entry = Quaternion<Scalar>;

  QMatrix() = default;
  QMatrix(Index rows, Index cols) {
    for (auto& p : parts_) p = Plane::Zero(rows, cols);
  }
  QMatrix(Plane re, Plane im_i, Plane im_j, Plane im_k)
      : parts_{std::move(re), std::move(im_i), std::move(im_j), std::move(im_k)} {
    for (const auto& p : parts_) {
      if (p.rows() != parts_[0].rows() || p.cols() != parts_[0].cols()) {
        throw DimensionError("QMatrix: component planes differ in shape");
      }
    }
  }

  static QMatrix Zero(Index rows, Index cols) { return QMatrix(rows, cols); }
  static QMatrix Identity(Index n) {
    QMatrix m(n, n);
    m.parts_[0].setIdentity();
    return m;
  }
  static QMatrix FromPure(Plane im_i, Plane im_j, Plane im_k) {
    Plane re = Plane::Zero(im_i.rows(), im_i.cols());
    return QMatrix(std::move(re), std::move(im_i), std::move(im_j), std::move(im_k));
  }

  Index rows() const { return parts_[0].rows(); }
  Index cols() const { return parts_[0].cols(); }
  Index size() const { return parts_[0].size(); }

  Entry operator()(Index row, Index col) const {
    return {parts_[0](row, col), parts_[1](row, col), parts_[2](row, col), parts_[3](row, col)};
  }
  void set(Index row, Index col, const Entry& q) {
    parts_[0](row, col) = q.r;
    parts_[1](row, col) = q.i;
    parts_[2](row, col) = q.j;
    parts_[3](row, col) = q.k;
  }

  const Plane& part(Part p) const { return parts_[static_cast<int>(p)]; }
  Plane& part(Part p) { return parts_[static_cast<int>(p)]; }
  const Plane& part(int p) const { return parts_[p]; }
  Plane& part(int p) { return parts_[p]; }
  const Plane& re() const { return parts_[0]; }
  const Plane& im_i() const { return parts_[1]; }
  const Plane& im_j() const { return parts_[2]; }
  const Plane& im_k() const { return parts_[3]; }
  Plane& re() { return parts_[0]; }
  Plane& im_i() { return parts_[1]; }
  Plane& im_j() { return parts_[2]; }
  Plane& im_k() { return parts_[3]; }

  bool is_pure() const { return (parts_[0].array() == Scalar(0)).all(); }
  bool is_pixel() const {
    return is_pure() && (parts_[1].array() >= 0).all() && (parts_[2].array() >= 0).all() &&
           (parts_[3].array() >= 0).all();
  }

  QMatrix conjugate() const { return QMatrix(parts_[0], -parts_[1], -parts_[2], -parts_[3]); }
  QMatrix transpose() const {
    return QMatrix(parts_[0].transpose(), parts_[1].transpose(), parts_[2].transpose(),
                   parts_[3].transpose());
  }
  /// Conjugate transpose A*.
  QMatrix adjoint() const {
    return QMatrix(parts_[0].transpose(), -parts_[1].transpose(), -parts_[2].transpose(),
                   -parts_[3].transpose());
  }

  Scalar squared_norm() const {
    Scalar s = 0;
    for (const auto& p : parts_) s += p.squaredNorm();
    return s;
  }

  QMatrix& operator+=(const QMatrix& o) {
    check_same_shape(*this, o, "+");
    for (int c = 0; c < 4; ++c) parts_[c] += o.parts_[c];
    return *this;
  }
  QMatrix& operator-=(const QMatrix& o) {
    check_same_shape(*this, o, "-");
    for (int c = 0; c < 4; ++c) parts_[c] -= o.parts_[c];
    return *this;
  }
  QMatrix& operator*=(Scalar s) {
    for (auto& p : parts_) p *= s;
    return *this;
  }

  bool operator==(const QMatrix& o) const {
    if (rows() != o.rows() || cols() != o.cols()) return false;
    for (int c = 0; c < 4; ++c) {
      if (parts_[c] != o.parts_[c]) return false;
    }
    return true;
  }

  static std::string shape_string(const QMatrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
  }
  static void check_same_shape(const QMatrix& a, const QMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw DimensionError(std::string("QMatrix ") + op + ": shapes " + shape_string(a) + " and " +
                           shape_string(b) + " differ");
    }
  }

 private:
  std::array<Plane, 4> parts_;
};

using QMatrixd = QMatrix<double>;

template <typename Scalar>
QMatrix<Scalar> operator+(QMatrix<Scalar> a, const QMatrix<Scalar>& b) {
  return a += b;
}
template <typename Scalar>
QMatrix<Scalar> operator-(QMatrix<Scalar> a, const QMatrix<Scalar>& b) {
  return a -= b;
}
template <typename Scalar>
QMatrix<Scalar> operator*(QMatrix<Scalar> a, Scalar s) {
  return a *= s;
}
template <typename Scalar>
QMatrix<Scalar> operator*(Scalar s, QMatrix<Scalar> a) {
  return a *= s;
}

/// Quaternion matrix product, expanded over the four component planes.
template <typename Scalar>
QMatrix<Scalar> operator*(const QMatrix<Scalar>& a, const QMatrix<Scalar>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("QMatrix product: shapes " + QMatrix<Scalar>::shape_string(a) + " and " +
                         QMatrix<Scalar>::shape_string(b) + " are incompatible");
  }
  const auto& a0 = a.re();
  const auto& a1 = a.im_i();
  const auto& a2 = a.im_j();
  const auto& a3 = a.im_k();
  const auto& b0 = b.re();
  const auto& b1 = b.im_i();
  const auto& b2 = b.im_j();
  const auto& b3 = b.im_k();
  using Plane = typename QMatrix<Scalar>::Plane;
  Plane c0 = a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3;
  Plane c1 = a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2;
  Plane c2 = a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1;
  Plane c3 = a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0;
  return QMatrix<Scalar>(std::move(c0), std::move(c1), std::move(c2), std::move(c3));
}

template <typename Scalar>
Quaternion<Scalar> trace(const QMatrix<Scalar>& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("trace: matrix " + QMatrix<Scalar>::shape_string(a) + " is not square");
  }
  return {a.re().trace(), a.im_i().trace(), a.im_j().trace(), a.im_k().trace()};
}

/// <A, B> = Tr(A* B), computed without forming the product.
template <typename Scalar>
Quaternion<Scalar> inner(const QMatrix<Scalar>& a, const QMatrix<Scalar>& b) {
  QMatrix<Scalar>::check_same_shape(a, b, "inner product");
  Quaternion<Scalar> sum;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) sum += a(r, c).conj() * b(r, c);
  }
  return sum;
}

template <typename Scalar>
Scalar fro_norm(const QMatrix<Scalar>& a) {
  return std::sqrt(a.squared_norm());
}

/// Largest entry magnitude, ||A||_inf.
template <typename Scalar>
Scalar max_norm(const QMatrix<Scalar>& a) {
  if (a.size() == 0) return 0;
  const auto sq = (a.re().array().square() + a.im_i().array().square() +
                   a.im_j().array().square() + a.im_k().array().square())
                      .eval();
  return std::sqrt(sq.maxCoeff());
}

/// Largest row 2-norm, ||A||_{2,inf}.
template <typename Scalar>
Scalar two_inf_norm(const QMatrix<Scalar>& a) {
  if (a.size() == 0) return 0;
  const auto sq = (a.re().array().square() + a.im_i().array().square() +
                   a.im_j().array().square() + a.im_k().array().square())
                      .eval();
  return std::sqrt(sq.rowwise().sum().maxCoeff());
}

template <typename Scalar>
void require_pure(const QMatrix<Scalar>& a, const char* what) {
  if (!a.is_pure()) {
    throw PurityError(std::string(what) + ": matrix has nonzero real part");
  }
}

/// Entrywise left action of a 3x3 real matrix on the imaginary 3-vectors.
template <typename Scalar>
QMatrix<Scalar> apply_weight(const Eigen::Matrix<Scalar, 3, 3>& w, const QMatrix<Scalar>& a) {
  require_pure(a, "apply_weight");
  using Plane = typename QMatrix<Scalar>::Plane;
  Plane out[3];
  for (int row = 0; row < 3; ++row) {
    out[row] = w(row, 0) * a.im_i() + w(row, 1) * a.im_j() + w(row, 2) * a.im_k();
  }
  return QMatrix<Scalar>::FromPure(std::move(out[0]), std::move(out[1]), std::move(out[2]));
}

}  // namespace quatcomp
