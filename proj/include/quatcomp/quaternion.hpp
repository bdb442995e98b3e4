#pragma once

#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Core>

#include "quatcomp/errors.hpp"

namespace quatcomp {

/// Hamilton quaternion r + i*i + j*j + k*k with real components.
///
/// Multiplication follows i^2 = j^2 = k^2 = -1, ij = k, jk = i, ki = j and is
/// not commutative. A pure quaternion has r == 0; a pixel quaternion is pure
/// with i, j, k >= 0 and holds one RGB sample.
template <typename Scalar>
struct Quaternion {
  Scalar r{0};
  Scalar i{0};
  Scalar j{0};
  Scalar k{0};

  constexpr Quaternion() = default;
  constexpr Quaternion(Scalar r_, Scalar i_, Scalar j_, Scalar k_) : r(r_), i(i_), j(j_), k(k_) {}

  static constexpr Quaternion real(Scalar value) { return {value, 0, 0, 0}; }
  static constexpr Quaternion pure(Scalar i_, Scalar j_, Scalar k_) { return {0, i_, j_, k_}; }
  static Quaternion pure(const Eigen::Matrix<Scalar, 3, 1>& v) { return {0, v(0), v(1), v(2)}; }

  constexpr Quaternion conj() const { return {r, -i, -j, -k}; }
  constexpr Scalar squared_norm() const { return r * r + i * i + j * j + k * k; }
  Scalar norm() const { return std::sqrt(squared_norm()); }

  /// q^{-1} = conj(q) / |q|^2; magnitudes below 1e-300 are rejected.
  Quaternion inverse() const {
    const Scalar n = norm();
    if (!(n >= Scalar(1e-300))) {
      throw DomainError("quaternion inverse: magnitude below 1e-300");
    }
    const Scalar s = squared_norm();
    return {r / s, -i / s, -j / s, -k / s};
  }

  constexpr bool is_pure() const { return r == 0; }
  constexpr bool is_pixel() const { return r == 0 && i >= 0 && j >= 0 && k >= 0; }

  /// Imaginary part as a real 3-vector (the form channel weights act on).
  Eigen::Matrix<Scalar, 3, 1> imag() const { return {i, j, k}; }
  Eigen::Matrix<Scalar, 4, 1> coeffs() const { return {r, i, j, k}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    r += o.r; i += o.i; j += o.j; k += o.k;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    r -= o.r; i -= o.i; j -= o.j; k -= o.k;
    return *this;
  }
  constexpr Quaternion& operator*=(Scalar s) {
    r *= s; i *= s; j *= s; k *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

using Quaterniond = Quaternion<double>;

template <typename Scalar>
constexpr Quaternion<Scalar> operator+(Quaternion<Scalar> a, const Quaternion<Scalar>& b) {
  return a += b;
}
template <typename Scalar>
constexpr Quaternion<Scalar> operator-(Quaternion<Scalar> a, const Quaternion<Scalar>& b) {
  return a -= b;
}
template <typename Scalar>
constexpr Quaternion<Scalar> operator-(const Quaternion<Scalar>& a) {
  return {-a.r, -a.i, -a.j, -a.k};
}
template <typename Scalar>
constexpr Quaternion<Scalar> operator*(Quaternion<Scalar> a, Scalar s) {
  return a *= s;
}
template <typename Scalar>
constexpr Quaternion<Scalar> operator*(Scalar s, Quaternion<Scalar> a) {
  return a *= s;
}

template <typename Scalar>
constexpr Quaternion<Scalar> operator*(const Quaternion<Scalar>& p, const Quaternion<Scalar>& q) {
  return {p.r * q.r - p.i * q.i - p.j * q.j - p.k * q.k,
          p.r * q.i + p.i * q.r + p.j * q.k - p.k * q.j,
          p.r * q.j - p.i * q.k + p.j * q.r + p.k * q.i,
          p.r * q.k + p.i * q.j - p.j * q.i + p.k * q.r};
}

template <typename Scalar>
constexpr Quaternion<Scalar> qmul(const Quaternion<Scalar>& p, const Quaternion<Scalar>& q) {
  return p * q;
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const Quaternion<Scalar>& q) {
  return os << q.r << (q.i < 0 ? "" : "+") << q.i << "i" << (q.j < 0 ? "" : "+") << q.j << "j"
            << (q.k < 0 ? "" : "+") << q.k << "k";
}

}  // namespace quatcomp
