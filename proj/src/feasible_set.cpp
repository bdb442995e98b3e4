#include "quatcomp/feasible_set.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "quatcomp/errors.hpp"

namespace quatcomp {

namespace {

using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;

// Coordinates left free (nonzero) on one face of the orthant.
struct Face {
  int index[3] = {0, 0, 0};
  int size = 0;

  explicit Face(int mask) {
    for (int c = 0; c < 3; ++c) {
      if (mask & (1 << c)) index[size++] = c;
    }
  }

  Small restrict(const Eigen::Matrix3d& m) const {
    Small out(size, size);
    for (int a = 0; a < size; ++a) {
      for (int b = 0; b < size; ++b) out(a, b) = m(index[a], index[b]);
    }
    return out;
  }
  SmallVec restrict(const Eigen::Vector3d& v) const {
    SmallVec out(size);
    for (int a = 0; a < size; ++a) out(a) = v(index[a]);
    return out;
  }
  Eigen::Vector3d expand(const SmallVec& x) const {
    Eigen::Vector3d out = Eigen::Vector3d::Zero();
    for (int a = 0; a < size; ++a) out(index[a]) = x(a);
    return out;
  }
};

double objective(const Eigen::Matrix3d& h, const Eigen::Vector3d& g, const Eigen::Vector3d& x) {
  return 0.5 * x.dot(h * x) - g.dot(x);
}

bool in_ellipsoid(const Eigen::Vector3d& x, const Eigen::Matrix3d& w, double alpha2) {
  return x.dot(w * x) <= alpha2;
}

// Pulls a point that sits on the ellipsoid up to rounding back inside it.
Eigen::Vector3d clip_to_ellipsoid(Eigen::Vector3d x, const Eigen::Matrix3d& w, double alpha) {
  const double m2 = x.dot(w * x);
  if (m2 > alpha * alpha) x *= alpha / std::sqrt(m2);
  return x;
}

// x(eta) = (H + eta W)^{-1} g on a face, with eta >= 0 chosen so that
// x^T W x = alpha^2. Returns false when the constraint cannot be active there.
bool ellipsoid_active_point(const Small& h, const Small& w, const SmallVec& g, double alpha2,
                            SmallVec& x) {
  auto solve = [&](double eta) -> SmallVec { return (h + eta * w).ldlt().solve(g); };
  auto phi = [&](const SmallVec& y) { return y.dot(w * y); };
  x = solve(0.0);
  if (phi(x) <= alpha2) return false;
  double lo = 0.0;
  double hi = 1.0;
  SmallVec x_hi = solve(hi);
  int guard = 0;
  while (phi(x_hi) > alpha2) {
    lo = hi;
    hi *= 2.0;
    x_hi = solve(hi);
    if (++guard > 2000) return false;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const SmallVec x_mid = solve(mid);
    if (phi(x_mid) > alpha2) {
      lo = mid;
    } else {
      hi = mid;
      x_hi = x_mid;
    }
  }
  x = x_hi;
  return true;
}

void require_pure_entry(const Quaterniond& q, const char* what) {
  if (!q.is_pure()) throw PurityError(std::string(what) + ": quaternion has nonzero real part");
}

}  // namespace

Eigen::Vector3d solve_entry_qp(const Eigen::Matrix3d& h, const Eigen::Vector3d& g,
                               const ChannelWeight& weight, double alpha) {
  if (!(alpha > 0)) throw DomainError("entry QP: alpha must be positive");
  const Eigen::Matrix3d& w = weight.matrix();
  const double alpha2 = alpha * alpha;

  const Eigen::Vector3d unconstrained = h.ldlt().solve(g);
  if ((unconstrained.array() >= 0).all() && in_ellipsoid(unconstrained, w, alpha2)) {
    return unconstrained;
  }

  // Orthant-only optimum: best face whose reduced minimizer is nonnegative.
  Eigen::Vector3d best = Eigen::Vector3d::Zero();
  double best_value = 0.0;
  for (int mask = 1; mask < 8; ++mask) {
    const Face face(mask);
    const SmallVec xf = face.restrict(h).ldlt().solve(face.restrict(g));
    if ((xf.array() < 0).any()) continue;
    const Eigen::Vector3d x = face.expand(xf);
    const double value = objective(h, g, x);
    if (value < best_value) {
      best_value = value;
      best = x;
    }
  }
  if (in_ellipsoid(best, w, alpha2)) return best;

  // The ellipsoid is active at the optimum.
  bool found = false;
  best_value = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < 8; ++mask) {
    const Face face(mask);
    SmallVec xf;
    if (!ellipsoid_active_point(face.restrict(h), face.restrict(w), face.restrict(g), alpha2, xf)) {
      continue;
    }
    const double scale = std::max(1.0, xf.cwiseAbs().maxCoeff());
    if ((xf.array() < -1e-12 * scale).any()) continue;
    const Eigen::Vector3d x = clip_to_ellipsoid(face.expand(xf.cwiseMax(0.0)), w, alpha);
    const double value = objective(h, g, x);
    if (value < best_value) {
      best_value = value;
      best = x;
      found = true;
    }
  }
  if (!found) throw InternalConsistencyError("entry QP: no KKT-consistent candidate");
  return best;
}

Quaterniond project_feasible(const Quaterniond& v, double alpha, const ChannelWeight& w) {
  require_pure_entry(v, "project_feasible");
  if (!(alpha > 0)) throw DomainError("project_feasible: alpha must be positive");
  const Eigen::Vector3d x = v.imag();
  if ((x.array() >= 0).all() && x.dot(w.matrix() * x) <= alpha * alpha) return v;
  if (w.is_identity()) {
    Eigen::Vector3d c = x.cwiseMax(0.0);
    const double n = c.norm();
    if (n > alpha) c *= alpha / n;
    return Quaterniond::pure(c);
  }
  return Quaterniond::pure(solve_entry_qp(Eigen::Matrix3d::Identity(), x, w, alpha));
}

Eigen::Vector3d project_ellipsoid(const Eigen::Vector3d& v, double alpha, const ChannelWeight& w) {
  const double alpha2 = alpha * alpha;
  if (v.dot(w.matrix() * v) <= alpha2) return v;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.computeDirect(w.matrix());
  const Eigen::Vector3d lambda = es.eigenvalues();
  const Eigen::Vector3d y = es.eigenvectors().transpose() * v;
  auto phi = [&](double eta) {
    double s = 0;
    for (int c = 0; c < 3; ++c) {
      const double t = y(c) / (1.0 + eta * lambda(c));
      s += lambda(c) * t * t;
    }
    return s;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (phi(hi) > alpha2) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > alpha2 ? lo : hi) = mid;
  }
  Eigen::Vector3d z;
  for (int c = 0; c < 3; ++c) z(c) = y(c) / (1.0 + hi * lambda(c));
  return es.eigenvectors() * z;
}

DykstraResult project_feasible_dykstra(const Quaterniond& v, double alpha, const ChannelWeight& w,
                                       int max_sweeps, double tol) {
  require_pure_entry(v, "project_feasible_dykstra");
  Eigen::Vector3d x = v.imag();
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Vector3d q = Eigen::Vector3d::Zero();
  DykstraResult out;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const Eigen::Vector3d prev = x;
    const Eigen::Vector3d y = (x + p).cwiseMax(0.0);
    p = x + p - y;
    x = project_ellipsoid(y + q, alpha, w);
    q = y + q - x;
    out.sweeps = sweep;
    if ((x - prev).norm() < tol && (x - y).norm() < tol) {
      out.converged = true;
      break;
    }
  }
  out.point = Quaterniond::pure(x);
  return out;
}

void entry_qp_terms(double share, const Eigen::Vector3d& mean, const ChannelWeight& w, double mu,
                    const Eigen::Vector3d& v, Eigen::Matrix3d& hessian, Eigen::Vector3d& linear) {
  hessian = share * w.matrix() + mu * Eigen::Matrix3d::Identity();
  linear = share * (w.matrix() * mean) + mu * v;
}

namespace {

Eigen::Vector3d mean_of(std::span<const Quaterniond> values) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& y : values) {
    require_pure_entry(y, "entry_qp");
    sum += y.imag();
  }
  return values.empty() ? sum : Eigen::Vector3d(sum / static_cast<double>(values.size()));
}

}  // namespace

Quaterniond entry_qp(std::span<const Quaterniond> values, std::size_t n_total,
                     const ChannelWeight& w, double mu, const Quaterniond& v, double alpha) {
  require_pure_entry(v, "entry_qp");
  if (!(mu > 0)) throw DomainError("entry_qp: mu must be positive");
  if (values.empty()) return project_feasible(v, alpha, w);
  if (n_total < values.size()) throw DomainError("entry_qp: n_total smaller than entry count");
  const double share = static_cast<double>(values.size()) / static_cast<double>(n_total);
  Eigen::Matrix3d h;
  Eigen::Vector3d g;
  entry_qp_terms(share, mean_of(values), w, mu, v.imag(), h, g);
  return Quaterniond::pure(solve_entry_qp(h, g, w, alpha));
}

double entry_qp_objective(std::span<const Quaterniond> values, std::size_t n_total,
                          const ChannelWeight& w, double mu, const Quaterniond& v,
                          const Quaterniond& q) {
  double loss = 0;
  for (const auto& y : values) {
    const Eigen::Vector3d r = y.imag() - q.imag();
    loss += r.dot(w.matrix() * r);
  }
  const double data = n_total > 0 ? loss / (2.0 * static_cast<double>(n_total)) : 0.0;
  return data + 0.5 * mu * (q.imag() - v.imag()).squaredNorm();
}

double kkt_residual(const Eigen::Vector3d& x, const Eigen::Matrix3d& h, const Eigen::Vector3d& g,
                    const ChannelWeight& weight, double alpha) {
  const Eigen::Matrix3d& w = weight.matrix();
  const double scale = std::max(1.0, g.norm());
  const Eigen::Vector3d grad = h * x - g;
  const Eigen::Vector3d wx = w * x;
  const double m2 = x.dot(wx);
  const double zero_tol = 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff());

  bool free[3];
  for (int c = 0; c < 3; ++c) free[c] = x(c) > zero_tol;

  double eta = 0;
  if (m2 >= alpha * alpha * (1.0 - 1e-9)) {
    double num = 0;
    double den = 0;
    for (int c = 0; c < 3; ++c) {
      if (!free[c]) continue;
      num -= grad(c) * wx(c);
      den += wx(c) * wx(c);
    }
    if (den > 0) eta = std::max(0.0, num / den);
  }
  const Eigen::Vector3d stat = grad + eta * wx;
  double res2 = 0;
  for (int c = 0; c < 3; ++c) {
    // Free coordinates need zero; coordinates at the bound need a
    // nonnegative orthant multiplier.
    const double r = free[c] ? stat(c) : std::min(stat(c), 0.0);
    res2 += r * r;
  }
  double violation = 0;
  for (int c = 0; c < 3; ++c) violation += std::max(0.0, -x(c));
  violation += std::max(0.0, std::sqrt(m2) - alpha);
  return std::sqrt(res2) / scale + violation;
}

}  // namespace quatcomp
