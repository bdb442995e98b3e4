#include "quatcomp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/LU>

#include "quatcomp/errors.hpp"
#include "quatcomp/feasible_set.hpp"
#include "quatcomp/qsvd.hpp"

namespace quatcomp {

void SolverConfig::validate() const {
  if (!(mu > 0)) throw DomainError("solver: mu must be positive");
  if (!(tol_rel > 0)) throw DomainError("solver: tol_rel must be positive");
  if (!(alpha > 0)) throw DomainError("solver: alpha must be positive");
  if (!(lambda >= 0)) throw DomainError("solver: lambda must be nonnegative");
  if (max_iter < 1) throw DomainError("solver: max_iter must be at least 1");
}

namespace {

constexpr double kBalanceRatio = 10.0;
constexpr double kBalanceFactor = 2.0;

// Observations grouped by matrix cell (column-major linear index).
struct CellData {
  std::vector<int> count;
  std::vector<Eigen::Vector3d> mean;
  std::vector<Eigen::Index> observed;  // cells with count > 0, ascending
};

CellData group(const ObservationSet& obs) {
  const Eigen::Index cells = obs.rows() * obs.cols();
  CellData out;
  out.count.assign(static_cast<std::size_t>(cells), 0);
  out.mean.assign(static_cast<std::size_t>(cells), Eigen::Vector3d::Zero());
  for (const auto& e : obs.entries()) {
    const auto idx = static_cast<std::size_t>(e.at.row + e.at.col * obs.rows());
    ++out.count[idx];
    out.mean[idx] += e.value.imag();
  }
  for (Eigen::Index c = 0; c < cells; ++c) {
    const auto idx = static_cast<std::size_t>(c);
    if (out.count[idx] > 0) {
      out.mean[idx] /= out.count[idx];
      out.observed.push_back(c);
    }
  }
  return out;
}

Eigen::Vector3d cell(const QMatrixd& m, Eigen::Index idx) {
  const Eigen::Index r = idx % m.rows();
  const Eigen::Index c = idx / m.rows();
  return {m.im_i()(r, c), m.im_j()(r, c), m.im_k()(r, c)};
}

void set_cell(QMatrixd& m, Eigen::Index idx, const Eigen::Vector3d& v) {
  const Eigen::Index r = idx % m.rows();
  const Eigen::Index c = idx / m.rows();
  m.re()(r, c) = 0.0;
  m.im_i()(r, c) = v(0);
  m.im_j()(r, c) = v(1);
  m.im_k()(r, c) = v(2);
}

Eigen::Vector3d project(const Eigen::Vector3d& v, double alpha, const ChannelWeight& w) {
  if (w.is_identity()) {
    Eigen::Vector3d c = v.cwiseMax(0.0);
    const double n = c.norm();
    if (n > alpha) c *= alpha / n;
    return c;
  }
  return project_feasible(Quaterniond::pure(v), alpha, w).imag();
}

double binding_fraction(const QMatrixd& theta, double alpha, const ChannelWeight& w) {
  const Eigen::Index cells = theta.size();
  if (cells == 0) return 0.0;
  Eigen::Index bound = 0;
  for (Eigen::Index idx = 0; idx < cells; ++idx) {
    if (w.magnitude(cell(theta, idx)) >= alpha * (1.0 - 1e-9)) ++bound;
  }
  return static_cast<double>(bound) / static_cast<double>(cells);
}

// Two-block scaled ADMM shared by both programs. `theta_step` overwrites
// theta with argmin over the feasible set given v = Z - U and the current mu;
// `objective` scores (theta, nuclear norm of Z).
template <typename ThetaStep, typename Objective>
CompletionResult run_admm(const QMatrixd& theta0, const SolverConfig& config, double svt_scale,
                          ThetaStep&& theta_step, Objective&& objective) {
  CompletionResult out;
  QMatrixd theta = theta0;
  QMatrixd z = theta0;
  QMatrixd u = QMatrixd::Zero(theta0.rows(), theta0.cols());
  double mu = config.mu;
  bool mu_changed = true;
  for (int it = 1; it <= config.max_iter; ++it) {
    theta_step(z - u, mu, mu_changed, theta);
    mu_changed = false;
    const QMatrixd z_prev = z;
    const SvtResult<double> s = svt(theta + u, svt_scale / mu);
    z = s.matrix;
    u += theta - z;

    const double r = fro_norm(theta - z);
    const double dz = fro_norm(z - z_prev);
    out.primal_residuals.push_back(r);
    out.dual_residuals.push_back(mu * dz);
    out.objective_history.push_back(objective(theta, s.nuclear_norm));
    out.iterations = it;

    const double scale = std::max({fro_norm(theta), fro_norm(z), 1e-300});
    if (r <= config.tol_rel * scale && dz <= config.tol_rel * scale) {
      out.converged = true;
      break;
    }
    if (config.mu_adapt) {
      const double dual = dz;
      if (r > kBalanceRatio * dual) {
        mu *= kBalanceFactor;
        u *= 1.0 / kBalanceFactor;
        mu_changed = true;
      } else if (dual > kBalanceRatio * r) {
        mu /= kBalanceFactor;
        u *= kBalanceFactor;
        mu_changed = true;
      }
    }
  }
  out.final_mu = mu;
  out.theta_hat = std::move(theta);
  return out;
}

}  // namespace

double weighted_loss(const ObservationSet& obs, const QMatrixd& theta, const ChannelWeight& w) {
  if (obs.empty()) return 0.0;
  double sum = 0;
  for (const auto& e : obs.entries()) {
    const Quaterniond t = theta(e.at.row, e.at.col);
    const Eigen::Vector3d r = e.value.imag() - t.imag();
    sum += r.dot(w.matrix() * r);
  }
  return sum / (2.0 * static_cast<double>(obs.size()));
}

CompletionResult complete_clean(const ObservationSet& obs, const SolverConfig& config) {
  config.validate();
  const Eigen::Index d1 = obs.rows();
  const Eigen::Index d2 = obs.cols();
  const ChannelWeight identity = ChannelWeight::identity();
  if (obs.empty()) {
    CompletionResult out;
    out.theta_hat = QMatrixd::Zero(d1, d2);
    out.converged = true;
    out.final_mu = config.mu;
    out.warnings.push_back("no observations: the clean program is unconstrained, returning zero");
    return out;
  }

  const CellData cells = group(obs);
  const double alpha = config.alpha;
  for (const auto& e : obs.entries()) {
    const Eigen::Vector3d y = e.value.imag();
    if ((y.array() < 0).any() || y.norm() > alpha * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "complete_clean: observation at (" << e.at.row << ", " << e.at.col
         << ") lies outside the pixel set with max norm " << alpha;
      throw InfeasibleError(os.str());
    }
    const auto idx = static_cast<std::size_t>(e.at.row + e.at.col * d1);
    if ((y - cells.mean[idx]).norm() > 1e-12 * std::max(1.0, y.norm())) {
      std::ostringstream os;
      os << "complete_clean: conflicting observations at (" << e.at.row << ", " << e.at.col << ")";
      throw InfeasibleError(os.str());
    }
  }

  QMatrixd theta0 = QMatrixd::Zero(d1, d2);
  for (Eigen::Index idx : cells.observed) set_cell(theta0, idx, cells.mean[static_cast<std::size_t>(idx)]);

  if (static_cast<Eigen::Index>(cells.observed.size()) == d1 * d2) {
    CompletionResult out;
    out.theta_hat = theta0;
    out.iterations = 1;
    out.converged = true;
    out.final_mu = config.mu;
    out.primal_residuals.push_back(0.0);
    out.dual_residuals.push_back(0.0);
    out.objective_history.push_back(nuclear_norm(theta0));
    out.binding_fraction = binding_fraction(theta0, alpha, identity);
    return out;
  }

  auto step = [&](const QMatrixd& v, double, bool, QMatrixd& theta) {
    const Eigen::Index total = d1 * d2;
    for (Eigen::Index idx = 0; idx < total; ++idx) {
      const auto s = static_cast<std::size_t>(idx);
      set_cell(theta, idx, cells.count[s] > 0 ? cells.mean[s] : project(cell(v, idx), alpha, identity));
    }
  };
  auto objective = [](const QMatrixd&, double nuclear) { return nuclear; };
  CompletionResult out = run_admm(theta0, config, 1.0, step, objective);
  out.binding_fraction = binding_fraction(out.theta_hat, alpha, identity);
  return out;
}

CompletionResult complete_noisy(const ObservationSet& obs, const SolverConfig& config) {
  config.validate();
  const Eigen::Index d1 = obs.rows();
  const Eigen::Index d2 = obs.cols();
  const ChannelWeight& w = config.weight;
  const double alpha = config.alpha;
  if (obs.empty()) {
    CompletionResult out;
    out.theta_hat = QMatrixd::Zero(d1, d2);
    out.converged = true;
    out.final_mu = config.mu;
    return out;
  }

  const CellData cells = group(obs);
  const double n = static_cast<double>(obs.size());
  // ADMM runs on the program multiplied by d1 d2, so the per-entry loss
  // curvature is of order one and mu needs no rescaling with the size.
  const double scale = static_cast<double>(d1 * d2);

  QMatrixd theta0 = QMatrixd::Zero(d1, d2);
  for (Eigen::Index idx : cells.observed) {
    set_cell(theta0, idx, project(cells.mean[static_cast<std::size_t>(idx)], alpha, w));
  }

  // (m/n W + mu I)^{-1} for each distinct count m, rebuilt when mu changes.
  std::map<int, Eigen::Matrix3d> inverse_by_count;
  const double alpha2 = alpha * alpha;
  auto step = [&](const QMatrixd& v, double mu, bool mu_changed, QMatrixd& theta) {
    if (mu_changed) inverse_by_count.clear();
    const Eigen::Index total = d1 * d2;
    for (Eigen::Index idx = 0; idx < total; ++idx) {
      const auto s = static_cast<std::size_t>(idx);
      const Eigen::Vector3d vi = cell(v, idx);
      const int m = cells.count[s];
      if (m == 0) {
        set_cell(theta, idx, project(vi, alpha, w));
        continue;
      }
      const double share = scale * m / n;
      Eigen::Matrix3d h;
      Eigen::Vector3d g;
      entry_qp_terms(share, cells.mean[s], w, mu, vi, h, g);
      auto it = inverse_by_count.find(m);
      if (it == inverse_by_count.end()) it = inverse_by_count.emplace(m, h.inverse()).first;
      Eigen::Vector3d x = it->second * g;
      if ((x.array() < 0).any() || x.dot(w.matrix() * x) > alpha2) x = solve_entry_qp(h, g, w, alpha);
      set_cell(theta, idx, x);
    }
  };
  auto objective = [&](const QMatrixd& theta, double nuclear) {
    return weighted_loss(obs, theta, w) + config.lambda * nuclear;
  };
  CompletionResult out = run_admm(theta0, config, scale * config.lambda, step, objective);
  out.binding_fraction = binding_fraction(out.theta_hat, alpha, w);
  return out;
}

}  // namespace quatcomp
