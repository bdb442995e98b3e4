#pragma once

#include <vector>

#include "oracles.hpp"

namespace oracle {

/// Random entry subproblem: observations at one cell, sample total, weight,
/// ADMM penalty, prox center and max-norm bound.
struct EntryInstance {
  std::vector<Quaterniond> values;
  std::size_t n_total = 1;
  Eigen::Matrix3d w;
  double mu = 1;
  Quaterniond v;
  double alpha = 1;
};

inline EntryInstance random_entry_instance(quatcomp::Rng& rng) {
  EntryInstance e;
  const int m = static_cast<int>(rng.uniform_index(5));
  for (int k = 0; k < m; ++k) {
    e.values.push_back(Quaterniond::pure(1 + 1.5 * rng.normal(), 1 + 1.5 * rng.normal(), 1 + 1.5 * rng.normal()));
  }
  e.n_total = static_cast<std::size_t>(m) + rng.uniform_index(20) + (m == 0 ? 1 : 0);
  e.w = random_trace3_pd(rng);
  e.mu = 0.01 + 5 * rng.uniform();
  e.v = Quaterniond::pure(1 + 2 * rng.normal(), 1 + 2 * rng.normal(), 1 + 2 * rng.normal());
  e.alpha = 0.5 + 2.5 * rng.uniform();
  return e;
}

/// (1/2n) sum_k (y_k - q)^T W (y_k - q) + mu/2 |q - v|^2, expanded by hand.
inline void entry_qp_terms(const EntryInstance& e, Eigen::Matrix3d& h, Eigen::Vector3d& g) {
  const double inv_n = 1.0 / static_cast<double>(e.n_total);
  h = static_cast<double>(e.values.size()) * inv_n * e.w + e.mu * Eigen::Matrix3d::Identity();
  g = e.mu * e.v.imag();
  for (const auto& y : e.values) g += inv_n * (e.w * y.imag());
}

}  // namespace oracle
