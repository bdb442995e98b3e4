#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "quatcomp/qmatrix.hpp"
#include "quatcomp/weights.hpp"

namespace quatcomp {

enum class SamplingKind { with_replacement, without_replacement };

std::string_view to_string(SamplingKind kind);

struct SamplingScheme {
  SamplingKind kind = SamplingKind::without_replacement;
  std::uint64_t seed = 0;
};

struct Position {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

/// n positions drawn uniformly from the d1 x d2 grid. With replacement the
/// draws are i.i.d.; without replacement they are distinct (partial
/// Fisher-Yates). Deterministic in (scheme, d1, d2, n).
std::vector<Position> sample(const SamplingScheme& scheme, Eigen::Index d1, Eigen::Index d2,
                             std::size_t n);

struct Observation {
  Position at;
  Quaterniond value;
};

/// Sampled (position, value) pairs of one matrix. Values are pure quaternions.
class ObservationSet {
 public:
  ObservationSet(Eigen::Index rows, Eigen::Index cols, SamplingKind kind,
                 std::vector<Observation> entries);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  SamplingKind kind() const { return kind_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const Observation> entries() const { return entries_; }
  const Observation& operator[](std::size_t idx) const { return entries_[idx]; }

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  SamplingKind kind_;
  std::vector<Observation> entries_;
};

/// Y_k = theta(X_k) (+ eps_k with eps_k ~ N(0, Sigma) as a pure quaternion,
/// drawn as L z with L the Cholesky factor of Sigma). theta must be a pixel
/// matrix.
ObservationSet observe(const QMatrixd& theta, std::span<const Position> positions,
                       SamplingKind kind, const std::optional<NoiseCovariance>& noise,
                       std::uint64_t noise_seed);

}  // namespace quatcomp
