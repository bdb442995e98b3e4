#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace quatcomp {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for trial `index` of a run with `master` seed. Independent of the
/// order in which trials are scheduled.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// The repository's random source: mt19937_64 with portable uniform, integer
/// and Box-Muller normal draws, so identical seeds give identical bits on any
/// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, bound), unbiased.
  std::uint64_t uniform_index(std::uint64_t bound);
  double normal();

  Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0;
};

}  // namespace quatcomp
