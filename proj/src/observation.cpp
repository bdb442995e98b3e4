#include "quatcomp/observation.hpp"

#include <sstream>
#include <unordered_map>

#include "quatcomp/errors.hpp"
#include "quatcomp/random.hpp"

namespace quatcomp {

std::string_view to_string(SamplingKind kind) {
  return kind == SamplingKind::with_replacement ? "Y" : "N";
}

std::vector<Position> sample(const SamplingScheme& scheme, Eigen::Index d1, Eigen::Index d2,
                             std::size_t n) {
  if (d1 <= 0 || d2 <= 0) throw DomainError("sample: dimensions must be positive");
  const std::uint64_t cells = static_cast<std::uint64_t>(d1) * static_cast<std::uint64_t>(d2);
  Rng rng(scheme.seed);
  std::vector<Position> out;
  out.reserve(n);
  auto at = [d1](std::uint64_t linear) {
    return Position{static_cast<Eigen::Index>(linear % d1), static_cast<Eigen::Index>(linear / d1)};
  };
  if (scheme.kind == SamplingKind::with_replacement) {
    for (std::size_t k = 0; k < n; ++k) out.push_back(at(rng.uniform_index(cells)));
    return out;
  }
  if (n > cells) {
    std::ostringstream os;
    os << "sample: " << n << " draws without replacement exceed the " << cells << " positions";
    throw CapacityError(os.str());
  }
  // Partial Fisher-Yates over a lazily materialized permutation.
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  auto value_at = [&](std::uint64_t idx) {
    auto it = swapped.find(idx);
    return it == swapped.end() ? idx : it->second;
  };
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::uint64_t pick = k + rng.uniform_index(cells - k);
    const std::uint64_t chosen = value_at(pick);
    swapped[pick] = value_at(k);
    out.push_back(at(chosen));
  }
  return out;
}

ObservationSet::ObservationSet(Eigen::Index rows, Eigen::Index cols, SamplingKind kind,
                               std::vector<Observation> entries)
    : rows_(rows), cols_(cols), kind_(kind), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.at.row < 0 || e.at.row >= rows_ || e.at.col < 0 || e.at.col >= cols_) {
      throw DimensionError("ObservationSet: position outside the matrix");
    }
    if (!e.value.is_pure()) throw PurityError("ObservationSet: observed value is not pure");
  }
}

ObservationSet observe(const QMatrixd& theta, std::span<const Position> positions,
                       SamplingKind kind, const std::optional<NoiseCovariance>& noise,
                       std::uint64_t noise_seed) {
  if (!theta.is_pixel()) {
    throw PurityError("observe: matrix must be pure with nonnegative components");
  }
  Rng rng(noise_seed);
  std::vector<Observation> entries;
  entries.reserve(positions.size());
  for (const auto& p : positions) {
    Quaterniond y = theta(p.row, p.col);
    if (noise) {
      const Eigen::Vector3d z(rng.normal(), rng.normal(), rng.normal());
      const Eigen::Vector3d eps = noise->cholesky() * z;
      y += Quaterniond::pure(eps);
    }
    entries.push_back({p, y});
  }
  return ObservationSet(theta.rows(), theta.cols(), kind, std::move(entries));
}

}  // namespace quatcomp
