#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "quatcomp/sweep_config.hpp"

namespace quatcomp {

enum class RowKind { seed, mean, min };

/// One CSV row. Optional fields print as empty cells.
struct SweepRow {
  RowKind kind = RowKind::seed;
  std::string experiment;
  Eigen::Index d1 = 0;
  Eigen::Index d2 = 0;
  Eigen::Index r = 0;
  double q = 0;
  double rho = 0;
  double n = 0;
  double n_rescaled = 0;
  SamplingKind scheme = SamplingKind::without_replacement;
  double gamma1 = 0;
  double gamma2 = 0;
  std::optional<double> c_lambda;
  int seed = 0;  ///< seed index for kind == seed
  std::optional<double> mse;
  std::optional<double> rse;
  std::optional<double> psnr;
  std::optional<double> spikiness;
  std::optional<double> iterations;
  double converged = 0;  ///< 0/1 per seed, fraction for aggregate rows
  bool failed = false;
  std::optional<double> runtime_ms;
  std::optional<double> f1_diag;
  std::optional<double> f2_diag;
  double noise_scale = 1;
  double spikiness_factor = 1;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t solves = 0;
  std::size_t converged_solves = 0;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every parameter point for every seed on `jobs` worker threads. Row
/// content and order do not depend on `jobs`.
SweepResult run_sweep(const SweepConfig& config, int jobs = 1, const ProgressFn& progress = {});

extern const char* const kCsvHeader;

void write_csv(std::ostream& out, const SweepResult& result);
std::string format_csv_row(const SweepRow& row);

}  // namespace quatcomp
