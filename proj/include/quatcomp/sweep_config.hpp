#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "quatcomp/observation.hpp"

namespace quatcomp {

enum class Model { clean, noisy };
enum class Generator { exact, approx };

struct Shape {
  Eigen::Index d1 = 0;
  Eigen::Index d2 = 0;
  Eigen::Index r = 0;
};

/// Parsed experiment description. Parameter points are the cartesian product
///   shape x spikiness factor x noise scale x scheme x n x gamma1 x gamma2 x c_lambda
/// (gamma pairs outside the simplex are skipped), each run for every seed.
struct SweepConfig {
  std::string name = "sweep";
  Model model = Model::noisy;

  Generator generator = Generator::exact;
  std::vector<Shape> shapes;
  double q = 0.0;
  std::vector<double> spikiness_factors{1.0};
  bool fixed_matrix = false;  ///< one matrix per shape shared by all seeds

  std::vector<SamplingKind> schemes{SamplingKind::without_replacement};
  std::vector<double> n_values;
  bool n_is_rescaled = false;

  std::optional<Eigen::Matrix3d> noise_covariance;
  std::vector<double> noise_scales{1.0};

  std::vector<double> gamma1{0.0};
  std::vector<double> gamma2{0.0};
  std::vector<double> c_lambda{0.6};

  double mu = 1.0;
  bool mu_adapt = true;
  double tol_rel = 1e-6;
  int max_iter = 1000;
  std::optional<double> alpha;  ///< empty: max norm of the truth (weighted for noisy runs)

  bool mean_rows = true;
  bool min_rows = true;
  bool record_runtime = false;

  std::uint64_t master_seed = 1;
  int seed_count = 10;
};

/// Throws ConfigError("<field path>: <problem>").
SweepConfig parse_sweep_config(const std::string& json_text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

}  // namespace quatcomp
