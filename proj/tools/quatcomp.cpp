#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "quatcomp/errors.hpp"
#include "quatcomp/image_io.hpp"
#include "quatcomp/inpaint.hpp"
#include "quatcomp/sweep.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 2, kIo = 3, kNoConvergence = 4 };

using namespace quatcomp;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--noise-cov: '" + item + "' is not a number");
    }
    if (used != item.size()) throw ConfigError("--noise-cov: '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

int run_sweep_command(const std::string& config_path, const std::string& out_path, int jobs) {
  SweepConfig config = load_sweep_config(config_path);
  if (const char* env = std::getenv("QUATCOMP_SEED")) {
    std::uint64_t seed = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, seed);
    if (ec != std::errc() || ptr != end || ptr == env) {
      throw ConfigError("QUATCOMP_SEED: must be a nonnegative integer");
    }
    config.master_seed = seed;
  }
  const SweepResult result = run_sweep(config, jobs, [](std::size_t done, std::size_t total) {
    std::cerr << "\r" << done << "/" << total << " instances" << (done == total ? "\n" : "") << std::flush;
  });
  for (const auto& row : result.rows) {
    if (row.kind == RowKind::seed && row.failed) {
      std::cerr << "warning: " << format_csv_row(row) << ": " << row.error << "\n";
    }
  }
  if (out_path.empty() || out_path == "-") {
    write_csv(std::cout, result);
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write CSV to standard output");
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + out_path + " for writing");
    write_csv(out, result);
    out.flush();
    if (!out) throw IoError("cannot write " + out_path);
  }
  if (result.solves > 0 && result.converged_solves == 0) {
    std::cerr << "error: no solve converged\n";
    return kNoConvergence;
  }
  return kOk;
}

struct InpaintArgs {
  std::string config;
  std::string image;
  std::string mask;
  std::optional<double> mask_frac;
  std::uint64_t mask_seed = 0;
  std::string noise_cov;
  std::uint64_t noise_seed = 0;
  double gamma1 = 0;
  double gamma2 = 0;
  double c_lambda = 0.6;
  std::optional<double> alpha;
  double tol = 1e-5;
  int max_iter = 500;
  std::string out;
};

// Fills every option not given on the command line from a flat JSON object
// keyed by the long flag names without the leading dashes.
void merge_inpaint_config(InpaintArgs& a, const CLI::App& cmd) {
  std::ifstream in(a.config, std::ios::binary);
  if (!in) throw IoError("cannot open config " + a.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("$: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("$: must be an object");
  for (const auto& [key, value] : j.items()) {
    const CLI::Option* given = cmd.get_option_no_throw("--" + key);
    if (given != nullptr && given->count() > 0) continue;
    try {
      if (key == "image") a.image = value.get<std::string>();
      else if (key == "mask") a.mask = value.get<std::string>();
      else if (key == "mask-frac") a.mask_frac = value.get<double>();
      else if (key == "mask-seed") a.mask_seed = value.get<std::uint64_t>();
      else if (key == "noise-cov") {
        if (!value.is_array()) throw ConfigError(key + ": must be an array of 6 numbers");
        std::ostringstream packed;
        packed.precision(17);
        for (std::size_t k = 0; k < value.size(); ++k) packed << (k ? "," : "") << value[k].get<double>();
        a.noise_cov = packed.str();
      } else if (key == "noise-seed") a.noise_seed = value.get<std::uint64_t>();
      else if (key == "gamma1") a.gamma1 = value.get<double>();
      else if (key == "gamma2") a.gamma2 = value.get<double>();
      else if (key == "c-lambda") a.c_lambda = value.get<double>();
      else if (key == "alpha") a.alpha = value.get<double>();
      else if (key == "tol") a.tol = value.get<double>();
      else if (key == "max-iter") a.max_iter = value.get<int>();
      else if (key == "out") a.out = value.get<std::string>();
      else throw ConfigError(key + ": unknown field");
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(key + ": wrong type");
    }
  }
  if (a.mask_frac && (*a.mask_frac < 0 || *a.mask_frac > 1)) throw ConfigError("mask-frac: must lie in [0, 1]");
  if (a.gamma1 < 0 || a.gamma1 > 1) throw ConfigError("gamma1: must lie in [0, 1]");
  if (a.gamma2 < 0 || a.gamma2 > 1) throw ConfigError("gamma2: must lie in [0, 1]");
  if (!(a.c_lambda > 0)) throw ConfigError("c-lambda: must be positive");
  if (a.alpha && !(*a.alpha > 0)) throw ConfigError("alpha: must be positive");
  if (!(a.tol > 0)) throw ConfigError("tol: must be positive");
  if (a.max_iter < 1) throw ConfigError("max-iter: must be at least 1");
  if (!a.mask.empty() && a.mask_frac) throw ConfigError("mask and mask-frac are mutually exclusive");
}

int run_inpaint_command(const InpaintArgs& a) {
  if (a.image.empty()) throw ConfigError("inpaint: --image is required");
  if (a.out.empty()) throw ConfigError("inpaint: --out is required");
  const RgbImage image = read_ppm(a.image);
  GrayImage mask;
  if (!a.mask.empty()) {
    mask = read_pgm(a.mask);
  } else if (a.mask_frac) {
    mask = random_mask(image.width, image.height, *a.mask_frac, a.mask_seed);
  } else {
    throw ConfigError("inpaint: one of --mask or --mask-frac is required");
  }
  if (mask.width != image.width || mask.height != image.height) {
    throw IoError("inpaint: mask shape does not match the image");
  }
  InpaintOptions options;
  if (!a.noise_cov.empty()) {
    const std::vector<double> v = parse_list(a.noise_cov);
    if (v.size() != 6) throw ConfigError("--noise-cov: expected 6 comma-separated values s11,s12,s13,s22,s23,s33");
    const double packed[6] = {v[0], v[1], v[2], v[3], v[4], v[5]};
    try {
      options.noise = NoiseCovariance::packed(packed);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--noise-cov: ") + e.what());
    }
  }
  options.noise_seed = a.noise_seed;
  options.gamma1 = a.gamma1;
  options.gamma2 = a.gamma2;
  options.c_lambda = a.c_lambda;
  options.alpha = a.alpha;
  options.tol_rel = a.tol;
  options.max_iter = a.max_iter;
  InpaintResult r;
  try {
    r = inpaint(image, mask, options);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  write_ppm(a.out, r.image);
  std::cout << "psnr=" << r.metrics.psnr << " mse=" << r.metrics.mse << " rse=" << r.metrics.rse
            << " spikiness=" << r.spikiness << " observed=" << r.observed << " iterations=" << r.solve.iterations
            << " converged=" << (r.solve.converged ? 1 : 0) << "\n";
  for (const auto& w : r.solve.warnings) std::cerr << "warning: " << w << "\n";
  return r.solve.converged ? kOk : kNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternion matrix completion: experiment sweeps and color image inpainting"};
  app.require_subcommand(1);

  std::string config_path;
  std::string csv_out;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  sweep->add_option("--config", config_path, "JSON experiment config")->required();
  sweep->add_option("--out", csv_out, "CSV output path (default: standard output)");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 1024));

  InpaintArgs ia;
  auto* inp = app.add_subcommand("inpaint", "Reconstruct a partially observed image");
  inp->add_option("--config", ia.config, "JSON preset; keys are flag names, flags given here win");
  inp->add_option("--image", ia.image, "Input image (binary PPM)");
  auto* mask_opt = inp->add_option("--mask", ia.mask, "Mask (binary PGM, 255 = observed, 0 = missing)");
  auto* frac_opt = inp->add_option("--mask-frac", ia.mask_frac, "Observed fraction")->check(CLI::Range(0.0, 1.0));
  inp->add_option("--mask-seed", ia.mask_seed, "Seed for --mask-frac")->needs(frac_opt);
  mask_opt->excludes(frac_opt);
  inp->add_option("--noise-cov", ia.noise_cov, "Noise covariance s11,s12,s13,s22,s23,s33 (enables the noisy model)");
  inp->add_option("--noise-seed", ia.noise_seed, "Seed of the simulated noise");
  inp->add_option("--gamma1", ia.gamma1, "Weight on W_s")->check(CLI::Range(0.0, 1.0));
  inp->add_option("--gamma2", ia.gamma2, "Weight on W_c")->check(CLI::Range(0.0, 1.0));
  inp->add_option("--c-lambda", ia.c_lambda, "Regularization constant C(lambda)")->check(CLI::PositiveNumber);
  inp->add_option("--alpha", ia.alpha, "Max-norm bound")->check(CLI::PositiveNumber);
  inp->add_option("--tol", ia.tol, "Relative ADMM tolerance")->check(CLI::PositiveNumber);
  inp->add_option("--max-iter", ia.max_iter, "ADMM iteration limit")->check(CLI::Range(1, 10000000));
  inp->add_option("--out", ia.out, "Output image (binary PPM)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (sweep->parsed()) return run_sweep_command(config_path, csv_out, jobs);
    if (!ia.config.empty()) merge_inpaint_config(ia, *inp);
    if (ia.gamma1 + ia.gamma2 > 1.0) throw ConfigError("--gamma1 + --gamma2 must not exceed 1");
    return run_inpaint_command(ia);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
