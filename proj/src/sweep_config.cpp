#include "quatcomp/sweep_config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <set>

#include "json.hpp"

#include "quatcomp/errors.hpp"
#include "quatcomp/weights.hpp"

namespace quatcomp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& problem) {
  throw ConfigError(path + ": " + problem);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "must be an object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) fail(path + "." + key, "unknown field");
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0)) fail(path, "must be positive");
  return x;
}

long long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "must be an integer");
  return v.get<long long>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "must be true or false");
  return v.get<bool>();
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "must be a string");
  return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<double> unit_list(const json& v, const std::string& path) {
  std::vector<double> out = number_list(v, path);
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (out[k] < 0 || out[k] > 1) fail(path + "[" + std::to_string(k) + "]", "must lie in [0, 1]");
  }
  return out;
}

SamplingKind scheme(const json& v, const std::string& path) {
  const std::string s = string(v, path);
  if (s == "with_replacement" || s == "Y") return SamplingKind::with_replacement;
  if (s == "without_replacement" || s == "N") return SamplingKind::without_replacement;
  fail(path, "expected \"with_replacement\" or \"without_replacement\"");
}

void parse_experiment(const json& j, SweepConfig& c) {
  const std::string p = "experiment";
  check_keys(j, p, {"name", "model"});
  if (j.contains("name")) c.name = string(j["name"], p + ".name");
  if (c.name.empty() || c.name.find_first_of(",\"\n\r") != std::string::npos) {
    fail(p + ".name", "must be a nonempty string without commas, quotes or newlines");
  }
  if (j.contains("model")) {
    const std::string m = string(j["model"], p + ".model");
    if (m == "clean") {
      c.model = Model::clean;
    } else if (m == "noisy") {
      c.model = Model::noisy;
    } else {
      fail(p + ".model", "expected \"clean\" or \"noisy\"");
    }
  }
}

void parse_matrix(const json& j, SweepConfig& c) {
  const std::string p = "matrix";
  check_keys(j, p, {"generator", "shapes", "q", "spikiness_factors", "fixed"});
  if (j.contains("generator")) {
    const std::string g = string(j["generator"], p + ".generator");
    if (g == "exact") {
      c.generator = Generator::exact;
    } else if (g == "approx") {
      c.generator = Generator::approx;
    } else {
      fail(p + ".generator", "expected \"exact\" or \"approx\"");
    }
  }
  if (!j.contains("shapes")) fail(p + ".shapes", "required");
  const json& shapes = j["shapes"];
  if (!shapes.is_array()) fail(p + ".shapes", "must be an array of [d1, d2, r] triples");
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const std::string sp = p + ".shapes[" + std::to_string(k) + "]";
    if (!shapes[k].is_array() || shapes[k].size() != 3) fail(sp, "must be [d1, d2, r]");
    Shape s{integer(shapes[k][0], sp + "[0]"), integer(shapes[k][1], sp + "[1]"),
            integer(shapes[k][2], sp + "[2]")};
    if (s.d1 < 1 || s.d2 < 1) fail(sp, "dimensions must be positive");
    if (s.r < 2 || s.r > std::min(s.d1, s.d2)) fail(sp + "[2]", "rank must lie in [2, min(d1, d2)]");
    c.shapes.push_back(s);
  }
  if (j.contains("q")) {
    c.q = number(j["q"], p + ".q");
    if (c.q < 0 || c.q >= 1) fail(p + ".q", "must lie in [0, 1)");
  }
  if (j.contains("spikiness_factors")) {
    c.spikiness_factors = number_list(j["spikiness_factors"], p + ".spikiness_factors");
    for (std::size_t k = 0; k < c.spikiness_factors.size(); ++k) {
      if (c.spikiness_factors[k] < 1) {
        fail(p + ".spikiness_factors[" + std::to_string(k) + "]", "must be >= 1");
      }
    }
  }
  if (j.contains("fixed")) c.fixed_matrix = boolean(j["fixed"], p + ".fixed");
}

void parse_sampling(const json& j, SweepConfig& c) {
  const std::string p = "sampling";
  check_keys(j, p, {"schemes", "n", "n_rescaled"});
  if (j.contains("schemes")) {
    const json& s = j["schemes"];
    if (!s.is_array()) fail(p + ".schemes", "must be an array");
    c.schemes.clear();
    for (std::size_t k = 0; k < s.size(); ++k) {
      c.schemes.push_back(scheme(s[k], p + ".schemes[" + std::to_string(k) + "]"));
    }
  }
  if (j.contains("n") == j.contains("n_rescaled")) fail(p, "exactly one of n and n_rescaled is required");
  if (j.contains("n")) {
    const json& n = j["n"];
    if (!n.is_array()) fail(p + ".n", "must be an array of positive integers");
    for (std::size_t k = 0; k < n.size(); ++k) {
      const long long v = integer(n[k], p + ".n[" + std::to_string(k) + "]");
      if (v < 0) fail(p + ".n[" + std::to_string(k) + "]", "must be nonnegative");
      c.n_values.push_back(static_cast<double>(v));
    }
  } else {
    c.n_is_rescaled = true;
    c.n_values = number_list(j["n_rescaled"], p + ".n_rescaled");
    for (std::size_t k = 0; k < c.n_values.size(); ++k) {
      if (!(c.n_values[k] > 0)) fail(p + ".n_rescaled[" + std::to_string(k) + "]", "must be positive");
    }
  }
}

void parse_noise(const json& j, SweepConfig& c) {
  const std::string p = "noise";
  if (j.is_null()) return;
  check_keys(j, p, {"covariance", "scales"});
  if (!j.contains("covariance")) fail(p + ".covariance", "required");
  const json& cov = j["covariance"];
  Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
  if (cov.is_array() && cov.size() == 3 && cov[0].is_number()) {
    for (int k = 0; k < 3; ++k) sigma(k, k) = positive(cov[k], p + ".covariance[" + std::to_string(k) + "]");
  } else if (cov.is_array() && cov.size() == 3) {
    for (int r = 0; r < 3; ++r) {
      const std::string rp = p + ".covariance[" + std::to_string(r) + "]";
      if (!cov[r].is_array() || cov[r].size() != 3) fail(rp, "must have 3 entries");
      for (int col = 0; col < 3; ++col) sigma(r, col) = number(cov[r][col], rp + "[" + std::to_string(col) + "]");
    }
  } else {
    fail(p + ".covariance", "must be 3 variances or a 3x3 matrix");
  }
  try {
    NoiseCovariance check(sigma);
  } catch (const std::exception& e) {
    fail(p + ".covariance", e.what());
  }
  c.noise_covariance = sigma;
  if (j.contains("scales")) {
    c.noise_scales = number_list(j["scales"], p + ".scales");
    for (std::size_t k = 0; k < c.noise_scales.size(); ++k) {
      if (!(c.noise_scales[k] > 0)) fail(p + ".scales[" + std::to_string(k) + "]", "must be positive");
    }
  }
}

void parse_weights(const json& j, SweepConfig& c) {
  const std::string p = "weights";
  check_keys(j, p, {"gamma1", "gamma2", "c_lambda"});
  if (j.contains("gamma1")) c.gamma1 = unit_list(j["gamma1"], p + ".gamma1");
  if (j.contains("gamma2")) c.gamma2 = unit_list(j["gamma2"], p + ".gamma2");
  if (j.contains("c_lambda")) {
    c.c_lambda = number_list(j["c_lambda"], p + ".c_lambda");
    for (std::size_t k = 0; k < c.c_lambda.size(); ++k) {
      if (!(c.c_lambda[k] > 0)) fail(p + ".c_lambda[" + std::to_string(k) + "]", "must be positive");
    }
  }
}

void parse_solver(const json& j, SweepConfig& c) {
  const std::string p = "solver";
  check_keys(j, p, {"mu", "mu_adapt", "tol_rel", "max_iter", "alpha"});
  if (j.contains("mu")) c.mu = positive(j["mu"], p + ".mu");
  if (j.contains("mu_adapt")) c.mu_adapt = boolean(j["mu_adapt"], p + ".mu_adapt");
  if (j.contains("tol_rel")) c.tol_rel = positive(j["tol_rel"], p + ".tol_rel");
  if (j.contains("max_iter")) {
    const long long m = integer(j["max_iter"], p + ".max_iter");
    if (m < 1 || m > 10'000'000) fail(p + ".max_iter", "must lie in [1, 1e7]");
    c.max_iter = static_cast<int>(m);
  }
  if (j.contains("alpha")) {
    const json& a = j["alpha"];
    if (a.is_string()) {
      if (a.get<std::string>() != "truth") fail(p + ".alpha", "must be a positive number or \"truth\"");
      c.alpha.reset();
    } else {
      c.alpha = positive(a, p + ".alpha");
    }
  }
}

void parse_output(const json& j, SweepConfig& c) {
  const std::string p = "output";
  check_keys(j, p, {"mean_rows", "min_rows", "record_runtime"});
  if (j.contains("mean_rows")) c.mean_rows = boolean(j["mean_rows"], p + ".mean_rows");
  if (j.contains("min_rows")) c.min_rows = boolean(j["min_rows"], p + ".min_rows");
  if (j.contains("record_runtime")) c.record_runtime = boolean(j["record_runtime"], p + ".record_runtime");
}

void parse_seeds(const json& j, SweepConfig& c) {
  const std::string p = "seeds";
  check_keys(j, p, {"master", "count"});
  if (j.contains("master")) {
    if (!j["master"].is_number_unsigned()) fail(p + ".master", "must be a nonnegative integer");
    c.master_seed = j["master"].get<std::uint64_t>();
  }
  if (j.contains("count")) {
    const long long n = integer(j["count"], p + ".count");
    if (n < 0 || n > 100000) fail(p + ".count", "must lie in [0, 100000]");
    c.seed_count = static_cast<int>(n);
  }
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail("$", std::string("invalid JSON: ") + e.what());
  }
  check_keys(root, "$", {"experiment", "matrix", "sampling", "noise", "weights", "solver", "output", "seeds"});
  SweepConfig c;
  for (const char* required : {"experiment", "matrix", "sampling"}) {
    if (!root.contains(required)) fail(required, "required section");
  }
  parse_experiment(root["experiment"], c);
  parse_matrix(root["matrix"], c);
  parse_sampling(root["sampling"], c);
  if (root.contains("noise")) parse_noise(root["noise"], c);
  if (root.contains("weights")) parse_weights(root["weights"], c);
  if (root.contains("solver")) parse_solver(root["solver"], c);
  if (root.contains("output")) parse_output(root["output"], c);
  if (root.contains("seeds")) parse_seeds(root["seeds"], c);

  if (c.model == Model::clean && c.noise_covariance) fail("noise", "the clean model takes no noise");
  if (c.model == Model::noisy && !c.noise_covariance) fail("noise", "the noisy model needs a covariance");
  if (c.model == Model::clean) {
    c.gamma1 = {0.0};
    c.gamma2 = {0.0};
    c.c_lambda = {0.0};
    c.noise_scales = {1.0};
  }
  return c;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_sweep_config(text);
}

}  // namespace quatcomp
