#include "quatcomp/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "quatcomp/channel_weight.hpp"
#include "quatcomp/metrics.hpp"
#include "quatcomp/random.hpp"
#include "quatcomp/solver.hpp"
#include "quatcomp/synth.hpp"
#include "quatcomp/weights.hpp"

namespace quatcomp {

const char* const kCsvHeader =
    "experiment,d1,d2,r,q,rho,n,n_rescaled,scheme,gamma1,gamma2,c_lambda,seed,mse,rse,psnr,"
    "spikiness,iterations,converged,runtime_ms,f1_diag,f2_diag,noise_scale";

namespace {

enum Stream : std::uint64_t { kMatrixStream = 1, kSampleStream = 2, kNoiseStream = 3 };

std::uint64_t seed_of(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t s = master;
  for (std::uint64_t k : keys) s = derive_seed(s, k);
  return s;
}

struct Combo {
  double gamma1;
  double gamma2;
  double c_lambda;
};

std::vector<Combo> combos(const SweepConfig& c) {
  std::vector<Combo> out;
  for (double g1 : c.gamma1) {
    for (double g2 : c.gamma2) {
      if (g1 + g2 > 1.0 + 1e-12) continue;
      for (double cl : c.c_lambda) out.push_back({g1, g2, cl});
    }
  }
  return out;
}

// One data instance: (shape, spikiness factor, noise scale, scheme, n, seed).
struct Task {
  std::size_t shape;
  std::size_t factor;
  std::size_t scale;
  std::size_t scheme;
  std::size_t n_index;
  int seed;
};

std::vector<SweepRow> run_task(const SweepConfig& c, const Task& t, const std::vector<Combo>& grid) {
  const Shape& shape = c.shapes[t.shape];
  SweepRow base;
  base.experiment = c.name;
  base.d1 = shape.d1;
  base.d2 = shape.d2;
  base.r = shape.r;
  base.q = c.q;
  base.scheme = c.schemes[t.scheme];
  base.seed = t.seed;
  base.noise_scale = c.noise_scales[t.scale];
  base.spikiness_factor = c.spikiness_factors[t.factor];

  std::vector<SweepRow> rows(grid.size(), base);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    rows[k].gamma1 = grid[k].gamma1;
    rows[k].gamma2 = grid[k].gamma2;
    if (c.model == Model::noisy) rows[k].c_lambda = grid[k].c_lambda;
  }
  auto fail_all = [&](const std::string& what) {
    for (auto& row : rows) {
      row.failed = true;
      row.error = what;
    }
    return rows;
  };

  QMatrixd theta;
  std::optional<ObservationSet> obs;
  try {
    const std::uint64_t matrix_seed =
        c.fixed_matrix ? seed_of(c.master_seed, {kMatrixStream, t.shape})
                       : seed_of(c.master_seed, {kMatrixStream, t.shape, static_cast<std::uint64_t>(t.seed)});
    theta = c.generator == Generator::exact ? gen_exact(shape.d1, shape.d2, shape.r, matrix_seed)
                                            : gen_approx(shape.d1, shape.d2, shape.r, matrix_seed);
    if (base.spikiness_factor > 1) theta = boost_spikiness(theta, base.spikiness_factor);
    const double rho = c.q == 0 ? static_cast<double>(shape.r) : schatten_q(theta, c.q);
    const double d = static_cast<double>(std::max(shape.d1, shape.d2));
    double n = c.n_values[t.n_index];
    if (c.n_is_rescaled) n = std::round(n / rescaled_n(1.0, d, rho, c.q));
    const double spiky = spikiness(theta);
    for (auto& row : rows) {
      row.rho = rho;
      row.n = n;
      row.n_rescaled = rescaled_n(n, d, rho, c.q);
      row.spikiness = spiky;
    }
    const auto positions =
        sample({base.scheme, seed_of(c.master_seed, {kSampleStream, t.shape, static_cast<std::uint64_t>(t.seed),
                                                    t.n_index})},
               shape.d1, shape.d2, static_cast<std::size_t>(n));
    std::optional<NoiseCovariance> noise;
    if (c.noise_covariance) noise = NoiseCovariance(*c.noise_covariance * base.noise_scale);
    obs = observe(theta, positions, base.scheme, noise,
                  seed_of(c.master_seed, {kNoiseStream, t.shape, static_cast<std::uint64_t>(t.seed), t.n_index}));
  } catch (const std::exception& e) {
    return fail_all(e.what());
  }

  for (std::size_t k = 0; k < grid.size(); ++k) {
    SweepRow& row = rows[k];
    try {
      SolverConfig sc;
      sc.mu = c.mu;
      sc.mu_adapt = c.mu_adapt;
      sc.tol_rel = c.tol_rel;
      sc.max_iter = c.max_iter;
      const auto start = std::chrono::steady_clock::now();
      CompletionResult res;
      if (c.model == Model::clean) {
        sc.alpha = c.alpha ? *c.alpha : max_norm(theta);
        res = complete_clean(*obs, sc);
        row.f1_diag = 1.0;
      } else {
        const NoiseCovariance sigma(*c.noise_covariance * base.noise_scale);
        sc.weight = combine(row.gamma1, row.gamma2, ws_rebalance(sigma), wc_decorrelate(sigma));
        sc.alpha = c.alpha ? *c.alpha : weighted_max_norm(theta, sc.weight);
        sc.lambda = obs->empty() ? 0.0
                                 : lambda_rule(sc.weight, sigma, obs->size(), shape.d1, shape.d2,
                                               grid[k].c_lambda);
        res = complete_noisy(*obs, sc);
        const BoundFactors f = bound_factors(sc.weight, sigma);
        row.f1_diag = f.f1;
        row.f2_diag = f.f2;
      }
      const auto stop = std::chrono::steady_clock::now();
      const ErrorMetrics m = error_metrics(res.theta_hat, theta);
      row.mse = m.mse;
      row.rse = m.rse;
      row.psnr = m.psnr;
      row.iterations = res.iterations;
      row.converged = res.converged ? 1.0 : 0.0;
      if (c.record_runtime) row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  }
  return rows;
}

std::optional<double> mean_of(const std::vector<const SweepRow*>& rows,
                              std::optional<double> SweepRow::*field) {
  double sum = 0;
  std::size_t count = 0;
  for (const SweepRow* r : rows) {
    if (!(r->*field)) continue;
    sum += *(r->*field);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

SweepRow aggregate(const std::vector<const SweepRow*>& seeds) {
  SweepRow out = *seeds.front();
  out.kind = RowKind::mean;
  out.seed = 0;
  out.error.clear();
  std::vector<const SweepRow*> ok;
  for (const SweepRow* r : seeds) {
    if (!r->failed) ok.push_back(r);
  }
  out.failed = ok.empty();
  double rho = 0, n = 0, n_re = 0, conv = 0;
  for (const SweepRow* r : seeds) {
    rho += r->rho;
    n += r->n;
    n_re += r->n_rescaled;
    conv += r->converged;
  }
  const double count = static_cast<double>(seeds.size());
  out.rho = rho / count;
  out.n = n / count;
  out.n_rescaled = n_re / count;
  out.converged = conv / count;
  out.mse = mean_of(ok, &SweepRow::mse);
  out.rse = mean_of(ok, &SweepRow::rse);
  out.psnr = mean_of(ok, &SweepRow::psnr);
  out.spikiness = mean_of(seeds, &SweepRow::spikiness);
  out.iterations = mean_of(ok, &SweepRow::iterations);
  out.runtime_ms = mean_of(ok, &SweepRow::runtime_ms);
  return out;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace

SweepResult run_sweep(const SweepConfig& c, int jobs, const ProgressFn& progress) {
  const std::vector<Combo> grid = combos(c);
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < c.shapes.size(); ++s) {
    for (std::size_t f = 0; f < c.spikiness_factors.size(); ++f) {
      for (std::size_t sc = 0; sc < c.noise_scales.size(); ++sc) {
        for (std::size_t k = 0; k < c.schemes.size(); ++k) {
          for (std::size_t ni = 0; ni < c.n_values.size(); ++ni) {
            for (int seed = 0; seed < c.seed_count; ++seed) tasks.push_back({s, f, sc, k, ni, seed});
          }
        }
      }
    }
  }
  SweepResult out;
  if (grid.empty() || tasks.empty()) return out;

  std::vector<std::vector<SweepRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      results[t] = run_task(c, tasks[t], grid);
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(finished, tasks.size());
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Tasks are laid out with the seed innermost, so each run of seed_count
  // consecutive tasks shares one parameter point.
  const auto seeds = static_cast<std::size_t>(c.seed_count);
  const std::size_t per_gamma = c.c_lambda.size();
  for (std::size_t first = 0; first < tasks.size(); first += seeds) {
    std::optional<SweepRow> best;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::vector<const SweepRow*> group;
      for (std::size_t s = 0; s < seeds; ++s) {
        const SweepRow& row = results[first + s][k];
        out.rows.push_back(row);
        group.push_back(&row);
        ++out.solves;
        if (!row.failed && row.converged > 0) ++out.converged_solves;
      }
      const SweepRow mean = aggregate(group);
      if (c.mean_rows) out.rows.push_back(mean);
      if (mean.mse && (!best || *mean.mse < *best->mse)) best = mean;
      const bool last_in_gamma = (k + 1) % per_gamma == 0;
      if (last_in_gamma) {
        if (c.min_rows && c.model == Model::noisy && per_gamma > 1 && best) {
          best->kind = RowKind::min;
          out.rows.push_back(*best);
        }
        best.reset();
      }
    }
  }
  return out;
}

std::string format_csv_row(const SweepRow& row) {
  std::string seed;
  switch (row.kind) {
    case RowKind::seed: seed = std::to_string(row.seed); break;
    case RowKind::mean: seed = "mean"; break;
    case RowKind::min: seed = "min"; break;
  }
  std::string converged;
  if (row.kind == RowKind::seed) {
    converged = row.failed ? "failed" : (row.converged > 0 ? "1" : "0");
  } else {
    converged = num(row.converged);
  }
  const std::string fields[] = {
      row.experiment,     std::to_string(row.d1), std::to_string(row.d2), std::to_string(row.r),
      num(row.q),         num(row.rho),           num(row.n),             num(row.n_rescaled),
      std::string(to_string(row.scheme)),         num(row.gamma1),        num(row.gamma2),
      num(row.c_lambda),  seed,                   num(row.mse),           num(row.rse),
      num(row.psnr),      num(row.spikiness),     num(row.iterations),    converged,
      num(row.runtime_ms), num(row.f1_diag),      num(row.f2_diag),       num(row.noise_scale)};
  std::string line = fields[0];
  for (std::size_t k = 1; k < std::size(fields); ++k) line += ',' + fields[k];
  return line;
}

void write_csv(std::ostream& out, const SweepResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& row : result.rows) out << format_csv_row(row) << '\n';
}

}  // namespace quatcomp
