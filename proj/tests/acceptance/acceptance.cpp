// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "entry_instances.hpp"
#include "oracles.hpp"
#include "quatcomp/feasible_set.hpp"
#include "quatcomp/image_io.hpp"
#include "quatcomp/inpaint.hpp"
#include "quatcomp/metrics.hpp"
#include "quatcomp/qsvd.hpp"
#include "quatcomp/solver.hpp"
#include "quatcomp/sweep.hpp"
#include "quatcomp/synth.hpp"
#include "quatcomp/weights.hpp"

using namespace quatcomp;

namespace {

const std::filesystem::path kSource = QUATCOMP_SOURCE_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::Index uniform_size(Rng& rng, Eigen::Index hi) { return 1 + static_cast<Eigen::Index>(rng.uniform_index(hi)); }

// 1. Norm inequalities, 100 random matrices each.
Verdict norm_inequalities() {
  Rng rng(1001);
  const double slack = 1e-9;
  int violations[4] = {0, 0, 0, 0};
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d1 = uniform_size(rng, 40);
    const Eigen::Index d2 = uniform_size(rng, 30);
    const Eigen::Index r = uniform_size(rng, std::min(d1, d2));
    const QMatrixd a = oracle::random_qmatrix(rng, d1, r) * oracle::random_qmatrix(rng, r, d2);
    const double nuc = oracle::nuclear_norm(a);
    if (nuc > std::sqrt(static_cast<double>(rank(a))) * fro_norm(a) * (1 + slack)) ++violations[0];
  }
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d1 = uniform_size(rng, 40);
    const Eigen::Index d2 = uniform_size(rng, 30);
    const QMatrixd a = oracle::random_qmatrix(rng, d1, d2);
    const QMatrixd b = oracle::random_qmatrix(rng, d1, d2);
    if (inner(a, b).norm() > op_norm(a) * oracle::nuclear_norm(b) * (1 + slack)) ++violations[1];
  }
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d1 = uniform_size(rng, 40);
    const Eigen::Index d2 = uniform_size(rng, 30);
    const QMatrixd a = oracle::random_qmatrix(rng, d1, d2);
    Eigen::MatrixXcd c01(d1, d2);
    c01.real() = a.re();
    c01.imag() = a.im_i();
    // A2 j + A3 k = (A2 + A3 i) j has the singular values of A2 + A3 i.
    Eigen::MatrixXcd c23(d1, d2);
    c23.real() = a.im_j();
    c23.imag() = a.im_k();
    const double bound = std::max(oracle::complex_nuclear_norm(c01), oracle::complex_nuclear_norm(c23));
    if (nuclear_norm(a) < bound * (1 - slack)) ++violations[2];
  }
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d1 = uniform_size(rng, 40);
    const Eigen::Index d2 = uniform_size(rng, 30);
    const QMatrixd a = oracle::random_qmatrix(rng, d1, d2);
    Eigen::Vector4d nu(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    nu.normalize();
    const Eigen::MatrixXd mix = nu(0) * a.re() + nu(1) * a.im_i() + nu(2) * a.im_j() + nu(3) * a.im_k();
    if (nuclear_norm(a) < oracle::real_nuclear_norm(mix) * (1 - slack)) ++violations[3];
  }
  const int total = violations[0] + violations[1] + violations[2] + violations[3];
  return {total == 0, fmt("violations rank bound=%d trace duality=%d complex halves=%d component mix=%d", violations[0], violations[1],
                          violations[2], violations[3])};
}

// 2. The 2x2 example where dropping the real part raises the rank.
Verdict real_part_rank() {
  QMatrixd a(2, 2);
  a.set(0, 0, {1, 3, 0, 0});
  a.set(0, 1, {0, 0, -3, 1});
  a.set(1, 0, {1, 0, 3, 0});
  a.set(1, 1, {0, 3, 0, 1});
  QMatrixd ap = a;
  ap.re().setZero();
  const Eigen::Index ra = rank(a);
  const Eigen::Index rp = rank(ap);
  const double na = nuclear_norm(a);
  const double np = nuclear_norm(ap);
  return {ra == 1 && rp == 2 && np > na, fmt("rank(A)=%ld rank(A_p)=%ld nuc(A)=%.6f nuc(A_p)=%.6f", static_cast<long>(ra),
                                             static_cast<long>(rp), na, np)};
}

// 3. QSVD reconstruction, unitarity and adjoint pairing.
Verdict qsvd_fidelity() {
  Rng rng(1003);
  double worst_rec = 0, worst_unit = 0, worst_pair = 0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index d1 = uniform_size(rng, 64);
    const Eigen::Index d2 = uniform_size(rng, 48);
    QMatrixd a = oracle::random_qmatrix(rng, d1, d2);
    if (t % 4 == 0) {
      const Eigen::Index r = uniform_size(rng, std::min<Eigen::Index>({d1, d2, 5}));
      a = oracle::random_qmatrix(rng, d1, r) * oracle::random_qmatrix(rng, r, d2);
    }
    const Qsvd<double> s = qsvd(a);
    worst_rec = std::max(worst_rec, fro_norm(reconstruct(s) - a) / fro_norm(a));
    worst_unit = std::max({worst_unit, fro_norm(s.U.adjoint() * s.U - QMatrixd::Identity(d1)),
                           fro_norm(s.V.adjoint() * s.V - QMatrixd::Identity(d2))});
    const Eigen::VectorXd sv = adjoint_singular_values(a);
    for (Eigen::Index k = 0; k + 1 < sv.size(); k += 2) {
      worst_pair = std::max(worst_pair, std::abs(sv(k) - sv(k + 1)) / sv(0));
    }
  }
  return {worst_rec <= 1e-9 && worst_unit <= 1e-9 && worst_pair <= 1e-8,
          fmt("max rel reconstruction %.2e, unitarity %.2e, pairing gap %.2e sigma1", worst_rec, worst_unit, worst_pair)};
}

// 4. svt, projection and entry_qp against independent oracles.
Verdict oracles() {
  Rng rng(1004);
  int svt_bad = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const QMatrixd a = oracle::random_qmatrix(rng, uniform_size(rng, 8), uniform_size(rng, 8));
    const double tau = (0.1 + 0.8 * rng.uniform()) * op_norm(a);
    const QMatrixd x = svt(a, tau).matrix;
    auto objective = [&](const QMatrixd& y) { return 0.5 * (y - a).squared_norm() + tau * oracle::nuclear_norm(y); };
    const double best = objective(x);
    for (int t = 0; t < 100; ++t) {
      const QMatrixd y = x + 1e-3 * oracle::random_qmatrix(rng, a.rows(), a.cols());
      if (objective(y) < best - 1e-12) {
        ++svt_bad;
        break;
      }
    }
  }

  double grid_err = 0;
  for (int t = 0; t < 100; ++t) {
    Eigen::Vector3d d(0.1 + rng.uniform(), 0.1 + rng.uniform(), 0.1 + rng.uniform());
    d *= 3.0 / d.sum();
    const Eigen::Matrix3d wm = d.asDiagonal();
    const Eigen::Vector3d v(-2 + 4 * rng.uniform(), -2 + 4 * rng.uniform(), -2 + 4 * rng.uniform());
    const double alpha = 0.5 + 2.5 * rng.uniform();
    const Eigen::Vector3d got = project_feasible(Quaterniond::pure(v), alpha, ChannelWeight(wm)).imag();
    grid_err = std::max(grid_err, (got - oracle::grid_projection(v, alpha, wm)).norm());
  }

  double pg_err = 0;
  for (int t = 0; t < 100; ++t) {
    const oracle::EntryInstance e = oracle::random_entry_instance(rng);
    Eigen::Matrix3d h;
    Eigen::Vector3d g;
    oracle::entry_qp_terms(e, h, g);
    const Eigen::Vector3d got = entry_qp(e.values, e.n_total, ChannelWeight(e.w), e.mu, e.v, e.alpha).imag();
    pg_err = std::max(pg_err, (got - oracle::projected_gradient(h, g, e.w, e.alpha)).norm());
  }

  double kkt = 0;
  for (int t = 0; t < 1000; ++t) {
    const oracle::EntryInstance e = oracle::random_entry_instance(rng);
    Eigen::Matrix3d h;
    Eigen::Vector3d g;
    oracle::entry_qp_terms(e, h, g);
    const Eigen::Vector3d x = entry_qp(e.values, e.n_total, ChannelWeight(e.w), e.mu, e.v, e.alpha).imag();
    kkt = std::max(kkt, oracle::kkt_violation(x, h, g, e.w, e.alpha));
  }
  return {svt_bad == 0 && grid_err <= 1e-4 && pg_err <= 1e-6 && kkt <= 1e-8,
          fmt("svt failures %d/50, grid %.2e, projected gradient %.2e, KKT %.2e", svt_bad, grid_err, pg_err, kkt)};
}

SweepResult sweep(const char* name) {
  return run_sweep(load_sweep_config(kSource / "configs" / (std::string(name) + ".json")), 1);
}

std::vector<const SweepRow*> mean_rows(const SweepResult& r) {
  std::vector<const SweepRow*> out;
  for (const auto& row : r.rows) {
    if (row.kind == RowKind::mean) out.push_back(&row);
  }
  return out;
}

std::size_t unconverged(const SweepResult& r) { return r.solves - r.converged_solves; }

// Mean MSE per (nominal n_re, shape); rows carry the realised n_re, so they
// are matched to the nearest nominal value.
Verdict collapse(const char* name, double envelope, double q) {
  const SweepConfig config = load_sweep_config(kSource / "configs" / (std::string(name) + ".json"));
  const SweepResult r = run_sweep(config, 1);
  std::map<double, std::vector<double>> by_nre;
  for (const SweepRow* row : mean_rows(r)) {
    double nominal = config.n_values.front();
    for (double v : config.n_values) {
      if (std::abs(v - row->n_rescaled) < std::abs(nominal - row->n_rescaled)) nominal = v;
    }
    by_nre[nominal].push_back(row->mse.value_or(INFINITY));
  }
  bool pass = true;
  std::ostringstream os;
  os.precision(3);
  for (const auto& [nre, mses] : by_nre) {
    if (nre < 1.5) continue;
    const double hi = *std::max_element(mses.begin(), mses.end());
    const double lo = *std::min_element(mses.begin(), mses.end());
    const double bound = 3 * bound_curve(nre, envelope, q);
    const bool ok = hi / lo <= 2.5 && hi <= bound;
    pass = pass && ok;
    os << " n_re=" << nre << ": max/min=" << hi / lo << " max=" << hi << " bound=" << bound << (ok ? "" : " (fail)")
       << ";";
  }
  os << " unconverged " << unconverged(r) << "/" << r.solves;
  return {pass, os.str()};
}

// 7. Sampling without replacement is at least as good at matched n.
Verdict fig4_right() {
  const SweepResult r = sweep("fig4r");
  std::map<std::pair<double, double>, std::map<SamplingKind, double>> mse;
  for (const SweepRow* row : mean_rows(r)) mse[{row->noise_scale, row->n}][row->scheme] = row->mse.value_or(INFINITY);
  bool pass = !mse.empty();
  std::ostringstream os;
  os.precision(3);
  for (const auto& [key, m] : mse) {
    const double without = m.at(SamplingKind::without_replacement);
    const double with = m.at(SamplingKind::with_replacement);
    pass = pass && without <= with;
    os << " scale=" << key.first << " n=" << key.second << ": N=" << without << " Y=" << with << ";";
  }
  os << " unconverged " << unconverged(r) << "/" << r.solves;
  return {pass, os.str()};
}

// min over c_lambda of the mean MSE, per (n, gamma) with gamma selected by `gamma`.
std::map<double, std::map<double, double>> min_over_lambda(const SweepResult& r,
                                                           double SweepRow::*gamma) {
  std::map<double, std::map<double, double>> out;
  for (const SweepRow* row : mean_rows(r)) {
    const double m = row->mse.value_or(INFINITY);
    auto [it, fresh] = out[row->n].try_emplace(row->*gamma, m);
    if (!fresh) it->second = std::min(it->second, m);
  }
  return out;
}

bool interior(double g) { return g > 0.1 && g < 0.9; }

// 8. Noise rebalance: an interior gamma1 is strictly best.
Verdict fig5() {
  const SweepResult r = sweep("fig5");
  const auto best = min_over_lambda(r, &SweepRow::gamma1);
  bool pass = best.size() == 2;
  std::ostringstream os;
  os.precision(4);
  for (const auto& [n, by_gamma] : best) {
    const auto arg = std::min_element(by_gamma.begin(), by_gamma.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
    const bool ok = interior(arg->first) && arg->second < by_gamma.at(0.0) && arg->second < by_gamma.at(1.0);
    pass = pass && ok;
    os << " n=" << n << ": best gamma1=" << arg->first << " mse=" << arg->second << " vs gamma1=0 "
       << by_gamma.at(0.0) << ", gamma1=1 " << by_gamma.at(1.0) << ";";
  }
  os << " unconverged " << unconverged(r) << "/" << r.solves;
  return {pass, os.str()};
}

// 9. Decorrelation: some interior gamma2 beats gamma2 = 0; gamma2 = 1 does not
// win at n = 900.
Verdict fig6() {
  const SweepResult r = sweep("fig6");
  const auto best = min_over_lambda(r, &SweepRow::gamma2);
  bool pass = best.size() == 2;
  std::ostringstream os;
  os.precision(4);
  for (const auto& [n, by_gamma] : best) {
    double interior_best = INFINITY, interior_arg = -1;
    for (const auto& [g, m] : by_gamma) {
      if (interior(g) && m < interior_best) {
        interior_best = m;
        interior_arg = g;
      }
    }
    bool ok = interior_best < by_gamma.at(0.0);
    const auto arg = std::min_element(by_gamma.begin(), by_gamma.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
    if (n == 900) ok = ok && arg->first != 1.0;
    pass = pass && ok;
    os << " n=" << n << ": gamma2=" << interior_arg << " mse=" << interior_best << " vs gamma2=0 " << by_gamma.at(0.0)
       << ", gamma2=1 " << by_gamma.at(1.0) << ";";
  }
  os << " unconverged " << unconverged(r) << "/" << r.solves;
  return {pass, os.str()};
}

// 10. W_c minimizes Tr(W Sigma W) over trace-3 weights.
Verdict decorrelating_weight() {
  Rng rng(1010);
  int losses = 0;
  double margin = INFINITY;
  for (int s = 0; s < 10; ++s) {
    const NoiseCovariance sigma(oracle::random_spd(rng));
    const double best = weighted_noise_trace(wc_decorrelate(sigma), sigma);
    for (int t = 0; t < 100; ++t) {
      const double other = weighted_noise_trace(ChannelWeight(oracle::random_trace3_pd(rng)), sigma);
      margin = std::min(margin, other - best);
      if (!(other > best + 1e-9)) ++losses;
    }
  }
  return {losses == 0, fmt("losses %d/1000, smallest margin %.3e", losses, margin)};
}

ObservationSet draw(const QMatrixd& truth, SamplingKind kind, std::size_t n, std::uint64_t seed,
                    const std::optional<NoiseCovariance>& noise) {
  const auto pos = sample({kind, seed}, truth.rows(), truth.cols(), n);
  return observe(truth, pos, kind, noise, seed + 7919);
}

// 11. Cone conditions of the error on clean and corrupted solves.
Verdict cone() {
  struct Clean {
    Eigen::Index d, r;
    std::size_t n;
  };
  int clean_runs = 0, clean_bad = 0;
  double clean_worst = 0;
  for (const Clean c : {Clean{30, 5, 250}, Clean{30, 5, 350}, Clean{30, 5, 450}, Clean{60, 2, 300},
                        Clean{60, 2, 450}, Clean{60, 2, 600}}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const QMatrixd truth = gen_exact(c.d, c.d, c.r, 100 * seed + c.d);
      SolverConfig sc;
      sc.alpha = max_norm(truth);
      sc.mu = 10;
      sc.tol_rel = 1e-6;
      sc.max_iter = 3000;
      const CompletionResult res =
          complete_clean(draw(truth, SamplingKind::without_replacement, c.n, seed, std::nullopt), sc);
      if (!res.converged) continue;
      ++clean_runs;
      const QMatrixd delta = res.theta_hat - truth;
      const double fro = fro_norm(delta);
      const double ratio = fro == 0 ? 0 : cone_ratio(nuclear_norm(delta), fro, static_cast<double>(c.r), 0, 5);
      clean_worst = std::max(clean_worst, ratio);
      if (ratio > 1) ++clean_bad;
    }
  }

  Eigen::Matrix3d fig6;
  fig6 << 0.70, 0.50, 0.50, 0.50, 0.70, 0.66, 0.50, 0.66, 0.70;
  const NoiseCovariance sigmas[4] = {NoiseCovariance(0.25 * Eigen::Matrix3d::Identity()),
                                     NoiseCovariance::diagonal(1.5, 0.5, 0.2), NoiseCovariance(fig6),
                                     NoiseCovariance(Eigen::Matrix3d::Identity())};
  const std::size_t ns[4] = {300, 500, 700, 900};
  int noisy_runs = 0, noisy_ok = 0;
  double noisy_worst = 0;
  for (int k = 0; k < 100; ++k) {
    const NoiseCovariance& sigma = sigmas[k % 4];
    const ChannelWeight w = k % 4 == 1 ? ws_rebalance(sigma) : k % 4 == 2 ? wc_decorrelate(sigma)
                                                                          : ChannelWeight::identity();
    const std::size_t n = ns[(k / 4) % 4];
    const Eigen::Index d = 30, r = 5;
    const QMatrixd truth = gen_exact(d, d, r, 5000 + static_cast<std::uint64_t>(k));
    const auto kind = k % 2 ? SamplingKind::with_replacement : SamplingKind::without_replacement;
    const ObservationSet obs = draw(truth, kind, n, 9000 + static_cast<std::uint64_t>(k), sigma);
    SolverConfig sc;
    sc.weight = w;
    sc.alpha = weighted_max_norm(truth, w);
    sc.lambda = lambda_rule(w, sigma, obs.size(), d, d, 4.0);
    sc.mu = 10;
    sc.tol_rel = 1e-5;
    const CompletionResult res = complete_noisy(obs, sc);
    ++noisy_runs;
    const QMatrixd delta = res.theta_hat - truth;
    const double ratio = cone_ratio(nuclear_norm(delta), fro_norm(delta), static_cast<double>(r), 0, 10);
    noisy_worst = std::max(noisy_worst, ratio);
    if (ratio <= 1) ++noisy_ok;
  }
  const bool pass = clean_runs > 0 && clean_bad == 0 && noisy_ok >= 95;
  return {pass, fmt("clean: %d/%d converged solves violate (worst ratio %.3f); corrupted: %d/%d hold (worst ratio %.3f)",
                    clean_bad, clean_runs, clean_worst, noisy_ok, noisy_runs, noisy_worst)};
}

// 12. Clean inpainting of the bundled images.
Verdict images() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(kSource / "data" / "images")) {
    if (e.path().extension() == ".ppm") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  bool pass = !files.empty();
  std::ostringstream os;
  os.precision(4);
  for (const auto& f : files) {
    const RgbImage image = read_ppm(f);
    const auto t0 = std::chrono::steady_clock::now();
    const InpaintResult r = inpaint(image, random_mask(image.width, image.height, 0.85, 1), {});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    GrayImage full{image.width, image.height, std::vector<std::uint8_t>(image.data.size() / 3, 255)};
    const bool exact = inpaint(image, full, {}).image == image;
    const bool ok = image.width == 128 && image.height == 128 && r.metrics.psnr >= 30 && exact && seconds < 300;
    pass = pass && ok;
    os << " " << f.filename().string() << ": psnr=" << r.metrics.psnr << " dB, " << seconds
       << " s, full mask " << (exact ? "bit-exact" : "differs") << ";";
  }
  return {pass, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
    double limit_s;
  };
  const std::vector<Criterion> criteria = {
      {1, "norm inequalities", norm_inequalities, 30},
      {2, "real part carries the low rank", real_part_rank, 0},
      {3, "qsvd fidelity", qsvd_fidelity, 0},
      {4, "prox and projection oracles", oracles, 0},
      {5, "fig1 exact low rank collapse", [] { return collapse("fig1", 0.17, 0.0); }, 1800},
      {6, "fig2 approximate low rank collapse", [] { return collapse("fig2", 0.15, 0.5); }, 0},
      {7, "fig4 right sampling schemes", fig4_right, 0},
      {8, "fig5 noise rebalance", fig5, 0},
      {9, "fig6 decorrelation", fig6, 0},
      {10, "decorrelating weight minimizes the noise trace", decorrelating_weight, 0},
      {11, "cone conditions", cone, 0},
      {12, "image pipeline", images, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && seconds >= c.limit_s) {
      v.pass = false;
      v.detail += fmt(" (over the %.0f s limit)", c.limit_s);
    }
    if (!v.pass) ++failed;
    std::printf("%s %2d %s [%.1f s]:%s%s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                v.detail.empty() || v.detail[0] == ' ' ? "" : " ", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
