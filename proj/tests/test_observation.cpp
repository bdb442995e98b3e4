#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "oracles.hpp"
#include "quatcomp/errors.hpp"
#include "quatcomp/observation.hpp"

using namespace quatcomp;

namespace {

QMatrixd constant_pixels(Eigen::Index d1, Eigen::Index d2) {
  QMatrixd t(d1, d2);
  for (Eigen::Index c = 0; c < d2; ++c) {
    for (Eigen::Index r = 0; r < d1; ++r) t.set(r, c, Quaterniond::pure(r + 1, c + 1, 7));
  }
  return t;
}

Eigen::Matrix3d empirical_covariance(const QMatrixd& theta, const ObservationSet& obs) {
  Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();
  for (const auto& e : obs.entries()) {
    const Eigen::Vector3d eps = e.value.imag() - theta(e.at.row, e.at.col).imag();
    acc += eps * eps.transpose();
  }
  return acc / static_cast<double>(obs.size());
}

}  // namespace

TEST_CASE("without replacement covers every position once when n = d1 d2") {
  const auto pos = sample({SamplingKind::without_replacement, 5}, 7, 9, 63);
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
  for (const auto& p : pos) {
    CHECK(p.row >= 0);
    CHECK(p.row < 7);
    CHECK(p.col >= 0);
    CHECK(p.col < 9);
    seen.insert({p.row, p.col});
  }
  CHECK(seen.size() == 63);
}

TEST_CASE("without replacement never repeats") {
  const auto pos = sample({SamplingKind::without_replacement, 6}, 30, 30, 400);
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
  for (const auto& p : pos) seen.insert({p.row, p.col});
  CHECK(seen.size() == 400);
}

TEST_CASE("with replacement is uniform") {
  const std::size_t n = 400000;
  const auto pos = sample({SamplingKind::with_replacement, 7}, 2, 2, n);
  std::array<double, 4> freq{};
  for (const auto& p : pos) freq[static_cast<std::size_t>(p.row + 2 * p.col)] += 1.0 / n;
  for (double f : freq) {
    CHECK(f >= 0.24);
    CHECK(f <= 0.26);
  }
}

TEST_CASE("sampling is deterministic in its seed") {
  for (auto kind : {SamplingKind::with_replacement, SamplingKind::without_replacement}) {
    const auto a = sample({kind, 99}, 20, 30, 250);
    const auto b = sample({kind, 99}, 20, 30, 250);
    const auto c = sample({kind, 100}, 20, 30, 250);
    CHECK(a == b);
    CHECK(a != c);
  }
}

TEST_CASE("capacity and domain errors") {
  CHECK_THROWS_AS(sample({SamplingKind::without_replacement, 1}, 3, 3, 10), CapacityError);
  CHECK_NOTHROW(sample({SamplingKind::with_replacement, 1}, 3, 3, 10));
  CHECK_THROWS_AS(sample({SamplingKind::with_replacement, 1}, 0, 3, 1), DomainError);
  CHECK(sample({SamplingKind::without_replacement, 1}, 3, 3, 0).empty());
}

TEST_CASE("noiseless observations equal the matrix") {
  const QMatrixd theta = constant_pixels(6, 5);
  const auto pos = sample({SamplingKind::with_replacement, 3}, 6, 5, 40);
  const ObservationSet obs = observe(theta, pos, SamplingKind::with_replacement, std::nullopt, 0);
  REQUIRE(obs.size() == 40);
  for (std::size_t k = 0; k < obs.size(); ++k) {
    CHECK(obs[k].at == pos[k]);
    CHECK(obs[k].value == theta(pos[k].row, pos[k].col));
  }
  CHECK(obs.rows() == 6);
  CHECK(obs.cols() == 5);
}

TEST_CASE("noise has the requested covariance") {
  const QMatrixd theta = constant_pixels(10, 10);
  const auto pos = sample({SamplingKind::with_replacement, 4}, 10, 10, 200000);
  Eigen::Matrix3d corr;
  corr << 0.70, 0.50, 0.50, 0.50, 0.70, 0.66, 0.50, 0.66, 0.70;
  for (const Eigen::Matrix3d& sigma :
       {Eigen::Matrix3d(Eigen::Vector3d(1.5, 0.5, 0.2).asDiagonal()), Eigen::Matrix3d(Eigen::Matrix3d::Identity()),
        corr}) {
    const ObservationSet obs = observe(theta, pos, SamplingKind::with_replacement, NoiseCovariance(sigma), 17);
    const Eigen::Matrix3d emp = empirical_covariance(theta, obs);
    const double scale = sigma.diagonal().maxCoeff();
    CHECK((emp - sigma).cwiseAbs().maxCoeff() <= 0.05 * scale);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(emp(c, c) - sigma(c, c)) <= 0.05 * sigma(c, c));
    for (const auto& e : obs.entries()) REQUIRE(e.value.is_pure());
  }
}

TEST_CASE("noise is deterministic in its seed") {
  const QMatrixd theta = constant_pixels(4, 4);
  const auto pos = sample({SamplingKind::with_replacement, 4}, 4, 4, 50);
  const auto noise = NoiseCovariance::diagonal(1, 2, 3);
  const auto a = observe(theta, pos, SamplingKind::with_replacement, noise, 5);
  const auto b = observe(theta, pos, SamplingKind::with_replacement, noise, 5);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].value == b[k].value);
}

TEST_CASE("observe requires a pixel matrix") {
  QMatrixd theta = constant_pixels(3, 3);
  const auto pos = sample({SamplingKind::without_replacement, 4}, 3, 3, 4);
  theta.set(1, 1, Quaterniond::pure(-1, 0, 0));
  CHECK_THROWS_AS(observe(theta, pos, SamplingKind::without_replacement, std::nullopt, 0), PurityError);
  theta.set(1, 1, {1, 0, 0, 0});
  CHECK_THROWS_AS(observe(theta, pos, SamplingKind::without_replacement, std::nullopt, 0), PurityError);
  CHECK_THROWS_AS(ObservationSet(3, 3, SamplingKind::with_replacement, {{{0, 0}, {1, 0, 0, 0}}}), PurityError);
  CHECK_THROWS_AS(ObservationSet(3, 3, SamplingKind::with_replacement, {{{3, 0}, {0, 0, 0, 0}}}), DimensionError);
}
