#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "quatcomp/errors.hpp"
#include "quatcomp/metrics.hpp"
#include "quatcomp/qsvd.hpp"
#include "quatcomp/synth.hpp"

using namespace quatcomp;

namespace {

constexpr std::uint64_t kSeeds[10] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

bool nonnegative_pure(const QMatrixd& a) {
  return (a.re().array() == 0).all() && (a.im_i().array() >= 0).all() && (a.im_j().array() >= 0).all() &&
         (a.im_k().array() >= 0).all();
}

}  // namespace

TEST_CASE("gen_exact is pure and nonnegative") {
  for (auto [d1, d2, r] : {std::array<Eigen::Index, 3>{50, 50, 15}, {30, 20, 5}, {8, 40, 2}, {70, 70, 20}}) {
    for (std::uint64_t s : kSeeds) {
      const QMatrixd t = gen_exact(d1, d2, r, s);
      CHECK(t.rows() == d1);
      CHECK(t.cols() == d2);
      CHECK(nonnegative_pure(t));
      // the floor lift puts every channel minimum in [0, 1)
      for (int c = 1; c < 4; ++c) CHECK(t.part(c).minCoeff() < 1.0);
    }
  }
}

TEST_CASE("gen_exact has the requested rank") {
  int hits = 0;
  for (std::uint64_t s : kSeeds) {
    const QMatrixd t = gen_exact(50, 50, 15, s);
    if (numerical_rank<double>(oracle::singular_values(t), 50, 50) == 15) ++hits;
  }
  CHECK(hits >= 9);
  CHECK(rank(gen_exact(30, 30, 5, 3)) == 5);
}

TEST_CASE("gen_exact is deterministic and validates its arguments") {
  CHECK(gen_exact(20, 20, 4, 9) == gen_exact(20, 20, 4, 9));
  CHECK_FALSE(gen_exact(20, 20, 4, 9) == gen_exact(20, 20, 4, 10));
  CHECK_THROWS_AS(gen_exact(20, 20, 1, 1), DomainError);
  CHECK_THROWS_AS(gen_exact(20, 10, 11, 1), DomainError);
  CHECK_THROWS_AS(gen_exact(0, 10, 2, 1), DomainError);
}

TEST_CASE("gen_approx has a small spectral tail") {
  for (std::uint64_t s : kSeeds) {
    const ApproxLowRank parts = gen_approx_parts(50, 50, 10, s);
    CHECK(nonnegative_pure(parts.theta));
    CHECK(fro_norm(parts.theta + parts.perturbation - parts.base) <= 1e-12 * fro_norm(parts.base));
    CHECK(parts.base == gen_exact(50, 50, 10, s));
    CHECK(gen_approx(50, 50, 10, s) == parts.theta);
    const Eigen::VectorXd sigma = singular_values(parts.theta);
    CHECK(sigma(10) * 5.0 <= sigma(9));
  }
}

TEST_CASE("boost_spikiness") {
  const QMatrixd t = gen_exact(30, 30, 5, 4);
  const QMatrixd b = boost_spikiness(t, 4.0);
  CHECK(nonnegative_pure(b));
  CHECK(rank(b) == 5);
  CHECK(spikiness(b) > spikiness(t));
  CHECK(boost_spikiness(t, 1.0) == t);
  CHECK_THROWS_AS(boost_spikiness(t, 0.5), DomainError);
}
