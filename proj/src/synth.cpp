#include "quatcomp/synth.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "quatcomp/errors.hpp"
#include "quatcomp/random.hpp"

namespace quatcomp {

namespace {

// Orthonormal basis (columns) of the null space of b, from the full SVD.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double tol = s.size() > 0 ? 1e-10 * s(0) : 0.0;
  Eigen::Index numerical_rank = 0;
  while (numerical_rank < s.size() && s(numerical_rank) > tol) ++numerical_rank;
  return svd.matrixV().rightCols(b.cols() - numerical_rank);
}

constexpr std::uint64_t kPerturbationStream = 0x70657274ULL;

}  // namespace

QMatrixd gen_exact(Eigen::Index d1, Eigen::Index d2, Eigen::Index r, std::uint64_t seed) {
  if (d1 < 1 || d2 < 1) throw DomainError("gen_exact: dimensions must be positive");
  if (r < 2 || r > std::min(d1, d2)) {
    std::ostringstream os;
    os << "gen_exact: rank " << r << " must lie in [2, min(d1, d2) = " << std::min(d1, d2) << "]";
    throw DomainError(os.str());
  }
  Rng rng(seed);
  const Eigen::Index m = r - 1;
  const Eigen::MatrixXd l0 = rng.uniform_matrix(d1, m);
  const Eigen::MatrixXd l1 = rng.uniform_matrix(d1, m);
  const Eigen::MatrixXd l2 = rng.uniform_matrix(d1, m);

  Eigen::MatrixXd blocks(d1, 4 * m);
  blocks << l0, l1, l0 + l2, l1 - l2;
  const Eigen::MatrixXd k = null_space(blocks);
  if (k.cols() == 0) {
    std::ostringstream os;
    os << "gen_exact: null space of the " << d1 << "x" << 4 * m
       << " factor block is trivial; the construction needs 4(r-1) > rank of that block";
    throw ConstructibilityError(os.str());
  }
  const Eigen::MatrixXd q = rng.uniform_matrix(k.cols(), d2);
  const Eigen::MatrixXd stacked = k * q;

  // L = l0 - l1 i - (l0 + l2) j - (l1 - l2) k and R = R0 + R1 i + R2 j + R3 k.
  const QMatrixd left(l0, -l1, -(l0 + l2), -(l1 - l2));
  const QMatrixd right(stacked.topRows(m), stacked.middleRows(m, m), stacked.middleRows(2 * m, m),
                       stacked.bottomRows(m));
  QMatrixd lr = left * right;

  // The real part vanishes because blocks * stacked = 0; only rounding is left.
  const double residual = lr.re().cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, std::sqrt(lr.squared_norm() / static_cast<double>(lr.size())));
  if (residual > 1e-8 * scale) {
    throw InternalConsistencyError("gen_exact: real part of L R did not vanish");
  }
  lr.re().setZero();
  for (int c = 1; c < 4; ++c) {
    const double shift = std::floor(lr.part(c).minCoeff());
    lr.part(c).array() -= shift;
  }
  return lr;
}

ApproxLowRank gen_approx_parts(Eigen::Index d1, Eigen::Index d2, Eigen::Index r,
                               std::uint64_t seed) {
  ApproxLowRank out;
  out.base = gen_exact(d1, d2, r, seed);
  const double tau = std::min({out.base.im_i().minCoeff(), out.base.im_j().minCoeff(),
                               out.base.im_k().minCoeff()});
  Rng rng(derive_seed(seed, kPerturbationStream));
  Eigen::MatrixXd q1 = rng.uniform_matrix(d1, d2);
  Eigen::MatrixXd q2 = rng.uniform_matrix(d1, d2);
  Eigen::MatrixXd q3 = rng.uniform_matrix(d1, d2);
  out.perturbation = QMatrixd::FromPure(0.1 * tau * q1, 0.1 * tau * q2, 0.1 * tau * q3);
  out.theta = out.base - out.perturbation;
  return out;
}

QMatrixd boost_spikiness(const QMatrixd& theta, double factor, Eigen::Index lines) {
  if (!(factor >= 1.0)) throw DomainError("boost_spikiness: factor must be >= 1");
  QMatrixd out = theta;
  lines = std::min({lines, theta.rows(), theta.cols()});
  for (int c = 1; c < 4; ++c) {
    out.part(c).topRows(lines) *= factor;
    out.part(c).leftCols(lines) *= factor;
  }
  return out;
}

}  // namespace quatcomp
