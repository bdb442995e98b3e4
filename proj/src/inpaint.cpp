#include "quatcomp/inpaint.hpp"

#include <cmath>
#include <sstream>

#include "quatcomp/errors.hpp"

namespace quatcomp {

GrayImage random_mask(int width, int height, double fraction, std::uint64_t seed) {
  if (width <= 0 || height <= 0) throw DomainError("random_mask: dimensions must be positive");
  if (!(fraction >= 0 && fraction <= 1)) throw DomainError("random_mask: fraction must lie in [0, 1]");
  GrayImage mask;
  mask.width = width;
  mask.height = height;
  mask.data.assign(static_cast<std::size_t>(width) * height, 0);
  const auto n = static_cast<std::size_t>(std::llround(fraction * width * height));
  for (const Position& p : sample({SamplingKind::without_replacement, seed}, height, width, n)) {
    mask.data[static_cast<std::size_t>(p.row) * width + p.col] = 255;
  }
  return mask;
}

double pixel_alpha(const ChannelWeight& w) {
  double best = 0;
  for (int subset = 1; subset < 8; ++subset) {
    const Eigen::Vector3d x((subset & 1) ? 1.0 : 0.0, (subset & 2) ? 1.0 : 0.0, (subset & 4) ? 1.0 : 0.0);
    best = std::max(best, x.dot(w.matrix() * x));
  }
  return 255.0 * std::sqrt(best);
}

InpaintResult inpaint(const RgbImage& image, const GrayImage& mask, const InpaintOptions& options) {
  if (mask.width != image.width || mask.height != image.height) {
    std::ostringstream os;
    os << "inpaint: mask is " << mask.width << "x" << mask.height << " but the image is " << image.width
       << "x" << image.height;
    throw DimensionError(os.str());
  }
  const QMatrixd truth = to_qmatrix(image);
  std::vector<Position> positions;
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      const std::uint8_t m = mask.data[static_cast<std::size_t>(r) * mask.width + c];
      if (m == 255) {
        positions.push_back({r, c});
      } else if (m != 0) {
        throw IoError("inpaint: mask bytes must be 0 (missing) or 255 (observed)");
      }
    }
  }
  const ObservationSet obs =
      observe(truth, positions, SamplingKind::without_replacement, options.noise, options.noise_seed);

  InpaintResult out;
  out.observed = obs.size();
  SolverConfig config;
  config.mu = options.mu;
  config.tol_rel = options.tol_rel;
  config.max_iter = options.max_iter;
  if (options.noise) {
    const NoiseCovariance& sigma = *options.noise;
    config.weight = combine(options.gamma1, options.gamma2, ws_rebalance(sigma), wc_decorrelate(sigma));
    config.alpha = options.alpha ? *options.alpha : pixel_alpha(config.weight);
    config.lambda = obs.empty() ? 0.0
                                : lambda_rule(config.weight, sigma, obs.size(), truth.rows(), truth.cols(),
                                              options.c_lambda);
    out.solve = complete_noisy(obs, config);
  } else {
    config.alpha = options.alpha ? *options.alpha : kPixelAlpha;
    out.solve = complete_clean(obs, config);
  }
  out.alpha = config.alpha;
  out.lambda = config.lambda;
  out.image = to_image(out.solve.theta_hat);
  out.metrics = error_metrics(to_qmatrix(out.image), truth);
  out.spikiness = spikiness(truth);
  return out;
}

}  // namespace quatcomp
