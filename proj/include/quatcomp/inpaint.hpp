#pragma once

#include <cstdint>
#include <optional>

#include "quatcomp/image_io.hpp"
#include "quatcomp/metrics.hpp"
#include "quatcomp/solver.hpp"
#include "quatcomp/weights.hpp"

namespace quatcomp {

/// Mask with round(fraction * pixels) observed pixels (255) drawn without
/// replacement; the rest are 0.
GrayImage random_mask(int width, int height, double fraction, std::uint64_t seed);

struct InpaintOptions {
  std::optional<NoiseCovariance> noise;  ///< absent: clean model
  std::uint64_t noise_seed = 0;
  double gamma1 = 0;
  double gamma2 = 0;
  double c_lambda = 0.6;
  std::optional<double> alpha;  ///< default: bound of |q|_w over [0, 255]^3
  double mu = 1.0;
  double tol_rel = 1e-5;
  int max_iter = 500;
};

struct InpaintResult {
  RgbImage image;  ///< clamped and rounded reconstruction
  ErrorMetrics metrics;  ///< of `image` against the input
  double spikiness = 0;  ///< of the input
  double alpha = 0;
  double lambda = 0;
  std::size_t observed = 0;
  CompletionResult solve;
};

/// Largest |q|_w over pixels with components in [0, 255]: 255 sqrt(max over
/// channel subsets S of sum W_SS). Equals 255 sqrt(3) for W = I.
double pixel_alpha(const ChannelWeight& w);

/// Observes the masked pixels (plus noise when requested) and reconstructs the
/// image with the clean or the weighted corrupted program.
InpaintResult inpaint(const RgbImage& image, const GrayImage& mask, const InpaintOptions& options);

}  // namespace quatcomp
