#pragma once

// Greymap denoising on the 2-D grid of pixels. Pixel values are used as is
// (0..maxval), so sigma and lambda are in pixel units.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridsmooth/estimators.hpp"
#include "gridsmooth/pgm.hpp"

namespace gridsmooth {

/// Grid of shape (height, width); row-major pixels map to flat indices directly.
Signal image_to_signal(const PgmImage& image);

/// Rounds to the nearest integer and clamps to [0, maxval].
PgmImage signal_to_image(const Signal& signal, std::uint32_t maxval);

struct ImageDenoiseRequest {
  std::string input;
  std::string output;
  std::optional<std::string> clean;  ///< reference image; defaults to the input when noise is added
  EstimatorConfig estimator = TvConfig{};
  double sigma = 0.0;
  std::uint64_t seed = 1;
};

struct ImageReport {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t maxval = 0;
  std::optional<double> noisy_mse;   ///< observation vs reference
  std::optional<double> output_mse;  ///< written output vs reference
  double solver_gap = 0.0;
  bool converged = true;
};

ImageReport denoise_image(const ImageDenoiseRequest& request);

struct ImageTuning {
  double best_tuning = 0.0;
  double best_mse = 0.0;
  std::vector<double> tuning_values;
  std::vector<double> mse;
  bool converged = true;
};

/// Evaluates an estimator family at each tuning value on one noisy image and
/// picks the value with the lowest MSE against the clean one.
ImageTuning oracle_tune_image(const Signal& clean, const Signal& noisy, EstimatorFamily family,
                              const std::vector<double>& tuning_values, const TvOptions& options = {});

/// `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// 64 x 64 style test image: background, an off-center rectangle and a disc,
/// three grey levels inside [0, maxval].
PgmImage synthetic_piecewise_image(std::size_t side = 64, std::uint32_t maxval = 255);

}  // namespace gridsmooth
