#include "gridsmooth/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridsmooth/experiment.hpp"
#include "gridsmooth/signals.hpp"

namespace gridsmooth {

Signal image_to_signal(const PgmImage& image) {
  std::vector<double> values(image.pixels.begin(), image.pixels.end());
  return Signal(GridShape({image.height, image.width}), std::move(values));
}

PgmImage signal_to_image(const Signal& signal, std::uint32_t maxval) {
  const GridShape& shape = signal.shape();
  if (shape.dims() != 2) throw std::invalid_argument("signal_to_image: need a 2-D grid");
  PgmImage image;
  image.height = shape.side(0);
  image.width = shape.side(1);
  image.maxval = maxval;
  image.pixels.resize(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double v = std::clamp(std::nearbyint(signal[i]), 0.0, static_cast<double>(maxval));
    image.pixels[i] = static_cast<std::uint16_t>(v);
  }
  return image;
}

ImageReport denoise_image(const ImageDenoiseRequest& request) {
  const PgmImage input = read_pgm(request.input);
  const Signal original = image_to_signal(input);
  const Signal y = add_noise(original, request.sigma, request.seed);

  std::optional<Signal> reference;
  if (request.clean) {
    const PgmImage clean = read_pgm(*request.clean);
    if (clean.width != input.width || clean.height != input.height)
      throw std::invalid_argument("clean image dimensions differ from the input");
    reference = image_to_signal(clean);
  } else if (request.sigma > 0.0) {
    reference = original;
  }

  const EstimateResult result = estimate(y, request.estimator);
  const PgmImage output = signal_to_image(result.theta_hat, input.maxval);
  write_pgm(request.output, output);

  ImageReport report;
  report.width = input.width;
  report.height = input.height;
  report.maxval = input.maxval;
  report.solver_gap = result.solver_gap;
  report.converged = result.converged;
  if (reference) {
    report.noisy_mse = mse(y, *reference);
    report.output_mse = mse(image_to_signal(output), *reference);
  }
  return report;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi >= lo) || points == 0) throw std::invalid_argument("log_grid: need 0 < lo <= hi, points >= 1");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

ImageTuning oracle_tune_image(const Signal& clean, const Signal& noisy, EstimatorFamily family,
                              const std::vector<double>& tuning_values, const TvOptions& options) {
  if (tuning_values.empty()) throw std::invalid_argument("oracle_tune_image: empty tuning grid");
  ImageTuning tuning;
  for (const double value : tuning_values) {
    EstimatorConfig config;
    switch (family) {
      case EstimatorFamily::kTv: config = TvConfig{value, options}; break;
      case EstimatorFamily::kLaplacianSmoothing: config = SmoothingConfig{value}; break;
      case EstimatorFamily::kLaplacianEigenmaps:
        config = EigenmapsConfig{static_cast<std::size_t>(std::clamp(std::llround(value), 1LL,
                                                                     static_cast<long long>(noisy.size())))};
        break;
      case EstimatorFamily::kMean: config = MeanConfig{}; break;
      case EstimatorFamily::kIdentity: config = IdentityConfig{}; break;
    }
    const EstimateResult result = estimate(noisy, config);
    const double err = mse(result.theta_hat, clean);
    tuning.converged = tuning.converged && result.converged;
    tuning.tuning_values.push_back(value);
    tuning.mse.push_back(err);
    if (tuning.mse.size() == 1 || err < tuning.best_mse) {
      tuning.best_mse = err;
      tuning.best_tuning = value;
    }
  }
  return tuning;
}

PgmImage synthetic_piecewise_image(std::size_t side, std::uint32_t maxval) {
  if (side < 8) throw std::invalid_argument("synthetic_piecewise_image: side must be >= 8");
  const double top = static_cast<double>(maxval);
  const double levels[3] = {0.2 * top, 0.8 * top, 0.5 * top};
  PgmImage image;
  image.width = side;
  image.height = side;
  image.maxval = maxval;
  image.pixels.resize(side * side);
  const double s = static_cast<double>(side);
  const double cx = 0.68 * s, cy = 0.66 * s, radius = 0.2 * s;
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      double v = levels[0];
      const double x = static_cast<double>(c), y = static_cast<double>(r);
      if (x >= 0.12 * s && x < 0.5 * s && y >= 0.15 * s && y < 0.55 * s) v = levels[1];
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius) v = levels[2];
      image.pixels[r * side + c] = static_cast<std::uint16_t>(std::lround(v));
    }
  }
  return image;
}

}  // namespace gridsmooth
