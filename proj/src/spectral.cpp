#include "gridsmooth/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include <fftw3.h>

namespace gridsmooth {
namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

enum class Direction { kForward, kInverse };

// In-place separable DCT over all axes: REDFT10 (DCT-II) forward, REDFT01
// (DCT-III) inverse. Both are unnormalized in FFTW.
void run_dct(const GridShape& shape, std::vector<double>& data, Direction dir) {
  const int rank = static_cast<int>(shape.dims());
  std::vector<int> dims(shape.dims());
  std::vector<fftw_r2r_kind> kinds(shape.dims(),
                                   dir == Direction::kForward ? FFTW_REDFT10 : FFTW_REDFT01);
  for (std::size_t a = 0; a < shape.dims(); ++a) dims[a] = static_cast<int>(shape.side(a));

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_r2r(rank, dims.data(), data.data(), data.data(), kinds.data(), FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("spectral: FFTW could not create a plan");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

// Per-slot factor turning the unnormalized FFTW output into orthonormal
// coefficients (forward) or pre-scaling orthonormal coefficients (inverse).
void apply_slot_scaling(const GridShape& shape, std::vector<double>& data, Direction dir) {
  const double side = static_cast<double>(shape.side(0));
  double zero_factor;
  double other_factor;
  if (dir == Direction::kForward) {
    zero_factor = 1.0 / (2.0 * std::sqrt(side));
    other_factor = 1.0 / std::sqrt(2.0 * side);
  } else {
    zero_factor = 1.0 / std::sqrt(side);
    other_factor = 1.0 / std::sqrt(2.0 * side);
  }
  const std::size_t d = shape.dims();
  // factor depends only on how many frequency components are zero
  std::vector<double> by_zero_count(d + 1);
  for (std::size_t z = 0; z <= d; ++z)
    by_zero_count[z] = std::pow(zero_factor, static_cast<double>(z)) *
                       std::pow(other_factor, static_cast<double>(d - z));
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::size_t zeros = 0;
    for (std::size_t a = 0; a < d; ++a)
      if ((i / shape.stride(a)) % shape.side(a) == 0) ++zeros;
    data[i] *= by_zero_count[zeros];
  }
}

}  // namespace

void require_cubic(const GridShape& shape, const char* who) {
  if (!shape.is_cubic())
    throw std::invalid_argument(std::string(who) + ": grid must have equal side lengths");
}

std::vector<double> path_eigenvalues(std::size_t side) {
  std::vector<double> rho(side);
  for (std::size_t k = 0; k < side; ++k) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(side)));
    rho[k] = 4.0 * s * s;
  }
  return rho;
}

SpectrumView::SpectrumView(const GridShape& shape) : shape_(shape) {
  require_cubic(shape, "grid_eigenvalues");
  const std::size_t d = shape.dims();
  const std::vector<double> per_axis = path_eigenvalues(shape.side(0));
  eigenvalues_.resize(shape.size());
  std::vector<double> terms(d);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    for (std::size_t a = 0; a < d; ++a) terms[a] = per_axis[(i / shape.stride(a)) % shape.side(a)];
    // summing in sorted order makes permuted multi-indices bitwise equal
    std::sort(terms.begin(), terms.end());
    eigenvalues_[i] = std::accumulate(terms.begin(), terms.end(), 0.0);
  }
  order_.resize(shape.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return eigenvalues_[a] < eigenvalues_[b]; });
}

SpectrumView grid_eigenvalues(const GridShape& shape) { return SpectrumView(shape); }

Signal spectral_forward(const Signal& theta) {
  require_cubic(theta.shape(), "spectral_forward");
  std::vector<double> data(theta.values().begin(), theta.values().end());
  run_dct(theta.shape(), data, Direction::kForward);
  apply_slot_scaling(theta.shape(), data, Direction::kForward);
  return Signal(theta.shape(), std::move(data));
}

Signal spectral_inverse(const Signal& gamma) {
  require_cubic(gamma.shape(), "spectral_inverse");
  std::vector<double> data(gamma.values().begin(), gamma.values().end());
  apply_slot_scaling(gamma.shape(), data, Direction::kInverse);
  run_dct(gamma.shape(), data, Direction::kInverse);
  return Signal(gamma.shape(), std::move(data));
}

Signal spectral_filter(const Signal& y, std::span<const double> gain) {
  if (gain.size() != y.size()) throw ShapeMismatch("spectral_filter: gain length mismatch");
  if (!std::all_of(gain.begin(), gain.end(), [](double g) { return std::isfinite(g); }))
    throw std::invalid_argument("spectral_filter: gain must be finite");
  Signal gamma = spectral_forward(y);
  for (std::size_t i = 0; i < gamma.size(); ++i) gamma[i] *= gain[i];
  return spectral_inverse(gamma);
}

}  // namespace gridsmooth
