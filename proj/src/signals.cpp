#include "gridsmooth/signals.hpp"

#include <cmath>
#include <stdexcept>

#include "gridsmooth/random.hpp"
#include "gridsmooth/spectral.hpp"

namespace gridsmooth {
namespace {

std::size_t center_node(const GridShape& shape) {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < shape.dims(); ++a) flat += (shape.side(a) / 2) * shape.stride(a);
  return flat;
}

void require_radius(double radius, const char* who) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw std::invalid_argument(std::string(who) + ": radius must be finite and nonnegative");
}

}  // namespace

std::string family_name(SignalFamily family) {
  switch (family) {
    case SignalFamily::kOneHot: return "one_hot";
    case SignalFamily::kLinear: return "linear";
    case SignalFamily::kPiecewiseConstant: return "piecewise_constant";
  }
  return "unknown";
}

SignalFamily parse_signal_family(const std::string& name) {
  if (name == "one_hot" || name == "onehot") return SignalFamily::kOneHot;
  if (name == "linear") return SignalFamily::kLinear;
  if (name == "piecewise_constant" || name == "piecewise") return SignalFamily::kPiecewiseConstant;
  throw std::invalid_argument("unknown signal family '" + name + "'");
}

RadiusKind natural_radius_kind(SignalFamily family) {
  return family == SignalFamily::kLinear ? RadiusKind::kSobolev : RadiusKind::kTv;
}

Signal one_hot(const GridShape& shape, double target_tv_radius) {
  require_cubic(shape, "one_hot");
  require_radius(target_tv_radius, "one_hot");
  Signal theta(shape);
  if (target_tv_radius == 0.0) return theta;
  const std::size_t center = center_node(shape);
  const std::size_t degree = shape.degree(center);
  if (degree == 0) throw std::invalid_argument("one_hot: single-node grid has no TV");
  theta[center] = target_tv_radius / static_cast<double>(degree);
  return theta;
}

Signal one_hot_sobolev(const GridShape& shape, double target_sobolev_radius) {
  require_cubic(shape, "one_hot");
  require_radius(target_sobolev_radius, "one_hot");
  Signal theta(shape);
  if (target_sobolev_radius == 0.0) return theta;
  const std::size_t center = center_node(shape);
  const std::size_t degree = shape.degree(center);
  if (degree == 0) throw std::invalid_argument("one_hot: single-node grid has no seminorm");
  theta[center] = target_sobolev_radius / std::sqrt(static_cast<double>(degree));
  return theta;
}

Signal linear_signal(const GridShape& shape, double target_sobolev_radius) {
  require_cubic(shape, "linear_signal");
  require_radius(target_sobolev_radius, "linear_signal");
  if (shape.side(0) < 2) throw std::invalid_argument("linear_signal: need side length >= 2");
  // raw signal has unit difference on each of the m edges
  const double scale = target_sobolev_radius / std::sqrt(static_cast<double>(shape.edge_count()));
  Signal theta(shape);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    std::size_t coordinate_sum = 0;
    for (std::size_t a = 0; a < shape.dims(); ++a) coordinate_sum += (i / shape.stride(a)) % shape.side(a) + 1;
    theta[i] = scale * static_cast<double>(coordinate_sum);
  }
  return theta;
}

std::size_t piecewise_constant_boundary_edges(const GridShape& shape) {
  require_cubic(shape, "piecewise_constant");
  const std::size_t side = shape.side(0);
  if (side < 4) throw std::invalid_argument("piecewise_constant: need side length >= 4");
  // block of side s strictly inside the grid: two faces of s^{d-1} edges per axis
  const std::size_t s = side / 2;
  std::size_t face = 1;
  for (std::size_t a = 1; a < shape.dims(); ++a) face *= s;
  return 2 * shape.dims() * face;
}

Signal piecewise_constant(const GridShape& shape, double target_tv_radius) {
  require_radius(target_tv_radius, "piecewise_constant");
  const double height = target_tv_radius / static_cast<double>(piecewise_constant_boundary_edges(shape));
  const std::size_t side = shape.side(0);
  const std::size_t s = side / 2;
  const std::size_t lo = (side - s) / 2;
  Signal theta(shape);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    bool inside = true;
    for (std::size_t a = 0; a < shape.dims() && inside; ++a) {
      const std::size_t c = (i / shape.stride(a)) % side;
      inside = c >= lo && c < lo + s;
    }
    if (inside) theta[i] = height;
  }
  return theta;
}

Signal generate(const SignalSpec& spec) {
  switch (spec.family) {
    case SignalFamily::kOneHot:
      return spec.radius_kind == RadiusKind::kTv ? one_hot(spec.shape, spec.target_radius)
                                                 : one_hot_sobolev(spec.shape, spec.target_radius);
    case SignalFamily::kLinear:
      if (spec.radius_kind != RadiusKind::kSobolev)
        throw std::invalid_argument("linear signal is specified by a Sobolev radius");
      return linear_signal(spec.shape, spec.target_radius);
    case SignalFamily::kPiecewiseConstant:
      if (spec.radius_kind != RadiusKind::kTv)
        throw std::invalid_argument("piecewise-constant signal is specified by a TV radius");
      return piecewise_constant(spec.shape, spec.target_radius);
  }
  throw std::invalid_argument("generate: unknown family");
}

Signal add_noise(const Signal& theta0, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("add_noise: sigma must be nonnegative");
  if (sigma == 0.0) return theta0;
  const CounterRng rng(seed);
  std::vector<double> y(theta0.values().begin(), theta0.values().end());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += sigma * rng.normal(i);
  return Signal(theta0.shape(), std::move(y));
}

double mse(const Signal& theta_hat, const Signal& theta0) {
  if (!(theta_hat.shape() == theta0.shape())) throw ShapeMismatch("mse: shape mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < theta0.size(); ++i) {
    const double r = theta_hat[i] - theta0[i];
    total += r * r;
  }
  return total / static_cast<double>(theta0.size());
}

}  // namespace gridsmooth
