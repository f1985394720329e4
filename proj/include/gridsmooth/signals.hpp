#pragma once

// Test signals for rate experiments and the Gaussian observation model.
// Every generator scales its output so the declared seminorm equals the
// requested radius exactly, not just up to a constant.

#include <cstdint>
#include <string>

#include "gridsmooth/grid.hpp"

namespace gridsmooth {

enum class SignalFamily { kOneHot, kLinear, kPiecewiseConstant };
enum class RadiusKind { kTv, kSobolev };

std::string family_name(SignalFamily family);
SignalFamily parse_signal_family(const std::string& name);

struct SignalSpec {
  SignalFamily family = SignalFamily::kOneHot;
  GridShape shape = GridShape::cubic(1, 1);
  double target_radius = 0.0;
  RadiusKind radius_kind = RadiusKind::kTv;
};

/// Radius kind a family is measured in by default: TV for one-hot and
/// piecewise-constant, Sobolev for linear.
RadiusKind natural_radius_kind(SignalFamily family);

/// Single spike at the center node (0-based coordinate l/2 on every axis).
/// Its TV equals the spike height times the node degree.
Signal one_hot(const GridShape& shape, double target_tv_radius);

/// Same spike scaled to a Sobolev radius instead (height * sqrt(degree)).
Signal one_hot_sobolev(const GridShape& shape, double target_sobolev_radius);

/// theta_i proportional to i_1 + ... + i_d; every edge difference is equal.
Signal linear_signal(const GridShape& shape, double target_sobolev_radius);

/// Indicator of the centered hypercube of side floor(l/2), requires l >= 4.
Signal piecewise_constant(const GridShape& shape, double target_tv_radius);

/// Number of edges leaving the centered block used by piecewise_constant.
std::size_t piecewise_constant_boundary_edges(const GridShape& shape);

Signal generate(const SignalSpec& spec);

/// y = theta0 + sigma z with z drawn from CounterRng(seed); z_i uses counter i.
Signal add_noise(const Signal& theta0, double sigma, std::uint64_t seed);

/// (1/n) ||theta_hat - theta0||^2.
double mse(const Signal& theta_hat, const Signal& theta0);

}  // namespace gridsmooth
