#pragma once

// Closed-form risk bounds and tuning rates for TV and Sobolev classes on
// d-dimensional grids. Unspecified universal constants are explicit
// arguments defaulting to 1; these are rate statements, so only slopes in n
// are meaningful, never absolute values.
//
// n is taken as a real number so rates can be evaluated off the lattice of
// perfect powers.

#include <cstddef>
#include <cstdint>
#include <string>

#include "gridsmooth/grid.hpp"

namespace gridsmooth::theory {

/// Which case of a piecewise bound produced the value.
enum class Regime {
  // TV minimax lower bound
  kSmallRadius,
  kIntermediateRadius,
  kLargeRadius,
  // max(ratio, sigma^2 / n) forms
  kRatio,
  kParametricFloor,
  // three-way minimum of the Sobolev bounds
  kRateTerm,
  kNoiseTerm,
  kRadiusTerm,
};

std::string regime_label(Regime regime);

struct BoundValue {
  double value = 0.0;
  Regime regime = Regime::kRatio;
  double constant_c = 1.0;
};

struct CanonicalRadii {
  double tv_radius;       ///< n^{1 - 1/d}
  double sobolev_radius;  ///< n^{1/2 - 1/d}
};

CanonicalRadii canonical_radii(double n, std::size_t d);

/// Root of rho log rho = 2 / p, 0 < p < 2.
double birge_massart_rho(double p);

/// Minimax lower bound over the TV ball of radius `radius`.
BoundValue minimax_tv_lower(double n, double d_max, double radius, double sigma, double c = 1.0);

/// Minimax-linear lower bound max(sigma^2 R^2 / (R^2 + sigma^2 d_max^2 n), sigma^2 / n).
BoundValue minimax_linear_tv_lower(double n, double d_max, double radius, double sigma);

/// The weaker form 1/2 (R^2 / (d_max^2 n) ^ sigma^2) v sigma^2 / n.
double minimax_linear_tv_lower_simplified(double n, double d_max, double radius, double sigma);

/// (sigma^2 + R^2 M^2) / n.
double mean_estimator_risk_bound(double n, double radius, double max_col_norm, double sigma);

/// Largest column l2 norm of the pseudoinverse of D on a cubic grid (n <= 4096).
double pinv_max_col_norm(const GridShape& shape);

/// (c/n) min((n sigma^2)^{2/(d+2)} R'^{2d/(d+2)}, n sigma^2, n^{2/d} R'^2) + sigma^2/n.
BoundValue minimax_sobolev_lower(double n, std::size_t d, double sobolev_radius, double sigma, double c = 1.0);

/// Same minimum, plus c sigma^2 / n: the eigenmaps (and d <= 3 smoothing) upper bound.
BoundValue sobolev_upper_le(double n, std::size_t d, double sobolev_radius, double sigma, double c = 1.0);

/// round(((n R'^d)^{2/(d+2)} v 1) ^ n), clamped to [1, n].
std::size_t recommended_k(double n, std::size_t d, double sobolev_radius);

/// (n / R'^2)^{2/(d+2)}.
double recommended_lambda_ls(double n, std::size_t d, double sobolev_radius);

/// log n for d = 2, sqrt(log n) for d >= 3.
double recommended_lambda_tv(double n, std::size_t d);

/// pi^2 d tau^{d+2} / l^2.
double eigen_partial_sum_bound(std::size_t tau, std::size_t side, std::size_t d);

/// Sum of the grid eigenvalues over the block {1..tau}^d of frequency multi-indices.
double eigen_partial_sum_exact(std::size_t tau, const GridShape& shape);

/// I(d) = integral_0^{(pi/2) sqrt(lambda d)} u^{d-1} / (1 + u^2)^2 du, in closed form, d in 1..4.
double ls_variance_integral(std::size_t d, double lambda);

struct LsVarianceConstants {
  double c1 = 1.0;
  /// Orthant share of the unit-sphere area, |S^{d-1}| / pi^d, when <= 0.
  double c2 = 0.0;
};

/// c1 + c2 n lambda^{-d/2} I(d): upper bound on sum_i 1/(1 + lambda rho_i)^2.
double ls_variance_bound(double lambda, std::size_t d, double n, const LsVarianceConstants& constants = {});

/// sum_i 1/(1 + lambda rho_i)^2 from the grid eigenvalues.
double ls_variance_exact(double lambda, const GridShape& shape);

struct EmbeddingCheck {
  bool passed = true;
  std::size_t samples = 0;
  std::size_t failures = 0;
  double worst_ratio = 0.0;  ///< max tv_seminorm / r over samples (0 when r = 0)
};

/// Draws signals in the l1 ball of radius r / d_max (basis vertices first,
/// then random points) and checks tv_seminorm <= r for each.
EmbeddingCheck ball_embedding_check(double r, const GridShape& shape, std::size_t samples,
                                    std::uint64_t seed = 1);

}  // namespace gridsmooth::theory
