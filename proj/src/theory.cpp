#include "gridsmooth/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gridsmooth/random.hpp"
#include "gridsmooth/spectral.hpp"

namespace gridsmooth::theory {
namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

// Index of the smallest of three terms; earlier terms win ties.
int argmin3(double a, double b, double c) {
  if (a <= b && a <= c) return 0;
  return b <= c ? 1 : 2;
}

BoundValue sobolev_minimum(double n, std::size_t d, double radius, double sigma, double c) {
  require(n >= 1.0, "Sobolev bound: n must be >= 1");
  require(d >= 1, "Sobolev bound: d must be >= 1");
  require(radius >= 0.0 && sigma > 0.0 && c > 0.0, "Sobolev bound: inputs must be positive");
  const double dd = static_cast<double>(d);
  const double rate = std::pow(n * sigma * sigma, 2.0 / (dd + 2.0)) * std::pow(radius, 2.0 * dd / (dd + 2.0));
  const double noise = n * sigma * sigma;
  const double limited = std::pow(n, 2.0 / dd) * radius * radius;
  const int which = argmin3(rate, noise, limited);
  const double smallest = std::min({rate, noise, limited});
  const Regime regimes[] = {Regime::kRateTerm, Regime::kNoiseTerm, Regime::kRadiusTerm};
  return {c / n * smallest, regimes[which], c};
}

}  // namespace

std::string regime_label(Regime regime) {
  switch (regime) {
    case Regime::kSmallRadius: return "small_radius";
    case Regime::kIntermediateRadius: return "intermediate_radius";
    case Regime::kLargeRadius: return "large_radius";
    case Regime::kRatio: return "ratio";
    case Regime::kParametricFloor: return "parametric_floor";
    case Regime::kRateTerm: return "rate_term";
    case Regime::kNoiseTerm: return "noise_term";
    case Regime::kRadiusTerm: return "radius_term";
  }
  return "unknown";
}

CanonicalRadii canonical_radii(double n, std::size_t d) {
  require(n >= 1.0 && d >= 1, "canonical_radii: need n >= 1 and d >= 1");
  const double dd = static_cast<double>(d);
  return {std::pow(n, 1.0 - 1.0 / dd), std::pow(n, 0.5 - 1.0 / dd)};
}

double birge_massart_rho(double p) {
  require(p > 0.0 && p < 2.0, "birge_massart_rho: p must lie in (0, 2)");
  const double target = 2.0 / p;
  // rho log rho is increasing on [1, inf) and 0 at 1 < target
  double lo = 1.0;
  double hi = 2.0;
  while (hi * std::log(hi) < target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::log(mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

BoundValue minimax_tv_lower(double n, double d_max, double radius, double sigma, double c) {
  require(n >= 2.0, "minimax_tv_lower: n must be >= 2");
  require(d_max > 0.0 && sigma > 0.0 && c > 0.0 && radius >= 0.0, "minimax_tv_lower: inputs must be positive");
  const double rho1 = birge_massart_rho(1.0);
  const double lower_edge = sigma * d_max * std::sqrt(std::log(n));
  const double upper_edge = sigma * d_max * n / std::sqrt(rho1);
  if (radius < lower_edge) {
    const double value = std::max(radius * radius / (d_max * d_max * n), sigma * sigma / n);
    return {c * value, Regime::kSmallRadius, c};
  }
  if (radius > upper_edge) return {c * sigma * sigma / rho1, Regime::kLargeRadius, c};
  const double value =
      sigma * radius * std::sqrt(1.0 + std::log(sigma * d_max * n / radius)) / (d_max * n);
  return {c * value, Regime::kIntermediateRadius, c};
}

BoundValue minimax_linear_tv_lower(double n, double d_max, double radius, double sigma) {
  require(n >= 1.0 && d_max > 0.0 && sigma > 0.0 && radius >= 0.0,
          "minimax_linear_tv_lower: inputs must be positive");
  const double r2 = radius * radius;
  const double ratio = sigma * sigma * r2 / (r2 + sigma * sigma * d_max * d_max * n);
  const double floor = sigma * sigma / n;
  if (ratio >= floor) return {ratio, Regime::kRatio, 1.0};
  return {floor, Regime::kParametricFloor, 1.0};
}

double minimax_linear_tv_lower_simplified(double n, double d_max, double radius, double sigma) {
  require(n >= 1.0 && d_max > 0.0 && sigma > 0.0 && radius >= 0.0,
          "minimax_linear_tv_lower_simplified: inputs must be positive");
  const double inner = std::min(radius * radius / (d_max * d_max * n), sigma * sigma);
  return std::max(0.5 * inner, sigma * sigma / n);
}

double mean_estimator_risk_bound(double n, double radius, double max_col_norm, double sigma) {
  require(n > 0.0 && radius >= 0.0 && max_col_norm >= 0.0 && sigma >= 0.0,
          "mean_estimator_risk_bound: inputs must be nonnegative");
  return (sigma * sigma + radius * radius * max_col_norm * max_col_norm) / n;
}

double pinv_max_col_norm(const GridShape& shape) {
  require_cubic(shape, "pinv_max_col_norm");
  if (shape.size() > 4096) throw std::length_error("pinv_max_col_norm: limited to n <= 4096");
  const std::size_t n = shape.size();
  const std::size_t d = shape.dims();
  const std::size_t side = shape.side(0);
  if (shape.edge_count() == 0) return 0.0;

  // Column e = (i, j) of D^+ = L^+ D^T is L^+ (e_j - e_i); in the cosine
  // eigenbasis its squared norm is sum_{rho_K > 0} (v_K(j) - v_K(i))^2 / rho_K^2.
  const double ls = static_cast<double>(side);
  std::vector<double> basis(side * side);  // basis[k * side + x] = phi_k(x)
  for (std::size_t k = 0; k < side; ++k)
    for (std::size_t x = 0; x < side; ++x)
      basis[k * side + x] =
          k == 0 ? 1.0 / std::sqrt(ls)
                 : std::sqrt(2.0 / ls) * std::cos(std::numbers::pi * static_cast<double>(k) *
                                                  (static_cast<double>(x) + 0.5) / ls);
  const SpectrumView spectrum(shape);

  double best = 0.0;
  std::vector<std::size_t> node(d);
  std::vector<std::size_t> freq(d);
  for (std::size_t a = 0; a < d; ++a) {
    for_each_pencil(shape, a, [&](std::size_t start) {
      for (std::size_t c = 0; c + 1 < side; ++c) {
        const std::size_t i = start + c * shape.stride(a);
        for (std::size_t b = 0; b < d; ++b) node[b] = (i / shape.stride(b)) % side;
        double total = 0.0;
        for (std::size_t slot = 1; slot < n; ++slot) {
          for (std::size_t b = 0; b < d; ++b) freq[b] = (slot / shape.stride(b)) % side;
          if (freq[a] == 0) continue;
          double term = basis[freq[a] * side + node[a] + 1] - basis[freq[a] * side + node[a]];
          for (std::size_t b = 0; b < d; ++b)
            if (b != a) term *= basis[freq[b] * side + node[b]];
          const double rho = spectrum[slot];
          total += term * term / (rho * rho);
        }
        best = std::max(best, total);
      }
    });
  }
  return std::sqrt(best);
}

BoundValue minimax_sobolev_lower(double n, std::size_t d, double sobolev_radius, double sigma, double c) {
  BoundValue bound = sobolev_minimum(n, d, sobolev_radius, sigma, c);
  bound.value += sigma * sigma / n;
  return bound;
}

BoundValue sobolev_upper_le(double n, std::size_t d, double sobolev_radius, double sigma, double c) {
  BoundValue bound = sobolev_minimum(n, d, sobolev_radius, sigma, c);
  bound.value += c * sigma * sigma / n;
  return bound;
}

std::size_t recommended_k(double n, std::size_t d, double sobolev_radius) {
  require(n >= 1.0 && d >= 1 && sobolev_radius >= 0.0, "recommended_k: invalid inputs");
  const double dd = static_cast<double>(d);
  double k = std::pow(n * std::pow(sobolev_radius, dd), 2.0 / (dd + 2.0));
  k = std::min(std::max(k, 1.0), n);
  const double rounded = std::round(k);
  return static_cast<std::size_t>(std::clamp(rounded, 1.0, std::floor(n)));
}

double recommended_lambda_ls(double n, std::size_t d, double sobolev_radius) {
  require(n >= 1.0 && d >= 1 && sobolev_radius > 0.0, "recommended_lambda_ls: invalid inputs");
  const double dd = static_cast<double>(d);
  return std::pow(n / (sobolev_radius * sobolev_radius), 2.0 / (dd + 2.0));
}

double recommended_lambda_tv(double n, std::size_t d) {
  require(n > 1.0, "recommended_lambda_tv: n must exceed 1");
  require(d >= 2, "recommended_lambda_tv: rate is stated for d >= 2");
  const double logn = std::log(n);
  return d == 2 ? logn : std::sqrt(logn);
}

double eigen_partial_sum_bound(std::size_t tau, std::size_t side, std::size_t d) {
  require(tau >= 1 && tau <= side && d >= 1, "eigen_partial_sum_bound: need 1 <= tau <= l");
  const double ls = static_cast<double>(side);
  return std::numbers::pi * std::numbers::pi * static_cast<double>(d) *
         std::pow(static_cast<double>(tau), static_cast<double>(d + 2)) / (ls * ls);
}

double eigen_partial_sum_exact(std::size_t tau, const GridShape& shape) {
  require_cubic(shape, "eigen_partial_sum_exact");
  require(tau >= 1 && tau <= shape.side(0), "eigen_partial_sum_exact: need 1 <= tau <= l");
  const SpectrumView spectrum(shape);
  double total = 0.0;
  for (std::size_t slot = 0; slot < shape.size(); ++slot) {
    bool inside = true;
    for (std::size_t a = 0; a < shape.dims() && inside; ++a)
      inside = (slot / shape.stride(a)) % shape.side(a) < tau;
    if (inside) total += spectrum[slot];
  }
  return total;
}

double ls_variance_integral(std::size_t d, double lambda) {
  require(lambda >= 0.0, "ls_variance_integral: lambda must be nonnegative");
  const double u = 0.5 * std::numbers::pi * std::sqrt(lambda * static_cast<double>(d));
  const double u2 = u * u;
  switch (d) {
    case 1: return 0.5 * (u / (1.0 + u2) + std::atan(u));
    case 2: return u2 / (2.0 * (1.0 + u2));
    case 3: return 0.5 * (std::atan(u) - u / (1.0 + u2));
    case 4: return 0.5 * std::log1p(u2) - u2 / (2.0 * (1.0 + u2));
    default: throw std::invalid_argument("ls_variance_integral: closed form available for d in 1..4");
  }
}

double ls_variance_bound(double lambda, std::size_t d, double n, const LsVarianceConstants& constants) {
  require(lambda >= 0.0 && n >= 1.0, "ls_variance_bound: invalid inputs");
  require(d >= 1 && d <= 4, "ls_variance_bound: d must lie in 1..4");
  const double dd = static_cast<double>(d);
  const double c2 = constants.c2 > 0.0
                        ? constants.c2
                        : 2.0 * std::pow(std::numbers::pi, dd / 2.0) / std::tgamma(dd / 2.0) /
                              std::pow(std::numbers::pi, dd);
  if (lambda == 0.0) {
    // I(d) ~ U^d / d as lambda -> 0
    return constants.c1 + c2 * n * std::pow(0.5 * std::numbers::pi, dd) * std::pow(dd, dd / 2.0) / dd;
  }
  return constants.c1 + c2 * n * std::pow(lambda, -dd / 2.0) * ls_variance_integral(d, lambda);
}

double ls_variance_exact(double lambda, const GridShape& shape) {
  require(lambda >= 0.0, "ls_variance_exact: lambda must be nonnegative");
  const SpectrumView spectrum(shape);
  double total = 0.0;
  for (double rho : spectrum.eigenvalues()) {
    const double g = 1.0 / (1.0 + lambda * rho);
    total += g * g;
  }
  return total;
}

EmbeddingCheck ball_embedding_check(double r, const GridShape& shape, std::size_t samples, std::uint64_t seed) {
  require(samples >= 1, "ball_embedding_check: need at least one sample");
  require(r >= 0.0, "ball_embedding_check: radius must be nonnegative");
  const std::size_t n = shape.size();
  const double l1_radius = r / static_cast<double>(shape.max_degree());
  const CounterRng rng(seed);
  std::uint64_t counter = 0;

  EmbeddingCheck check;
  check.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    Signal theta(shape);
    if (s < n) {
      theta[s] = (s % 2 == 0 ? 1.0 : -1.0) * l1_radius;
    } else {
      // uniform point on the simplex with random signs, scaled into the ball
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        theta[i] = -std::log(1.0 - rng.uniform(counter++));
        total += theta[i];
      }
      // every other draw sits on the sphere itself
      const double shrink = (s % 2 == 0) ? 1.0 : rng.uniform(counter++);
      const double scale = l1_radius * shrink / total;
      for (std::size_t i = 0; i < n; ++i)
        theta[i] *= (rng.uniform(counter++) < 0.5 ? -scale : scale);
    }
    const double tv = tv_seminorm(theta);
    if (r > 0.0) check.worst_ratio = std::max(check.worst_ratio, tv / r);
    if (tv > r * (1.0 + 1e-12)) ++check.failures;
  }
  check.passed = check.failures == 0;
  return check;
}

}  // namespace gridsmooth::theory
