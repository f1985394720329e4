#include <doctest.h>

#include <cmath>
#include <vector>

#include "gridsmooth/estimators.hpp"
#include "gridsmooth/spectral.hpp"
#include "gridsmooth/theory.hpp"
#include "oracles.hpp"

using namespace gridsmooth;
namespace th = gridsmooth::theory;

namespace {

// Newton iteration on f(r) = r log r - c, an independent route to the root.
double newton_rho(double p) {
  const double c = 2.0 / p;
  double r = 2.0 + c;
  for (int i = 0; i < 100; ++i) r -= (r * std::log(r) - c) / (std::log(r) + 1.0);
  return r;
}

}  // namespace

TEST_CASE("canonical radii") {
  const th::CanonicalRadii one = th::canonical_radii(100.0, 1);
  CHECK(one.tv_radius == doctest::Approx(1.0));
  CHECK(one.sobolev_radius == doctest::Approx(0.1));
  const th::CanonicalRadii two = th::canonical_radii(100.0, 2);
  CHECK(two.tv_radius == doctest::Approx(10.0));
  CHECK(two.sobolev_radius == doctest::Approx(1.0));
  const th::CanonicalRadii three = th::canonical_radii(1000.0, 3);
  CHECK(three.tv_radius == doctest::Approx(100.0));
  CHECK(three.sobolev_radius == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("Birge-Massart root") {
  const double r1 = th::birge_massart_rho(1.0);
  CHECK(r1 > 2.34);
  CHECK(r1 < 2.35);
  CHECK(th::birge_massart_rho(0.5) == doctest::Approx(newton_rho(0.5)).epsilon(1e-11));
  CHECK(th::birge_massart_rho(0.5) == doctest::Approx(3.3273).epsilon(1e-4));
  for (std::uint64_t t = 0; t < 100; ++t) {
    const double p = 0.01 + 1.98 * CounterRng(t).uniform(0);
    const double r = th::birge_massart_rho(p);
    CHECK(std::abs(r * std::log(r) - 2.0 / p) <= 1e-10 * std::max(1.0, 2.0 / p));
    CHECK(r > 1.76);
  }
  CHECK_THROWS(th::birge_massart_rho(0.0));
  CHECK_THROWS(th::birge_massart_rho(2.0));
}

TEST_CASE("minimax TV lower bound cases") {
  const double rho1 = newton_rho(1.0);
  const th::BoundValue large = th::minimax_tv_lower(256.0, 4.0, 1e6, 1.0);
  CHECK(large.regime == th::Regime::kLargeRadius);
  CHECK(large.value == doctest::Approx(1.0 / rho1));

  const th::BoundValue tiny = th::minimax_tv_lower(256.0, 4.0, 1e-3, 1.0);
  CHECK(tiny.regime == th::Regime::kSmallRadius);
  CHECK(tiny.value == doctest::Approx(1.0 / 256.0));

  const th::BoundValue canonical = th::minimax_tv_lower(256.0, 4.0, 16.0, 1.0);
  CHECK(canonical.regime == th::Regime::kIntermediateRadius);
  const double expected = 16.0 * std::sqrt(1.0 + std::log(4.0 * 256.0 / 16.0)) / (4.0 * 256.0);
  CHECK(canonical.value == doctest::Approx(expected).epsilon(1e-14));
  CHECK(th::minimax_tv_lower(256.0, 4.0, 16.0, 1.0, 3.0).value == doctest::Approx(3.0 * expected));
  CHECK(th::regime_label(canonical.regime) == "intermediate_radius");
}

TEST_CASE("regime changes exactly once per case boundary") {
  for (double n : {16.0, 256.0, 1e4}) {
    std::vector<th::Regime> seen;
    for (int i = 0; i <= 4000; ++i) {
      const double r = std::pow(10.0, -3.0 + 12.0 * i / 4000.0);
      const th::BoundValue b = th::minimax_tv_lower(n, 4.0, r, 1.0);
      CHECK(b.value > 0.0);
      if (seen.empty() || seen.back() != b.regime) seen.push_back(b.regime);
    }
    CHECK(seen == std::vector<th::Regime>{th::Regime::kSmallRadius, th::Regime::kIntermediateRadius,
                                          th::Regime::kLargeRadius});
  }
}

TEST_CASE("minimax linear TV lower bound") {
  CHECK(th::minimax_linear_tv_lower(100.0, 4.0, 10.0, 1.0).value == doctest::Approx(1.0 / 17.0));
  CHECK(th::minimax_linear_tv_lower(100.0, 4.0, 0.0, 1.0).value == doctest::Approx(0.01));
  CHECK(th::minimax_linear_tv_lower(100.0, 4.0, 0.0, 1.0).regime == th::Regime::kParametricFloor);
  CHECK(th::minimax_linear_tv_lower(100.0, 4.0, 1e9, 2.0).value == doctest::Approx(4.0).epsilon(1e-6));
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const CounterRng rng(50 + t);
    const double n = std::pow(10.0, 1.0 + 5.0 * rng.uniform(0));
    const double d_max = 2.0 * static_cast<double>(1 + rng.bits(1) % 4);
    const double r = std::pow(10.0, -2.0 + 8.0 * rng.uniform(2));
    const double sigma = std::pow(10.0, -1.0 + 2.0 * rng.uniform(3));
    CHECK(th::minimax_linear_tv_lower(n, d_max, r, sigma).value >=
          th::minimax_linear_tv_lower_simplified(n, d_max, r, sigma));
  }
}

TEST_CASE("mean estimator bound") {
  CHECK(th::mean_estimator_risk_bound(10.0, 0.0, 3.0, 2.0) == doctest::Approx(0.4));
  CHECK(th::mean_estimator_risk_bound(4.0, 2.0, 1.0, 1.0) == doctest::Approx(1.25));
}

TEST_CASE("pseudoinverse column norms") {
  CHECK(th::pinv_max_col_norm(GridShape::cubic(2, 1)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  for (const GridShape& g : {GridShape::cubic(7, 1), GridShape::cubic(4, 2), GridShape::cubic(3, 3),
                             GridShape::cubic(6, 2)}) {
    const Eigen::MatrixXd pinv = oracle::pseudoinverse(oracle::incidence(g));
    CHECK(th::pinv_max_col_norm(g) == doctest::Approx(pinv.colwise().norm().maxCoeff()).epsilon(1e-9));
  }
  std::vector<double> ratios;
  for (std::size_t side : {4u, 8u, 16u}) {
    const double m = th::pinv_max_col_norm(GridShape::cubic(side, 2));
    ratios.push_back(m * m / std::log(static_cast<double>(side * side)));
  }
  for (double r : ratios) {
    CHECK(r >= 0.1);
    CHECK(r <= 10.0);
  }
  double lo = INFINITY, hi = 0.0;
  for (std::size_t side = 3; side <= 6; ++side) {
    const double m = th::pinv_max_col_norm(GridShape::cubic(side, 3));
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  CHECK(hi / lo <= 2.0);
  CHECK_THROWS(th::pinv_max_col_norm(GridShape({2, 3})));
}

TEST_CASE("Sobolev bounds and recommended tuning") {
  CHECK(th::minimax_sobolev_lower(256.0, 2, 1.0, 1.0).value == doctest::Approx(16.0 / 256.0 + 1.0 / 256.0));
  CHECK(th::minimax_sobolev_lower(256.0, 2, 1.0, 1.0).regime == th::Regime::kRateTerm);
  CHECK(th::minimax_sobolev_lower(256.0, 2, 0.0, 1.0).value == doctest::Approx(1.0 / 256.0));
  CHECK(th::minimax_sobolev_lower(256.0, 2, 1e12, 1.0).value == doctest::Approx(1.0 + 1.0 / 256.0));
  CHECK(th::minimax_sobolev_lower(256.0, 2, 1e12, 1.0).regime == th::Regime::kNoiseTerm);
  CHECK(th::sobolev_upper_le(256.0, 2, 1.0, 1.0, 2.0).value == doctest::Approx(2.0 * 17.0 / 256.0));

  CHECK(th::recommended_k(256.0, 2, 1.0) == 16);
  CHECK(th::recommended_k(256.0, 2, 1e-9) == 1);
  CHECK(th::recommended_k(256.0, 2, 1e9) == 256);
  CHECK(th::recommended_lambda_ls(256.0, 2, 1.0) == doctest::Approx(16.0));
  CHECK(th::recommended_lambda_tv(std::exp(10.0), 2) == doctest::Approx(10.0));
  CHECK(th::recommended_lambda_tv(std::exp(16.0), 3) == doctest::Approx(4.0));
  CHECK_THROWS(th::recommended_lambda_tv(100.0, 1));
}

TEST_CASE("Sobolev rate sits below the TV rate at large n in 3-D") {
  for (double n : {1e6, 1e8, 1e10}) {
    const th::CanonicalRadii r = th::canonical_radii(n, 3);
    CHECK(th::minimax_sobolev_lower(n, 3, r.sobolev_radius, 1.0).value <
          th::minimax_tv_lower(n, 6.0, r.tv_radius, 1.0).value);
  }
}

TEST_CASE("eigenvalue partial sums") {
  CHECK(th::eigen_partial_sum_exact(1, GridShape::cubic(5, 2)) == 0.0);
  CHECK(th::eigen_partial_sum_exact(4, GridShape::cubic(4, 1)) == doctest::Approx(6.0));
  CHECK(th::eigen_partial_sum_bound(4, 4, 1) == doctest::Approx(M_PI * M_PI * 64.0 / 16.0));
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::size_t side = 1; side <= (d == 3 ? 10u : 16u); ++side) {
      const GridShape g = GridShape::cubic(side, d);
      const SpectrumView s = grid_eigenvalues(g);
      for (std::size_t tau = 1; tau <= side; ++tau) {
        double direct = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          bool inside = true;
          for (std::size_t c : flat_to_multi(i, g)) inside = inside && c <= tau;
          if (inside) direct += s[i];
        }
        const double exact = th::eigen_partial_sum_exact(tau, g);
        CHECK(exact == doctest::Approx(direct).epsilon(1e-12));
        CHECK(exact <= th::eigen_partial_sum_bound(tau, side, d));
      }
    }
  }
}

TEST_CASE("variance integral closed forms against quadrature") {
  for (std::size_t d = 1; d <= 4; ++d) {
    for (double lambda : {0.1, 1.0, 10.0, 100.0}) {
      const double closed = th::ls_variance_integral(d, lambda);
      const double quad = oracle::ls_integral_quadrature(d, lambda);
      CHECK(std::abs(closed - quad) <= 1e-6 * std::abs(quad));
    }
  }
  CHECK_THROWS(th::ls_variance_integral(5, 1.0));
}

TEST_CASE("variance sum and its bound") {
  const GridShape g = GridShape::cubic(16, 2);
  CHECK(th::ls_variance_exact(0.0, g) == doctest::Approx(256.0));
  CHECK(th::ls_variance_exact(1e12, g) == doctest::Approx(1.0).epsilon(1e-6));
  for (const GridShape& shape : {GridShape::cubic(16, 2), GridShape::cubic(8, 3), GridShape::cubic(64, 1),
                                 GridShape::cubic(4, 4)}) {
    const double n = static_cast<double>(shape.size());
    for (double lambda : {0.0, 0.1, 1.0, 10.0, 100.0}) {
      const double exact = th::ls_variance_exact(lambda, shape);
      double direct = 0.0;
      const SpectrumView spectrum = grid_eigenvalues(shape);
      for (double r : spectrum.eigenvalues()) direct += 1.0 / ((1.0 + lambda * r) * (1.0 + lambda * r));
      CHECK(exact == doctest::Approx(direct).epsilon(1e-12));
      CHECK(exact <= th::ls_variance_bound(lambda, shape.dims(), n));
    }
  }
}

TEST_CASE("l1 ball embedding") {
  const th::EmbeddingCheck a = th::ball_embedding_check(5.0, GridShape::cubic(8, 2), 1000);
  CHECK(a.passed);
  CHECK(a.failures == 0);
  CHECK(a.samples == 1000);
  CHECK(a.worst_ratio <= 1.0 + 1e-12);
  // basis vertices sit exactly on the TV sphere when the node has full degree
  CHECK(a.worst_ratio == doctest::Approx(1.0));
  const th::EmbeddingCheck zero = th::ball_embedding_check(0.0, GridShape::cubic(4, 3), 10);
  CHECK(zero.passed);
}
