#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library routine it is meant to check: matrices are rebuilt from the edge
// definition, eigenpairs come from a dense symmetric solver, the 1-D prox is
// solved by enumerating fusion patterns, integrals by adaptive quadrature.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gridsmooth/grid.hpp"
#include "gridsmooth/random.hpp"

namespace oracle {

using gridsmooth::GridShape;
using gridsmooth::Signal;

inline Eigen::VectorXd to_eigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline Signal random_signal(const GridShape& shape, std::uint64_t seed, double scale = 1.0) {
  const gridsmooth::CounterRng rng(seed);
  std::vector<double> v(shape.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * rng.normal(i);
  return Signal(shape, std::move(v));
}

/// Incidence matrix from the edge definition: walk nodes in flat order for
/// each axis, pairing a node with its successor along that axis.
inline Eigen::MatrixXd incidence(const GridShape& shape) {
  const std::size_t d = shape.dims();
  const std::size_t n = shape.size();
  std::vector<std::size_t> strides(d, 1);
  for (std::size_t a = d - 1; a-- > 0;) strides[a] = strides[a + 1] * shape.side(a + 1);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t coord = (i / strides[a]) % shape.side(a);
      if (coord + 1 < shape.side(a)) edges.emplace_back(i, i + strides[a]);
    }
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(edges.size()), static_cast<Eigen::Index>(n));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    D(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(edges[e].first)) = -1.0;
    D(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(edges[e].second)) = 1.0;
  }
  return D;
}

inline Eigen::MatrixXd laplacian(const GridShape& shape) {
  const Eigen::MatrixXd D = incidence(shape);
  return D.transpose() * D;
}

inline std::vector<double> sorted_eigenvalues(const GridShape& shape) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(shape));
  std::vector<double> ev = to_std(solver.eigenvalues());
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Orthogonal projector onto the eigenspace spanned by the k smallest
/// eigenvalues; only meaningful when eigenvalue k-1 and k differ.
inline Eigen::MatrixXd low_projector(const GridShape& shape, std::size_t k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(shape));
  const Eigen::MatrixXd V = solver.eigenvectors().leftCols(static_cast<Eigen::Index>(k));
  return V * V.transpose();
}

inline Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& A) {
  return A.completeOrthogonalDecomposition().pseudoInverse();
}

/// Exact minimizer of 1/2 ||y - x||^2 + w sum |x_{i+1} - x_i| by enumerating
/// every partition into runs and every sign pattern of the jumps between
/// runs, solving the stationarity equations of each piece and keeping the
/// candidate whose subgradient conditions hold.
inline std::vector<double> prox_by_enumeration(const std::vector<double>& y, double w) {
  const std::size_t n = y.size();
  if (n <= 1) return y;
  std::vector<double> best;
  double best_objective = std::numeric_limits<double>::infinity();
  const std::uint32_t cuts_limit = 1u << (n - 1);
  for (std::uint32_t cuts = 0; cuts < cuts_limit; ++cuts) {
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (cuts & (1u << i)) starts.push_back(i + 1);
    const std::size_t runs = starts.size();
    starts.push_back(n);
    std::uint32_t sign_limit = 1u;
    for (std::size_t j = 1; j < runs; ++j) sign_limit *= 2;
    for (std::uint32_t signs = 0; signs < sign_limit; ++signs) {
      auto sign_of = [&](std::size_t jump) { return (signs >> jump) & 1u ? 1.0 : -1.0; };
      std::vector<double> x(n);
      for (std::size_t r = 0; r < runs; ++r) {
        double sum = 0.0;
        for (std::size_t i = starts[r]; i < starts[r + 1]; ++i) sum += y[i];
        const double left = r > 0 ? sign_of(r - 1) : 0.0;
        const double right = r + 1 < runs ? sign_of(r) : 0.0;
        const double len = static_cast<double>(starts[r + 1] - starts[r]);
        const double value = (sum - w * (left - right)) / len;
        for (std::size_t i = starts[r]; i < starts[r + 1]; ++i) x[i] = value;
      }
      bool ok = true;
      for (std::size_t r = 0; r + 1 < runs && ok; ++r) {
        const double jump = x[starts[r + 1]] - x[starts[r + 1] - 1];
        ok = jump * sign_of(r) > 0.0;
      }
      // dual partial sums must stay inside [-w, w] within runs
      double u = 0.0;
      for (std::size_t i = 0; i + 1 < n && ok; ++i) {
        u += x[i] - y[i];
        ok = std::abs(u) <= w * (1.0 + 1e-12) + 1e-12;
      }
      if (!ok) continue;
      double objective = 0.0;
      for (std::size_t i = 0; i < n; ++i) objective += 0.5 * (y[i] - x[i]) * (y[i] - x[i]);
      for (std::size_t i = 0; i + 1 < n; ++i) objective += w * std::abs(x[i + 1] - x[i]);
      if (objective < best_objective) {
        best_objective = objective;
        best = x;
      }
    }
  }
  return best;
}

/// Dual projected gradient for min ||y - theta||^2 + lambda ||D theta||_1 on a
/// small grid, with theta = y - D^T u, |u| <= lambda / 2.
inline Eigen::VectorXd tv_by_projected_gradient(const GridShape& shape, const Eigen::VectorXd& y, double lambda,
                                                std::size_t iterations) {
  const Eigen::MatrixXd D = incidence(shape);
  const double bound = lambda / 2.0;
  const double lipschitz = 2.0 * (D * D.transpose()).eigenvalues().real().maxCoeff();
  const double step = 1.0 / lipschitz;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(D.rows());
  Eigen::VectorXd v = u;
  double t = 1.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const Eigen::VectorXd grad = -2.0 * D * (y - D.transpose() * v);
    Eigen::VectorXd next = (v - step * grad).cwiseMax(-bound).cwiseMin(bound);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    v = next + ((t - 1.0) / t_next) * (next - u);
    u = next;
    t = t_next;
  }
  return y - D.transpose() * u;
}

/// integral_0^{(pi/2) sqrt(lambda d)} u^{d-1} / (1 + u^2)^2 du.
inline double ls_integral_quadrature(std::size_t d, double lambda) {
  const double upper = 0.5 * M_PI * std::sqrt(lambda * static_cast<double>(d));
  auto f = [d](double u) { return std::pow(u, static_cast<double>(d) - 1.0) / ((1.0 + u * u) * (1.0 + u * u)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper, 15, 1e-14);
}

struct DenseRisk {
  double variance;
  double bias;
};

inline DenseRisk dense_risk(const Eigen::MatrixXd& S, const Eigen::VectorXd& theta0, double sigma) {
  const double n = static_cast<double>(theta0.size());
  const Eigen::VectorXd residual = S * theta0 - theta0;
  return {sigma * sigma * S.squaredNorm() / n, residual.squaredNorm() / n};
}

}  // namespace oracle
