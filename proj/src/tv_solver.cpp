#include <algorithm>
#include <cmath>
#include <vector>

#include "gridsmooth/estimators.hpp"

namespace gridsmooth {
namespace {

struct Certificate {
  double gap = 0.0;
  double primal = 0.0;
};

// Gap at theta = y - D^T u, where it reduces to sum_e (lambda |Dtheta_e| - 2 u_e Dtheta_e).
Certificate certify(const Signal& y, const EdgeVector& u, double lambda, Signal& theta) {
  const Signal adjoint = incidence_adjoint(u);
  double fidelity = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    theta[i] = y[i] - adjoint[i];
    fidelity += adjoint[i] * adjoint[i];
  }
  const EdgeVector diffs = incidence_apply(theta);
  double penalty = 0.0;
  double gap = 0.0;
  for (std::size_t e = 0; e < diffs.size(); ++e) {
    penalty += std::abs(diffs[e]);
    gap += lambda * std::abs(diffs[e]) - 2.0 * u[e] * diffs[e];
  }
  return {std::max(gap, 0.0), fidelity + lambda * penalty};
}

double relative(double gap, double primal) {
  if (gap == 0.0) return 0.0;
  return primal > 0.0 ? gap / primal : gap;
}

}  // namespace

double tv_objective(const Signal& y, const Signal& theta, double lambda) {
  if (!(y.shape() == theta.shape())) throw ShapeMismatch("tv_objective: shape mismatch");
  double fidelity = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) fidelity += (y[i] - theta[i]) * (y[i] - theta[i]);
  return fidelity + lambda * tv_seminorm(theta);
}

double tv_duality_gap(const Signal& y, const Signal& theta, const EdgeVector& u, double lambda) {
  if (!(y.shape() == theta.shape()) || !(y.shape() == u.shape()))
    throw ShapeMismatch("tv_duality_gap: shape mismatch");
  if (!(lambda >= 0.0)) throw std::invalid_argument("tv_duality_gap: lambda must be nonnegative");
  const double w = lambda / 2.0;
  EdgeVector clipped = u;
  for (double& v : clipped.values()) v = std::clamp(v, -w, w);

  const EdgeVector diffs = incidence_apply(theta);
  double gap = 0.0;
  for (std::size_t e = 0; e < diffs.size(); ++e)
    gap += lambda * std::abs(diffs[e]) - 2.0 * clipped[e] * diffs[e];
  const Signal adjoint = incidence_adjoint(clipped);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = theta[i] - (y[i] - adjoint[i]);
    gap += r * r;
  }
  return std::max(gap, 0.0);
}

TvSolveReport tv_denoise(const Signal& y, double lambda, const TvOptions& options) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("tv_denoise: lambda must be finite and nonnegative");
  if (!(options.gap_tol > 0.0)) throw std::invalid_argument("tv_denoise: gap_tol must be positive");
  if (options.max_iter == 0) throw std::invalid_argument("tv_denoise: max_iter must be positive");

  const GridShape& shape = y.shape();
  TvSolveReport report{y, EdgeVector(shape), 0.0, 0.0, 0, true};
  if (lambda == 0.0 || shape.edge_count() == 0) return report;

  const double w = lambda / 2.0;
  EdgeVector& u = report.dual;
  Signal& theta = report.theta_hat;  // invariant: theta = y - D^T u

  std::size_t longest = 0;
  for (std::size_t a = 0; a < shape.dims(); ++a) longest = std::max(longest, shape.side(a));
  std::vector<double> r(longest);
  std::vector<double> p(longest);
  const std::size_t check_every = std::max<std::size_t>(options.check_every, 1);

  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    for (std::size_t a = 0; a < shape.dims(); ++a) {
      const std::size_t len = shape.side(a);
      if (len < 2) continue;
      const std::size_t stride = shape.stride(a);
      for_each_pencil(shape, a, [&](std::size_t start) {
        const std::size_t e0 = pencil_edge_start(shape, a, start);
        // r = theta + D_a^T u_a on this pencil: the input with this block's dual removed
        double left = 0.0;
        for (std::size_t c = 0; c < len; ++c) {
          const double right = (c + 1 < len) ? u[e0 + c * stride] : 0.0;
          r[c] = theta[start + c * stride] + left - right;
          left = right;
        }
        tv_prox_1d(std::span<const double>(r.data(), len), w, std::span<double>(p.data(), len));
        // new block dual from r - p = D_a^T u_a, then theta = r - D_a^T u_a
        double cumulative = 0.0;
        left = 0.0;
        for (std::size_t c = 0; c < len; ++c) {
          double right = 0.0;
          if (c + 1 < len) {
            cumulative += p[c] - r[c];
            right = std::clamp(cumulative, -w, w);
            u[e0 + c * stride] = right;
          }
          theta[start + c * stride] = r[c] - (left - right);
          left = right;
        }
      });
    }
    report.iterations = iter;
    if (iter <= 2 || iter % check_every == 0 || iter == options.max_iter) {
      const Certificate cert = certify(y, u, lambda, theta);
      report.gap = cert.gap;
      report.relative_gap = relative(cert.gap, cert.primal);
      if (report.relative_gap <= options.gap_tol) {
        report.converged = true;
        return report;
      }
    }
  }
  report.converged = false;
  return report;
}

}  // namespace gridsmooth
