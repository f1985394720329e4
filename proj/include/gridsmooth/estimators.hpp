#pragma once

// Denoisers for y = theta0 + sigma z on a grid.
//
// TV denoising solves
//
//     minimize_theta  ||y - theta||_2^2 + lambda ||D theta||_1,
//
// with no 1/2 on the fidelity term. That is the proximal operator of
// (lambda / 2) ||D . ||_1 at y, so every 1-D kernel call below receives
// w = lambda / 2. The matching dual is
//
//     maximize_u  ||y||^2 - ||y - D^T u||^2   s.t.  ||u||_inf <= lambda / 2,
//
// with primal recovery theta = y - D^T u.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gridsmooth/grid.hpp"
#include "gridsmooth/spectral.hpp"

namespace gridsmooth {

// ---------------------------------------------------------------------------
// 1-D kernel

/// Exact minimizer of 1/2 ||y - x||^2 + w sum_i |x_{i+1} - x_i| (taut string).
/// `out` may alias `y`.
void tv_prox_1d(std::span<const double> y, double w, std::span<double> out);
std::vector<double> tv_prox_1d(std::span<const double> y, double w);

/// Largest violation of the optimality conditions of the 1-D problem at x.
double tv_prox_1d_kkt_residual(std::span<const double> y, double w, std::span<const double> x);

// ---------------------------------------------------------------------------
// d-dimensional TV

struct TvOptions {
  double gap_tol = 1e-6;         ///< relative duality gap target
  std::size_t max_iter = 10000;  ///< sweeps over all axes
  std::size_t check_every = 4;   ///< sweeps between certificate evaluations
};

struct TvSolveReport {
  Signal theta_hat;
  EdgeVector dual;
  double gap = 0.0;           ///< primal minus dual objective
  double relative_gap = 0.0;  ///< gap / primal objective
  std::size_t iterations = 0;
  bool converged = false;
};

/// Primal objective ||y - theta||^2 + lambda ||D theta||_1.
double tv_objective(const Signal& y, const Signal& theta, double lambda);

/// Duality gap at (theta, u). Entries of u outside [-lambda/2, lambda/2]
/// are clipped first. Evaluated as
///   sum_e (lambda |(D theta)_e| - 2 u_e (D theta)_e) + ||theta - (y - D^T u)||^2,
/// a sum of nonnegative terms equal to primal(theta) - dual(u).
double tv_duality_gap(const Signal& y, const Signal& theta, const EdgeVector& u, double lambda);

/// Axis-wise splitting: cyclic exact block minimization of the dual over the
/// per-axis edge blocks. Each block step is a batch of independent 1-D TV
/// proxes along the pencils of one axis. Stops only on a certified relative
/// gap <= gap_tol; otherwise returns the last iterate with converged = false.
TvSolveReport tv_denoise(const Signal& y, double lambda, const TvOptions& options = {});

// ---------------------------------------------------------------------------
// Linear smoothers

std::vector<double> laplacian_smoothing_gain(const SpectrumView& spectrum, double lambda);
std::vector<double> laplacian_eigenmaps_gain(const SpectrumView& spectrum, std::size_t k);

/// (I + lambda L)^{-1} y.
Signal laplacian_smooth(const Signal& y, double lambda);

/// Projection onto the k eigenvectors with smallest eigenvalue (ties by slot).
Signal laplacian_eigenmaps(const Signal& y, std::size_t k);

Signal mean_estimator(const Signal& y);
Signal identity_estimator(const Signal& y);

struct RiskTerms {
  double variance = 0.0;  ///< sigma^2 ||S||_F^2 / n
  double bias = 0.0;      ///< ||(S - I) theta0||^2 / n
  double risk = 0.0;
};

/// Expected MSE of the smoother V diag(gain) V^T.
RiskTerms linear_smoother_exact_risk(std::span<const double> gain, const Signal& theta0, double sigma);

/// Expected MSE of a dense smoother S (n <= 4096).
RiskTerms linear_smoother_exact_risk(const Eigen::MatrixXd& smoother, const Signal& theta0, double sigma);

// ---------------------------------------------------------------------------
// Configuration

enum class EstimatorFamily { kTv, kLaplacianSmoothing, kLaplacianEigenmaps, kMean, kIdentity };

struct TvConfig {
  double lambda = 0.0;
  TvOptions options{};
};
struct SmoothingConfig {
  double lambda = 0.0;
};
struct EigenmapsConfig {
  std::size_t k = 1;
};
struct MeanConfig {};
struct IdentityConfig {};

using EstimatorConfig = std::variant<TvConfig, SmoothingConfig, EigenmapsConfig, MeanConfig, IdentityConfig>;

EstimatorFamily family_of(const EstimatorConfig& config);

/// Short names used on the command line and in CSV files: tv, ls, le, mean, identity.
std::string family_name(EstimatorFamily family);
EstimatorFamily parse_family(const std::string& name);

struct EstimateResult {
  Signal theta_hat;
  double solver_gap = 0.0;  ///< relative certified gap for tv, 0 otherwise
  bool converged = true;
};

EstimateResult estimate(const Signal& y, const EstimatorConfig& config);

}  // namespace gridsmooth
