#include "gridsmooth/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace gridsmooth {

std::vector<double> laplacian_smoothing_gain(const SpectrumView& spectrum, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("laplacian_smoothing_gain: lambda must be nonnegative");
  std::vector<double> gain(spectrum.eigenvalues().size());
  for (std::size_t i = 0; i < gain.size(); ++i) gain[i] = 1.0 / (1.0 + lambda * spectrum[i]);
  return gain;
}

std::vector<double> laplacian_eigenmaps_gain(const SpectrumView& spectrum, std::size_t k) {
  const std::size_t n = spectrum.eigenvalues().size();
  if (k < 1 || k > n) throw std::out_of_range("laplacian_eigenmaps: k must lie in [1, n]");
  std::vector<double> gain(n, 0.0);
  for (std::size_t j = 0; j < k; ++j) gain[spectrum.order()[j]] = 1.0;
  return gain;
}

Signal laplacian_smooth(const Signal& y, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("laplacian_smooth: lambda must be finite and nonnegative");
  require_cubic(y.shape(), "laplacian_smooth");
  if (lambda == 0.0) return y;
  return spectral_filter(y, laplacian_smoothing_gain(grid_eigenvalues(y.shape()), lambda));
}

Signal laplacian_eigenmaps(const Signal& y, std::size_t k) {
  require_cubic(y.shape(), "laplacian_eigenmaps");
  if (k < 1 || k > y.size()) throw std::out_of_range("laplacian_eigenmaps: k must lie in [1, n]");
  if (k == y.size()) return y;
  if (k == 1) return mean_estimator(y);
  return spectral_filter(y, laplacian_eigenmaps_gain(grid_eigenvalues(y.shape()), k));
}

Signal mean_estimator(const Signal& y) {
  return Signal(y.shape(), std::vector<double>(y.size(), mean(y.values())));
}

Signal identity_estimator(const Signal& y) { return y; }

RiskTerms linear_smoother_exact_risk(std::span<const double> gain, const Signal& theta0, double sigma) {
  if (gain.size() != theta0.size()) throw ShapeMismatch("linear_smoother_exact_risk: gain length mismatch");
  const Signal coeffs = spectral_forward(theta0);
  double frob = 0.0;
  double bias = 0.0;
  for (std::size_t i = 0; i < gain.size(); ++i) {
    frob += gain[i] * gain[i];
    const double residual = (gain[i] - 1.0) * coeffs[i];
    bias += residual * residual;
  }
  const double n = static_cast<double>(theta0.size());
  RiskTerms terms;
  terms.variance = sigma * sigma * frob / n;
  terms.bias = bias / n;
  terms.risk = terms.variance + terms.bias;
  return terms;
}

RiskTerms linear_smoother_exact_risk(const Eigen::MatrixXd& smoother, const Signal& theta0, double sigma) {
  const auto n = static_cast<Eigen::Index>(theta0.size());
  if (smoother.rows() != n || smoother.cols() != n)
    throw ShapeMismatch("linear_smoother_exact_risk: smoother must be n x n");
  if (theta0.size() > 4096) throw std::length_error("linear_smoother_exact_risk: dense smoother limited to n <= 4096");
  const Eigen::Map<const Eigen::VectorXd> theta(theta0.values().data(), n);
  const Eigen::VectorXd residual = smoother * theta - theta;
  RiskTerms terms;
  terms.variance = sigma * sigma * smoother.squaredNorm() / static_cast<double>(n);
  terms.bias = residual.squaredNorm() / static_cast<double>(n);
  terms.risk = terms.variance + terms.bias;
  return terms;
}

EstimatorFamily family_of(const EstimatorConfig& config) {
  return std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TvConfig>) return EstimatorFamily::kTv;
        else if constexpr (std::is_same_v<T, SmoothingConfig>) return EstimatorFamily::kLaplacianSmoothing;
        else if constexpr (std::is_same_v<T, EigenmapsConfig>) return EstimatorFamily::kLaplacianEigenmaps;
        else if constexpr (std::is_same_v<T, MeanConfig>) return EstimatorFamily::kMean;
        else return EstimatorFamily::kIdentity;
      },
      config);
}

std::string family_name(EstimatorFamily family) {
  switch (family) {
    case EstimatorFamily::kTv: return "tv";
    case EstimatorFamily::kLaplacianSmoothing: return "ls";
    case EstimatorFamily::kLaplacianEigenmaps: return "le";
    case EstimatorFamily::kMean: return "mean";
    case EstimatorFamily::kIdentity: return "identity";
  }
  return "unknown";
}

EstimatorFamily parse_family(const std::string& name) {
  if (name == "tv") return EstimatorFamily::kTv;
  if (name == "ls" || name == "laplacian_smoothing") return EstimatorFamily::kLaplacianSmoothing;
  if (name == "le" || name == "laplacian_eigenmaps") return EstimatorFamily::kLaplacianEigenmaps;
  if (name == "mean") return EstimatorFamily::kMean;
  if (name == "identity" || name == "id") return EstimatorFamily::kIdentity;
  throw std::invalid_argument("unknown estimator family '" + name + "'");
}

EstimateResult estimate(const Signal& y, const EstimatorConfig& config) {
  return std::visit(
      [&](const auto& c) -> EstimateResult {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TvConfig>) {
          TvSolveReport report = tv_denoise(y, c.lambda, c.options);
          return {std::move(report.theta_hat), report.relative_gap, report.converged};
        } else if constexpr (std::is_same_v<T, SmoothingConfig>) {
          return {laplacian_smooth(y, c.lambda)};
        } else if constexpr (std::is_same_v<T, EigenmapsConfig>) {
          return {laplacian_eigenmaps(y, c.k)};
        } else if constexpr (std::is_same_v<T, MeanConfig>) {
          return {mean_estimator(y)};
        } else {
          return {identity_estimator(y)};
        }
      },
      config);
}

}  // namespace gridsmooth
