// gridsmooth: rate sweeps, greymap denoising, bound tables and self checks.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
// 3 TV solver missed its gap tolerance while --strict was given.
// selftest exits 1 when any check fails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridsmooth/estimators.hpp"
#include "gridsmooth/experiment.hpp"
#include "gridsmooth/image.hpp"
#include "gridsmooth/selftest.hpp"
#include "gridsmooth/theory.hpp"

namespace gs = gridsmooth;
namespace th = gridsmooth::theory;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitUnconverged = 3;

// Keys settable both in the config file and as --key on the command line.
const char* const kSweepKeys[] = {"family",    "d",          "side_lengths", "sigma",   "replicates",
                                  "estimators", "tuning_points", "tuning_span", "base_seed", "radius",
                                  "gap_tol",   "max_iter",   "threads",      "timing",  "output",
                                  "summary"};

struct SweepArgs {
  std::string config_path;
  std::map<std::string, std::string> flags;
  bool strict = false;
};

struct ImageArgs {
  std::string input;
  std::string output;
  std::string clean;
  std::string estimator = "tv";
  double lambda = 0.0;
  std::size_t k = 1;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  double gap_tol = 1e-6;
  std::size_t max_iter = 10000;
  bool strict = false;
};

struct BoundsArgs {
  double n = 0.0;
  std::size_t d = 2;
  double sigma = 1.0;
  std::optional<double> tv_radius;
  std::optional<double> sobolev_radius;
  std::optional<double> d_max;
  double c = 1.0;
};

int run_sweep(const SweepArgs& args) {
  gs::KeyValues values;
  if (!args.config_path.empty()) values = gs::read_key_values(args.config_path);
  bool strict = args.strict;
  if (const auto it = values.find("strict"); it != values.end()) {
    strict = strict || it->second == "true" || it->second == "1" || it->second == "yes" || it->second == "on";
  }
  for (const auto& [key, value] : args.flags) values[key] = value;
  const gs::ExperimentConfig config = gs::config_from_key_values(values);
  config.validate();

  const gs::ExperimentResult result = gs::run_experiment(config);
  if (config.output.empty()) {
    gs::write_records_csv(std::cout, result.records);
  } else {
    gs::emit_csv(result.records, config.output);
  }
  if (!config.summary_output.empty()) gs::emit_summary(result.summary, config.summary_output);

  std::size_t unconverged = 0;
  for (const gs::SummaryRow& row : result.summary) unconverged += row.unconverged;
  if (config.side_lengths.size() >= 3) {
    for (const gs::EstimatorFamily estimator : config.estimators) {
      const bool positive = std::all_of(result.summary.begin(), result.summary.end(), [&](const gs::SummaryRow& row) {
        return row.estimator != estimator || row.best_mse > 0.0;
      });
      std::cerr << "slope " << gs::family_name(estimator) << ' '
                << (positive ? gs::format_double(gs::slope_estimate(result.summary, estimator)) : "undefined")
                << '\n';
    }
  }
  if (unconverged > 0) {
    std::cerr << unconverged << " tv rows did not reach gap_tol " << gs::format_double(config.gap_tol) << '\n';
    if (strict) return kExitUnconverged;
  }
  return kExitOk;
}

int run_image(const ImageArgs& args) {
  gs::ImageDenoiseRequest request;
  request.input = args.input;
  request.output = args.output;
  if (!args.clean.empty()) request.clean = args.clean;
  request.sigma = args.sigma;
  request.seed = args.seed;
  switch (gs::parse_family(args.estimator)) {
    case gs::EstimatorFamily::kTv:
      request.estimator = gs::TvConfig{args.lambda, {args.gap_tol, args.max_iter, 4}};
      break;
    case gs::EstimatorFamily::kLaplacianSmoothing: request.estimator = gs::SmoothingConfig{args.lambda}; break;
    case gs::EstimatorFamily::kLaplacianEigenmaps: request.estimator = gs::EigenmapsConfig{args.k}; break;
    case gs::EstimatorFamily::kMean: request.estimator = gs::MeanConfig{}; break;
    case gs::EstimatorFamily::kIdentity: request.estimator = gs::IdentityConfig{}; break;
  }
  const gs::ImageReport report = gs::denoise_image(request);
  std::cout << "width=" << report.width << "\nheight=" << report.height << "\nmaxval=" << report.maxval << '\n';
  if (report.noisy_mse) std::cout << "noisy_mse=" << gs::format_double(*report.noisy_mse) << '\n';
  if (report.output_mse) std::cout << "output_mse=" << gs::format_double(*report.output_mse) << '\n';
  std::cout << "solver_gap=" << gs::format_double(report.solver_gap) << "\nconverged="
            << (report.converged ? "true" : "false") << '\n';
  if (!report.converged && args.strict) return kExitUnconverged;
  return kExitOk;
}

nlohmann::json bound_json(const th::BoundValue& bound) {
  return {{"value", bound.value}, {"regime", th::regime_label(bound.regime)}, {"c", bound.constant_c}};
}

int run_bounds(const BoundsArgs& args) {
  if (!(args.n >= 1.0) || args.d == 0 || !(args.sigma >= 0.0)) throw gs::ConfigError("bounds: need n >= 1, d >= 1, sigma >= 0");
  const th::CanonicalRadii canonical = th::canonical_radii(args.n, args.d);
  const double tv_radius = args.tv_radius.value_or(canonical.tv_radius);
  const double sobolev_radius = args.sobolev_radius.value_or(canonical.sobolev_radius);
  const double d_max = args.d_max.value_or(2.0 * static_cast<double>(args.d));

  nlohmann::json out;
  out["n"] = args.n;
  out["d"] = args.d;
  out["sigma"] = args.sigma;
  out["d_max"] = d_max;
  out["tv_radius"] = tv_radius;
  out["sobolev_radius"] = sobolev_radius;
  out["canonical"] = {{"tv_radius", canonical.tv_radius}, {"sobolev_radius", canonical.sobolev_radius}};
  out["birge_massart_rho_1"] = th::birge_massart_rho(1.0);
  out["minimax_tv_lower"] = bound_json(th::minimax_tv_lower(args.n, d_max, tv_radius, args.sigma, args.c));
  out["minimax_linear_tv_lower"] = bound_json(th::minimax_linear_tv_lower(args.n, d_max, tv_radius, args.sigma));
  out["minimax_linear_tv_lower_simplified"] =
      th::minimax_linear_tv_lower_simplified(args.n, d_max, tv_radius, args.sigma);
  out["minimax_sobolev_lower"] = bound_json(th::minimax_sobolev_lower(args.n, args.d, sobolev_radius, args.sigma, args.c));
  out["sobolev_upper_le"] = bound_json(th::sobolev_upper_le(args.n, args.d, sobolev_radius, args.sigma, args.c));
  out["recommended_k"] = th::recommended_k(args.n, args.d, sobolev_radius);
  out["recommended_lambda_ls"] = th::recommended_lambda_ls(args.n, args.d, sobolev_radius);
  if (args.d >= 2) out["recommended_lambda_tv"] = th::recommended_lambda_tv(args.n, args.d);

  // column norm of the pseudoinverse needs an actual cubic grid
  const double side = std::round(std::pow(args.n, 1.0 / static_cast<double>(args.d)));
  if (side >= 2.0 && std::abs(std::pow(side, static_cast<double>(args.d)) - args.n) < 0.5 && args.n <= 4096.0) {
    const double m = th::pinv_max_col_norm(gs::GridShape::cubic(static_cast<std::size_t>(side), args.d));
    out["pinv_max_col_norm"] = m;
    out["mean_estimator_risk_bound"] = th::mean_estimator_risk_bound(args.n, tv_radius, m, args.sigma);
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int run_selftest_command() {
  bool all = true;
  for (const gs::SelftestCheck& check : gs::run_selftest()) {
    std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << " (" << check.detail << ")\n";
    all = all && check.passed;
  }
  return all ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Denoising on d-dimensional grids: TV, Laplacian smoothing, Laplacian eigenmaps"};
  app.require_subcommand(1);

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo MSE sweep over grid sizes with oracle tuning");
  sweep->add_option("--config", sweep_args.config_path, "key=value configuration file");
  for (const char* key : kSweepKeys) {
    sweep->add_option_function<std::string>(std::string("--") + key,
                                            [&sweep_args, key](const std::string& v) { sweep_args.flags[key] = v; },
                                            std::string("overrides '") + key + "' from the config file");
  }
  sweep->add_flag("--strict", sweep_args.strict, "exit 3 when any TV solve misses gap_tol");

  ImageArgs image_args;
  CLI::App* image = app.add_subcommand("image", "Denoise a binary PGM (P5) image");
  image->add_option("--input", image_args.input, "input PGM")->required();
  image->add_option("--output", image_args.output, "output PGM")->required();
  image->add_option("--clean", image_args.clean, "clean reference PGM for the MSE report");
  image->add_option("--estimator", image_args.estimator, "tv, ls, le, mean or identity");
  image->add_option("--lambda", image_args.lambda, "penalty for tv and ls");
  image->add_option("--k", image_args.k, "number of eigenvectors for le");
  image->add_option("--sigma", image_args.sigma, "standard deviation of added noise, in pixel units");
  image->add_option("--seed", image_args.seed, "noise seed");
  image->add_option("--gap_tol", image_args.gap_tol, "relative duality gap target for tv");
  image->add_option("--max_iter", image_args.max_iter, "sweep limit for tv");
  image->add_flag("--strict", image_args.strict, "exit 3 when the TV solve misses gap_tol");

  BoundsArgs bounds_args;
  CLI::App* bounds = app.add_subcommand("bounds", "Print bound and tuning formulas as JSON");
  bounds->add_option("--n", bounds_args.n, "number of grid nodes")->required();
  bounds->add_option("--d", bounds_args.d, "grid dimension");
  bounds->add_option("--sigma", bounds_args.sigma, "noise level");
  bounds->add_option("--tv_radius", bounds_args.tv_radius, "TV radius (default canonical)");
  bounds->add_option("--sobolev_radius", bounds_args.sobolev_radius, "Sobolev radius (default canonical)");
  bounds->add_option("--d_max", bounds_args.d_max, "maximum degree (default 2d)");
  bounds->add_option("--c", bounds_args.c, "universal constant");

  CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sweep->parsed()) return run_sweep(sweep_args);
    if (image->parsed()) return run_image(image_args);
    if (bounds->parsed()) return run_bounds(bounds_args);
    if (selftest->parsed()) return run_selftest_command();
  } catch (const gs::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const gs::PgmError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
