#pragma once

// Monte-Carlo rate experiments: for each grid size and replicate, draw one
// noisy observation, run every estimator over its tuning grid on that same
// observation, and pick per (n, estimator) the tuning value with the lowest
// replicate-averaged MSE against the true signal (oracle tuning).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridsmooth/estimators.hpp"
#include "gridsmooth/signals.hpp"

namespace gridsmooth {

/// Bad configuration values; the CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable or unwritable files; the CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  SignalFamily family = SignalFamily::kOneHot;
  std::size_t d = 2;
  std::vector<std::size_t> side_lengths;  ///< strictly increasing
  double sigma = 1.0;
  std::size_t replicates = 5;
  std::vector<EstimatorFamily> estimators;
  std::size_t tuning_points = 15;  ///< multiplicative grid size, odd keeps the center
  double tuning_span = 100.0;      ///< grid covers center x [1/span, span]
  std::uint64_t base_seed = 20170101;
  std::optional<double> radius;    ///< fixed radius; canonical scaling when empty
  double gap_tol = 1e-6;
  std::size_t max_iter = 10000;
  std::size_t threads = 1;
  bool record_timing = false;      ///< off keeps CSV output byte-reproducible
  std::string output;              ///< records CSV path
  std::string summary_output;      ///< summary CSV path

  void validate() const;
};

struct ExperimentRecord {
  SignalFamily family;
  std::size_t d;
  std::size_t n;
  double sigma;
  EstimatorFamily estimator;
  double tuning_value;  ///< lambda for tv/ls, k for le, 0 for mean/identity
  std::size_t replicate;
  std::uint64_t seed;
  double mse;
  std::optional<double> solver_gap;  ///< relative certified gap, tv only
  std::optional<double> wall_time;   ///< seconds, only when timing is recorded
};

struct SummaryRow {
  SignalFamily family;
  std::size_t d;
  std::size_t n;
  EstimatorFamily estimator;
  double best_tuning;
  double best_mse;         ///< replicate mean at best_tuning
  double best_mse_stderr;
  double recommended_tuning;
  double recommended_mse;  ///< replicate mean at the theory-recommended value
  std::size_t replicates;
  std::size_t unconverged;  ///< tv rows whose certificate missed gap_tol
};

struct ExperimentResult {
  std::vector<ExperimentRecord> records;  ///< canonical order
  std::vector<SummaryRow> summary;
};

/// Signal radius used at grid size n: config.radius or the canonical one.
double experiment_radius(const ExperimentConfig& config, std::size_t n);

/// Theory-recommended tuning value at grid size n (0 for mean/identity).
double recommended_tuning(const ExperimentConfig& config, EstimatorFamily estimator, std::size_t n);

/// Tuning grid: recommended value times log-spaced factors; k values rounded,
/// clamped to [1, n] and deduplicated. Always contains the recommended value.
std::vector<double> tuning_grid(const ExperimentConfig& config, EstimatorFamily estimator, std::size_t n);

EstimatorConfig make_estimator(const ExperimentConfig& config, EstimatorFamily estimator, double tuning);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Least-squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log(best_mse) against log(n) for one estimator; needs >= 3 sizes.
double slope_estimate(const std::vector<SummaryRow>& summary, EstimatorFamily estimator);

// CSV output: header row, one row per item, LF endings, floats in shortest
// round-trip form, empty cells for absent optional values.
extern const char* const kRecordColumns;
extern const char* const kSummaryColumns;
void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);
void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path);
void emit_summary(const std::vector<SummaryRow>& summary, const std::string& path);

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

// Flat key=value configuration. '#' starts a comment; blank lines are ignored.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::string& path);

/// Builds a config from keys named like the ExperimentConfig fields
/// (summary_output is also accepted as `summary`, record_timing as `timing`).
/// sigma is required.
ExperimentConfig config_from_key_values(const KeyValues& values);

}  // namespace gridsmooth
