#include "gridsmooth/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "gridsmooth/random.hpp"
#include "gridsmooth/theory.hpp"

namespace gridsmooth {

void ExperimentConfig::validate() const {
  if (d < 1) throw ConfigError("d must be >= 1");
  if (side_lengths.empty()) throw ConfigError("side_lengths must not be empty");
  for (std::size_t i = 0; i < side_lengths.size(); ++i) {
    if (side_lengths[i] < 2) throw ConfigError("side lengths must be >= 2");
    if (i > 0 && side_lengths[i] <= side_lengths[i - 1]) throw ConfigError("side_lengths must be increasing");
  }
  if (family == SignalFamily::kPiecewiseConstant && side_lengths.front() < 4)
    throw ConfigError("piecewise_constant needs side lengths >= 4");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be finite and nonnegative");
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (estimators.empty()) throw ConfigError("estimators must not be empty");
  if (tuning_points < 1) throw ConfigError("tuning_points must be >= 1");
  if (!(tuning_span >= 1.0)) throw ConfigError("tuning_span must be >= 1");
  if (radius && !(*radius >= 0.0)) throw ConfigError("radius must be nonnegative");
  if (!(gap_tol > 0.0)) throw ConfigError("gap_tol must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (d < 2 && std::find(estimators.begin(), estimators.end(), EstimatorFamily::kTv) != estimators.end())
    throw ConfigError("the tv tuning rate is defined for d >= 2");
}

namespace {

// Sobolev radius in noise units, the quantity the linear-smoother tunings depend on.
double sobolev_snr_radius(const ExperimentConfig& config, std::size_t n) {
  const double radius = theory::canonical_radii(static_cast<double>(n), config.d).sobolev_radius;
  return config.sigma > 0.0 ? radius / config.sigma : radius;
}

std::vector<double> multiplicative_factors(const ExperimentConfig& config) {
  const std::size_t points = config.tuning_points;
  std::vector<double> factors(points, 1.0);
  if (points == 1) return factors;
  for (std::size_t j = 0; j < points; ++j) {
    const double t = 2.0 * static_cast<double>(j) / static_cast<double>(points - 1) - 1.0;
    factors[j] = std::pow(config.tuning_span, t);
  }
  if (points % 2 == 1) factors[points / 2] = 1.0;
  return factors;
}

struct WorkItem {
  std::size_t size_index;
  std::size_t replicate;
};

std::vector<ExperimentRecord> run_item(const ExperimentConfig& config, const WorkItem& item,
                                       const Signal& theta0) {
  const std::size_t n = theta0.size();
  const std::uint64_t seed = derive_seed(config.base_seed, n, item.replicate);
  const Signal y = add_noise(theta0, config.sigma, seed);
  std::vector<ExperimentRecord> records;
  for (EstimatorFamily family : config.estimators) {
    for (double tuning : tuning_grid(config, family, n)) {
      const auto start = std::chrono::steady_clock::now();
      const EstimateResult result = estimate(y, make_estimator(config, family, tuning));
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      ExperimentRecord record{config.family, config.d, n, config.sigma, family, tuning,
                              item.replicate, seed, mse(result.theta_hat, theta0), std::nullopt,
                              std::nullopt};
      if (family == EstimatorFamily::kTv) record.solver_gap = result.solver_gap;
      if (config.record_timing) record.wall_time = elapsed.count();
      records.push_back(record);
    }
  }
  return records;
}

}  // namespace

double experiment_radius(const ExperimentConfig& config, std::size_t n) {
  if (config.radius) return *config.radius;
  const theory::CanonicalRadii radii = theory::canonical_radii(static_cast<double>(n), config.d);
  return natural_radius_kind(config.family) == RadiusKind::kTv ? radii.tv_radius : radii.sobolev_radius;
}

double recommended_tuning(const ExperimentConfig& config, EstimatorFamily estimator, std::size_t n) {
  const double nn = static_cast<double>(n);
  switch (estimator) {
    case EstimatorFamily::kTv: {
      const double scale = config.sigma > 0.0 ? config.sigma : 1.0;
      return scale * theory::recommended_lambda_tv(nn, config.d);
    }
    case EstimatorFamily::kLaplacianSmoothing:
      return theory::recommended_lambda_ls(nn, config.d, sobolev_snr_radius(config, n));
    case EstimatorFamily::kLaplacianEigenmaps:
      return static_cast<double>(theory::recommended_k(nn, config.d, sobolev_snr_radius(config, n)));
    case EstimatorFamily::kMean:
    case EstimatorFamily::kIdentity:
      return 0.0;
  }
  return 0.0;
}

std::vector<double> tuning_grid(const ExperimentConfig& config, EstimatorFamily estimator, std::size_t n) {
  const double center = recommended_tuning(config, estimator, n);
  std::vector<double> grid;
  switch (estimator) {
    case EstimatorFamily::kMean:
    case EstimatorFamily::kIdentity:
      return {0.0};
    case EstimatorFamily::kLaplacianEigenmaps:
      for (double f : multiplicative_factors(config))
        grid.push_back(std::clamp(std::round(center * f), 1.0, static_cast<double>(n)));
      break;
    default:
      for (double f : multiplicative_factors(config)) grid.push_back(center * f);
      break;
  }
  grid.push_back(center);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

EstimatorConfig make_estimator(const ExperimentConfig& config, EstimatorFamily estimator, double tuning) {
  switch (estimator) {
    case EstimatorFamily::kTv: {
      TvConfig tv;
      tv.lambda = tuning;
      tv.options.gap_tol = config.gap_tol;
      tv.options.max_iter = config.max_iter;
      return tv;
    }
    case EstimatorFamily::kLaplacianSmoothing:
      return SmoothingConfig{tuning};
    case EstimatorFamily::kLaplacianEigenmaps:
      return EigenmapsConfig{static_cast<std::size_t>(tuning)};
    case EstimatorFamily::kMean:
      return MeanConfig{};
    case EstimatorFamily::kIdentity:
      return IdentityConfig{};
  }
  throw ConfigError("unknown estimator");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<Signal> truths;
  for (std::size_t side : config.side_lengths) {
    const GridShape shape = GridShape::cubic(side, config.d);
    SignalSpec spec{config.family, shape, experiment_radius(config, shape.size()),
                    natural_radius_kind(config.family)};
    truths.push_back(generate(spec));
  }

  std::vector<WorkItem> items;
  for (std::size_t s = 0; s < config.side_lengths.size(); ++s)
    for (std::size_t r = 0; r < config.replicates; ++r) items.push_back({s, r});

  std::vector<std::vector<ExperimentRecord>> per_item(items.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        per_item[i] = run_item(config, items[i], truths[items[i].size_index]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(config.threads, items.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto& chunk : per_item)
    result.records.insert(result.records.end(), chunk.begin(), chunk.end());

  auto estimator_rank = [&](EstimatorFamily f) {
    return std::find(config.estimators.begin(), config.estimators.end(), f) - config.estimators.begin();
  };
  std::sort(result.records.begin(), result.records.end(), [&](const ExperimentRecord& a, const ExperimentRecord& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.estimator != b.estimator) return estimator_rank(a.estimator) < estimator_rank(b.estimator);
    if (a.tuning_value != b.tuning_value) return a.tuning_value < b.tuning_value;
    return a.replicate < b.replicate;
  });

  // records are grouped by (n, estimator, tuning) in canonical order
  std::size_t begin = 0;
  while (begin < result.records.size()) {
    const ExperimentRecord& head = result.records[begin];
    std::size_t end = begin;
    std::vector<std::pair<double, std::vector<double>>> by_tuning;
    std::size_t unconverged = 0;
    while (end < result.records.size() && result.records[end].n == head.n &&
           result.records[end].estimator == head.estimator) {
      const ExperimentRecord& rec = result.records[end];
      if (by_tuning.empty() || by_tuning.back().first != rec.tuning_value) by_tuning.push_back({rec.tuning_value, {}});
      by_tuning.back().second.push_back(rec.mse);
      if (rec.solver_gap && *rec.solver_gap > config.gap_tol) ++unconverged;
      ++end;
    }
    const double recommended = recommended_tuning(config, head.estimator, head.n);
    SummaryRow row{config.family, config.d, head.n, head.estimator, 0.0, INFINITY, 0.0, recommended,
                   NAN, config.replicates, unconverged};
    for (const auto& [tuning, values] : by_tuning) {
      const double avg = mean(values);
      if (tuning == recommended) row.recommended_mse = avg;
      if (avg < row.best_mse) {
        row.best_mse = avg;
        row.best_tuning = tuning;
        double ss = 0.0;
        for (double v : values) ss += (v - avg) * (v - avg);
        row.best_mse_stderr = values.size() > 1
                                  ? std::sqrt(ss / static_cast<double>(values.size() - 1) /
                                              static_cast<double>(values.size()))
                                  : 0.0;
      }
    }
    result.summary.push_back(row);
    begin = end;
  }
  return result;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = mean(lx);
  const double my = mean(ly);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: x values must differ");
  return sxy / sxx;
}

double slope_estimate(const std::vector<SummaryRow>& summary, EstimatorFamily estimator) {
  std::vector<double> ns;
  std::vector<double> mses;
  for (const SummaryRow& row : summary) {
    if (row.estimator != estimator) continue;
    ns.push_back(static_cast<double>(row.n));
    mses.push_back(row.best_mse);
  }
  if (ns.size() < 3) throw std::invalid_argument("slope_estimate: need at least 3 grid sizes");
  return loglog_slope(ns, mses);
}

// ---------------------------------------------------------------------------
// CSV

const char* const kRecordColumns =
    "family,d,n,sigma,estimator,tuning_value,replicate,seed,mse,solver_gap,wall_time";
const char* const kSummaryColumns =
    "family,d,n,estimator,best_tuning,best_mse,best_mse_stderr,recommended_tuning,recommended_mse,"
    "replicates,unconverged";

std::string format_double(double x) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, result.ptr);
}

namespace {

std::string optional_cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << kRecordColumns << '\n';
  for (const ExperimentRecord& r : records) {
    out << family_name(r.family) << ',' << r.d << ',' << r.n << ',' << format_double(r.sigma) << ','
        << family_name(r.estimator) << ',' << format_double(r.tuning_value) << ',' << r.replicate << ','
        << r.seed << ',' << format_double(r.mse) << ',' << optional_cell(r.solver_gap) << ','
        << optional_cell(r.wall_time) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << kSummaryColumns << '\n';
  for (const SummaryRow& r : summary) {
    out << family_name(r.family) << ',' << r.d << ',' << r.n << ',' << family_name(r.estimator) << ','
        << format_double(r.best_tuning) << ',' << format_double(r.best_mse) << ','
        << format_double(r.best_mse_stderr) << ',' << format_double(r.recommended_tuning) << ','
        << format_double(r.recommended_mse) << ',' << r.replicates << ',' << r.unconverged << '\n';
  }
}

namespace {

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  write_file(path, [&](std::ostream& out) { write_records_csv(out, records); });
}

void emit_summary(const std::vector<SummaryRow>& summary, const std::string& path) {
  write_file(path, [&](std::ostream& out) { write_summary_csv(out, summary); });
}

}  // namespace gridsmooth
