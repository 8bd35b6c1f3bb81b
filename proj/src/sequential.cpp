#include "circseq/sequential.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "circseq/csv.hpp"
#include "circseq/errors.hpp"

namespace circseq {

namespace {

constexpr std::size_t kDefaultMonteCarloCap = 10'000'000;

void check_angle(double a, std::size_t index) {
  if (!(a >= 0.0 && a < kPi)) {
    throw DomainError("stopping_rule: observation " + std::to_string(index) +
                      " = " + std::to_string(a) + " is outside [0, pi)");
  }
}

SequentialResult finish(const StoppingConfig& config, std::size_t n,
                        double lambda_hat, bool truncated,
                        const PolynomialModel& drying_model) {
  SequentialResult r;
  r.d = config.d;
  r.n_stop = n;
  r.lambda_hat = lambda_hat;
  r.truncated = truncated;
  r.ci_lambda = fixed_width_interval(lambda_hat, config.d);
  const auto mu = mean_direction_interval(r.ci_lambda);
  r.ci_mu0 = mu.interval;
  r.mu0_capped = mu.capped;
  try {
    r.ci_drying_time = drying_time_interval(r.ci_mu0, drying_model);
  } catch (const OutOfValidityError&) {
    r.ci_drying_time.reset();
  }
  return r;
}

}  // namespace

double inverse_fisher_variance(double lambda_hat) {
  return 1.0 / hcwe_fisher_information(lambda_hat);
}

void StoppingConfig::validate() const {
  if (m < 2) throw ArgumentError("StoppingConfig: pilot size m must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError("StoppingConfig: alpha must lie in (0, 1)");
  }
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw ArgumentError("StoppingConfig: half-width d must be > 0");
  }
  if (max_n && *max_n < m) {
    throw ArgumentError("StoppingConfig: max_n must be >= m");
  }
  if (variance == nullptr) throw ArgumentError("StoppingConfig: no variance estimator");
}

double StoppingConfig::z() const { return normal_upper_quantile(alpha / 2.0); }

double StoppingConfig::threshold(double lambda_hat) const {
  const double ratio = z() / d;
  return ratio * ratio * variance(lambda_hat);
}

double optimal_sample_size(double lambda, double d, double alpha) {
  if (!(lambda > 0.0)) throw ArgumentError("optimal_sample_size: lambda must be > 0");
  StoppingConfig config;
  config.d = d;
  config.alpha = alpha;
  config.validate();
  return config.threshold(lambda);
}

SequentialResult stopping_rule(const AngleStream& stream,
                               const StoppingConfig& config,
                               const PolynomialModel& drying_model) {
  config.validate();
  const double ratio = config.z() / config.d;
  const double scale = ratio * ratio;

  double sum = 0.0;
  std::size_t n = 0;
  for (; n < config.m; ++n) {
    const auto next = stream();
    if (!next) {
      throw InsufficientDataError("stopping_rule: stream ended after " +
                                  std::to_string(n) + " of " +
                                  std::to_string(config.m) +
                                  " pilot observations");
    }
    check_angle(*next, n);
    sum += *next;
  }

  std::optional<double> lambda_hat;
  for (;;) {
    const double mean = sum / static_cast<double>(n);
    if (mean > 0.0 && mean < kPi / 2.0) {
      lambda_hat = hcwe_mle_from_mean(mean);
      if (static_cast<double>(n) >= scale * config.variance(*lambda_hat)) {
        return finish(config, n, *lambda_hat, false, drying_model);
      }
    }
    if (config.max_n && n >= *config.max_n) break;
    const auto next = stream();
    if (!next) break;
    check_angle(*next, n);
    sum += *next;
    ++n;
  }
  if (!lambda_hat) {
    throw NoInteriorMleError(
        "stopping_rule: data exhausted before any interior MLE existed");
  }
  // The running mean may have left the interior after the last valid MLE;
  // report the estimate at the final n when it exists.
  const double mean = sum / static_cast<double>(n);
  if (mean > 0.0 && mean < kPi / 2.0) lambda_hat = hcwe_mle_from_mean(mean);
  return finish(config, n, *lambda_hat, true, drying_model);
}

SequentialResult stopping_rule(std::span<const double> angles,
                               const StoppingConfig& config,
                               const PolynomialModel& drying_model) {
  std::size_t next = 0;
  AngleStream stream = [&]() -> std::optional<double> {
    if (next >= angles.size()) return std::nullopt;
    return angles[next++];
  };
  return stopping_rule(stream, config, drying_model);
}

Interval fixed_width_interval(double lambda_hat, double d) {
  if (!(d > 0.0)) throw ArgumentError("fixed_width_interval: d must be > 0");
  if (!std::isfinite(lambda_hat)) {
    throw ArgumentError("fixed_width_interval: lambda_hat must be finite");
  }
  return {lambda_hat - d, lambda_hat + d};
}

MeanDirectionInterval mean_direction_interval(const Interval& ci_lambda) {
  if (!(ci_lambda.upper >= ci_lambda.lower)) {
    throw ArgumentError("mean_direction_interval: upper < lower");
  }
  if (!(ci_lambda.upper > 0.0)) {
    throw DegenerateIntervalError(
        "mean_direction_interval: upper lambda bound must be > 0");
  }
  MeanDirectionInterval out;
  out.interval.lower = hcwe_mean_direction(ci_lambda.upper);
  if (ci_lambda.lower > 0.0) {
    out.interval.upper = hcwe_mean_direction(ci_lambda.lower);
  } else {
    out.interval.upper = kPi / 2.0;
    out.capped = true;
  }
  return out;
}

Interval drying_time_interval(const Interval& ci_mu0,
                              const PolynomialModel& model) {
  if (!(ci_mu0.upper >= ci_mu0.lower)) {
    throw ArgumentError("drying_time_interval: upper < lower");
  }
  // The endpoint map is only valid where the model is decreasing.
  constexpr int kChecks = 64;
  const double h = 1e-6;
  for (int i = 0; i <= kChecks; ++i) {
    const double ca = ci_mu0.lower + ci_mu0.width() * i / kChecks;
    const double slope = (model(ca + h) - model(std::max(ca - h, 0.0))) /
                         (ca + h - std::max(ca - h, 0.0));
    if (!(slope < 0.0)) {
      throw OutOfValidityError(
          "drying_time_interval: inverse model is not decreasing at CA = " +
          std::to_string(ca));
    }
  }
  return {drying_time(ci_mu0.upper, model), drying_time(ci_mu0.lower, model)};
}

std::vector<SequentialResult> run_table3_analysis(const AngleSample& data,
                                                  const Table3Options& options) {
  if (options.d_grid.empty()) throw ArgumentError("run_table3_analysis: empty d grid");
  if (options.subsample_size > data.size()) {
    throw ArgumentError("run_table3_analysis: subsample of " +
                        std::to_string(options.subsample_size) +
                        " exceeds data size " + std::to_string(data.size()));
  }
  if (options.subsample_size < options.m) {
    throw ArgumentError("run_table3_analysis: subsample smaller than pilot size");
  }
  std::vector<double> pool(data.angles().begin(), data.angles().end());
  Rng rng(options.seed);
  // Partial Fisher-Yates: the first subsample_size slots are the draw.
  for (std::size_t i = 0; i < options.subsample_size; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(options.subsample_size);
  if (options.order == SubsampleOrder::Ascending) {
    std::sort(pool.begin(), pool.end());
  } else {
    std::sort(pool.begin(), pool.end(), std::greater<>());
  }

  std::vector<SequentialResult> results;
  results.reserve(options.d_grid.size());
  for (double d : options.d_grid) {
    StoppingConfig config;
    config.m = options.m;
    config.alpha = options.alpha;
    config.d = d;
    results.push_back(stopping_rule(std::span<const double>(pool), config));
  }
  return results;
}

CoverageReport monte_carlo_coverage(double lambda_true,
                                    const StoppingConfig& config,
                                    std::size_t replications,
                                    std::uint64_t seed, unsigned threads) {
  config.validate();
  if (!(lambda_true > 0.0)) throw ArgumentError("monte_carlo_coverage: lambda must be > 0");
  if (replications < 1) throw ArgumentError("monte_carlo_coverage: replications must be >= 1");

  StoppingConfig run_config = config;
  if (!run_config.max_n) run_config.max_n = kDefaultMonteCarloCap;

  struct Outcome {
    std::size_t n = 0;
    bool covered = false;
    bool truncated = false;
  };
  std::vector<Outcome> outcomes(replications);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= replications) return;
      Rng rng(derive_seed(seed, i));
      AngleStream stream = [&rng, lambda_true]() -> std::optional<double> {
        return hcwe_draw(rng, lambda_true);
      };
      const auto r = stopping_rule(stream, run_config);
      outcomes[i] = {r.n_stop, r.ci_lambda.contains(lambda_true), r.truncated};
    }
  };
  unsigned pool = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  pool = static_cast<unsigned>(std::min<std::size_t>(pool, replications));
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 1; t < pool; ++t) workers.emplace_back(worker);
    worker();
  }

  CoverageReport report;
  report.lambda_true = lambda_true;
  report.d = config.d;
  report.alpha = config.alpha;
  report.m = config.m;
  report.replications = replications;
  std::size_t covered = 0;
  double total_n = 0.0;
  for (const auto& o : outcomes) {
    covered += o.covered ? 1 : 0;
    total_n += static_cast<double>(o.n);
    report.truncated_runs += o.truncated ? 1 : 0;
  }
  report.empirical_coverage = static_cast<double>(covered) / static_cast<double>(replications);
  report.mean_stop_time = total_n / static_cast<double>(replications);
  report.optimal_n = optimal_sample_size(lambda_true, config.d, config.alpha);
  report.efficiency_ratio = report.mean_stop_time / report.optimal_n;
  return report;
}

std::string table3_csv_header() {
  return "d,N,lambda_lower,lambda_upper,mu0_lower,mu0_upper,drying_lower_s,"
         "drying_upper_s,truncated";
}

std::string to_csv_row(const SequentialResult& r) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto dry = r.ci_drying_time.value_or(Interval{nan, nan});
  return csv::format(r.d) + "," + std::to_string(r.n_stop) + "," +
         csv::format(r.ci_lambda.lower) + "," + csv::format(r.ci_lambda.upper) +
         "," + csv::format(r.ci_mu0.lower) + "," + csv::format(r.ci_mu0.upper) +
         "," + csv::format(dry.lower) + "," + csv::format(dry.upper) + "," +
         (r.truncated ? "true" : "false");
}

std::string coverage_csv_header() {
  return "lambda_true,d,alpha,m,replications,coverage,mean_N,optimal_n,"
         "efficiency_ratio";
}

std::string to_csv_row(const CoverageReport& r) {
  return csv::format(r.lambda_true) + "," + csv::format(r.d) + "," +
         csv::format(r.alpha) + "," + std::to_string(r.m) + "," +
         std::to_string(r.replications) + "," +
         csv::format(r.empirical_coverage) + "," +
         csv::format(r.mean_stop_time) + "," + csv::format(r.optimal_n) + "," +
         csv::format(r.efficiency_ratio);
}

}  // namespace circseq
