#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circseq/droplet_data.hpp"
#include "circseq/hcwe.hpp"

namespace circseq {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double x) const { return lower <= x && x <= upper; }
  bool contains(const Interval& other) const {
    return lower <= other.lower && other.upper <= upper;
  }
};

/// Plug-in estimate of the asymptotic variance of the MLE at lambda_hat.
using VarianceEstimator = double (*)(double lambda_hat);

/// 1 / I(lambda_hat), the default plug-in.
double inverse_fisher_variance(double lambda_hat);

struct StoppingConfig {
  std::size_t m = 5;  // pilot sample size
  double alpha = 0.05;
  double d = 0.1;     // half-width of the interval for lambda
  std::optional<std::size_t> max_n;
  VarianceEstimator variance = inverse_fisher_variance;

  /// Throws ArgumentError unless m >= 2, 0 < alpha < 1, d > 0.
  void validate() const;
  /// z_{alpha/2}.
  double z() const;
  /// (z_{alpha/2} / d)^2 * variance(lambda_hat): the sample size the rule
  /// compares n against.
  double threshold(double lambda_hat) const;
};

struct SequentialResult {
  double d = 0.0;
  std::size_t n_stop = 0;
  double lambda_hat = 0.0;
  Interval ci_lambda;
  Interval ci_mu0;
  /// Empty when the mean-direction interval leaves the inverse model's
  /// validity range (e.g. a capped interval reaching pi/2).
  std::optional<Interval> ci_drying_time;
  bool truncated = false;
  /// Set when ci_lambda.lower <= 0 and the mean-direction upper end was
  /// capped at pi/2.
  bool mu0_capped = false;
};

/// n* = (z_{alpha/2} / d)^2 / I(lambda).
double optimal_sample_size(double lambda, double d, double alpha);

/// Next angle, or nullopt when the source is exhausted.
using AngleStream = std::function<std::optional<double>()>;

/// Purely sequential fixed-width rule: take m pilot angles, then one at a
/// time, stop at the first n >= m with n >= threshold(lambda_hat_n). While the
/// running mean admits no interior MLE the criterion counts as unmet.
/// Exhausting the stream or config.max_n returns the last state flagged
/// truncated.
SequentialResult stopping_rule(const AngleStream& stream,
                               const StoppingConfig& config,
                               const PolynomialModel& drying_model =
                                   published_angle_to_time_model());

SequentialResult stopping_rule(std::span<const double> angles,
                               const StoppingConfig& config,
                               const PolynomialModel& drying_model =
                                   published_angle_to_time_model());

/// [lambda_hat - d, lambda_hat + d]. The lower end may be negative.
Interval fixed_width_interval(double lambda_hat, double d);

struct MeanDirectionInterval {
  Interval interval;
  bool capped = false;
};

/// [atan(1/U), atan(1/L)], with the upper end capped at pi/2 when L <= 0.
MeanDirectionInterval mean_direction_interval(const Interval& ci_lambda);

/// [T(mu_upper), T(mu_lower)] for the decreasing angle->time model T.
Interval drying_time_interval(const Interval& ci_mu0,
                              const PolynomialModel& model);

enum class SubsampleOrder { Ascending, Descending };

inline constexpr std::uint64_t kDefaultTable3Seed = 20210630;

struct Table3Options {
  std::vector<double> d_grid{0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::size_t m = 5;
  double alpha = 0.05;
  std::size_t subsample_size = 250;
  std::uint64_t seed = kDefaultTable3Seed;
  SubsampleOrder order = SubsampleOrder::Ascending;
};

/// Draws one seeded subsample without replacement, sorts it, and runs the
/// stopping rule on that same sequence for every d in the grid.
std::vector<SequentialResult> run_table3_analysis(const AngleSample& data,
                                                  const Table3Options& options = {});

struct CoverageReport {
  double lambda_true = 0.0;
  double d = 0.0;
  double alpha = 0.0;
  std::size_t m = 0;
  std::size_t replications = 0;
  double empirical_coverage = 0.0;
  double mean_stop_time = 0.0;
  double optimal_n = 0.0;
  double efficiency_ratio = 0.0;
  std::size_t truncated_runs = 0;
};

/// Replication i draws from Rng(derive_seed(seed, i)); the report does not
/// depend on the thread count. threads = 0 uses the hardware concurrency.
CoverageReport monte_carlo_coverage(double lambda_true,
                                    const StoppingConfig& config,
                                    std::size_t replications,
                                    std::uint64_t seed, unsigned threads = 0);

std::string table3_csv_header();
std::string to_csv_row(const SequentialResult& result);
std::string coverage_csv_header();
std::string to_csv_row(const CoverageReport& report);

}  // namespace circseq
