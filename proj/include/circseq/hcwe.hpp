#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "circseq/numerics.hpp"

namespace circseq {

/// Angles in radians on the half circle, each in [0, pi).
class AngleSample {
 public:
  AngleSample() = default;
  /// Throws DomainError if any angle falls outside [0, pi).
  explicit AngleSample(std::vector<double> angles);

  std::span<const double> angles() const { return angles_; }
  std::size_t size() const { return angles_.size(); }
  bool empty() const { return angles_.empty(); }
  double mean() const;

 private:
  std::vector<double> angles_;
};

/// Half-circular wrapped exponential: an exponential with rate lambda
/// truncated to [0, pi). Equivalent to reducing the exponential mod pi.
class HcweModel {
 public:
  /// Throws ParameterError unless lambda > 0.
  explicit HcweModel(double lambda);

  double lambda() const { return lambda_; }

  double pdf(double theta) const;
  double log_pdf(double theta) const;
  double cdf(double theta) const;
  double quantile(double u) const;
  double mean() const;
  double mean_direction() const;
  double fisher_information() const;
  double log_likelihood(const AngleSample& sample) const;

 private:
  double lambda_;
};

double hcwe_pdf(double theta, double lambda);
double hcwe_cdf(double theta, double lambda);

/// Inverse cdf on u in [0, 1); this is the sampler's transform.
double hcwe_quantile(double u, double lambda);

/// 1 / (1 - i p / lambda), the untruncated exponential form.
std::complex<double> hcwe_characteristic_fn(int p, double lambda);

/// Exact p-th trigonometric moment E[exp(i p theta)] of the truncated density.
std::complex<double> hcwe_trig_moment(int p, double lambda);

/// arctan(1 / lambda).
double hcwe_mean_direction(double lambda);

/// atan2(E[sin], E[cos]) from the exact first trigonometric moment.
double hcwe_exact_mean_direction(double lambda);

/// E[theta] = 1/lambda - pi / (exp(pi lambda) - 1). Strictly decreasing from
/// pi/2 (lambda -> 0) to 0.
double hcwe_mean(double lambda);

/// Per-observation Fisher information,
/// 1/lambda^2 - pi^2 exp(pi lambda) / (exp(pi lambda) - 1)^2.
double hcwe_fisher_information(double lambda);

/// n iid draws; deterministic in seed.
AngleSample hcwe_sample(std::size_t n, double lambda, std::uint64_t seed);

/// Single draw from a caller-owned generator.
double hcwe_draw(Rng& rng, double lambda);

/// Per-observation score residual 1/lambda - pi/(exp(pi lambda)-1) - mean.
double hcwe_score(double lambda, double sample_mean);

/// MLE from a sample mean; throws NoInteriorMleError when mean >= pi/2 or
/// mean <= 0.
double hcwe_mle_from_mean(double sample_mean);

double hcwe_mle(const AngleSample& sample);

}  // namespace circseq
