#include "circseq/hcwe.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "circseq/errors.hpp"

namespace circseq {

namespace {

constexpr double kMleTolerance = 1e-10;
constexpr double kMleLowerBracket = 1e-8;

void require_rate(double lambda, const char* where) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError(std::string(where) + ": lambda must be > 0, got " +
                         std::to_string(lambda));
  }
}

// 1 - exp(-pi lambda), the truncation mass.
double truncation_mass(double lambda) {
  return one_minus_exp_neg(kPi * lambda);
}

}  // namespace

AngleSample::AngleSample(std::vector<double> angles)
    : angles_(std::move(angles)) {
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    const double a = angles_[i];
    if (!(a >= 0.0 && a < kPi)) {
      throw DomainError("AngleSample: angle " + std::to_string(i) + " = " +
                        std::to_string(a) + " is outside [0, pi)");
    }
  }
}

double AngleSample::mean() const {
  if (angles_.empty()) throw ArgumentError("AngleSample::mean: empty sample");
  return std::accumulate(angles_.begin(), angles_.end(), 0.0) /
         static_cast<double>(angles_.size());
}

HcweModel::HcweModel(double lambda) : lambda_(lambda) {
  require_rate(lambda, "HcweModel");
}

double HcweModel::pdf(double theta) const { return hcwe_pdf(theta, lambda_); }

double HcweModel::log_pdf(double theta) const {
  if (!(theta >= 0.0 && theta < kPi)) {
    throw DomainError("HcweModel::log_pdf: theta outside [0, pi)");
  }
  return std::log(lambda_) - lambda_ * theta -
         std::log(truncation_mass(lambda_));
}

double HcweModel::cdf(double theta) const { return hcwe_cdf(theta, lambda_); }

double HcweModel::quantile(double u) const {
  return hcwe_quantile(u, lambda_);
}

double HcweModel::mean() const { return hcwe_mean(lambda_); }

double HcweModel::mean_direction() const {
  return hcwe_mean_direction(lambda_);
}

double HcweModel::fisher_information() const {
  return hcwe_fisher_information(lambda_);
}

double HcweModel::log_likelihood(const AngleSample& sample) const {
  if (sample.empty()) throw ArgumentError("log_likelihood: empty sample");
  const double n = static_cast<double>(sample.size());
  return n * (std::log(lambda_) - std::log(truncation_mass(lambda_))) -
         lambda_ * sample.mean() * n;
}

double hcwe_pdf(double theta, double lambda) {
  require_rate(lambda, "hcwe_pdf");
  if (!(theta >= 0.0 && theta < kPi)) {
    throw DomainError("hcwe_pdf: theta must lie in [0, pi), got " +
                      std::to_string(theta));
  }
  return lambda * std::exp(-lambda * theta) / truncation_mass(lambda);
}

double hcwe_cdf(double theta, double lambda) {
  require_rate(lambda, "hcwe_cdf");
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw DomainError("hcwe_cdf: theta must lie in [0, pi], got " +
                      std::to_string(theta));
  }
  return one_minus_exp_neg(lambda * theta) / truncation_mass(lambda);
}

double hcwe_quantile(double u, double lambda) {
  require_rate(lambda, "hcwe_quantile");
  if (!(u >= 0.0 && u < 1.0)) {
    throw DomainError("hcwe_quantile: u must lie in [0, 1)");
  }
  const double theta = -std::log1p(-u * truncation_mass(lambda)) / lambda;
  // Rounding near u -> 1 may land on pi itself, which is excluded.
  return theta < kPi ? theta : std::nextafter(kPi, 0.0);
}

std::complex<double> hcwe_characteristic_fn(int p, double lambda) {
  require_rate(lambda, "hcwe_characteristic_fn");
  return 1.0 / std::complex<double>(1.0, -static_cast<double>(p) / lambda);
}

std::complex<double> hcwe_trig_moment(int p, double lambda) {
  require_rate(lambda, "hcwe_trig_moment");
  const std::complex<double> base =
      lambda / std::complex<double>(lambda, -static_cast<double>(p));
  if (p % 2 == 0) return base;
  // (1 + e^{-pi lambda}) / (1 - e^{-pi lambda}) = coth(pi lambda / 2)
  const double tail = kPi * lambda > 700.0 ? 0.0 : std::exp(-kPi * lambda);
  return base * ((1.0 + tail) / truncation_mass(lambda));
}

double hcwe_mean_direction(double lambda) {
  require_rate(lambda, "hcwe_mean_direction");
  return std::atan(1.0 / lambda);
}

double hcwe_exact_mean_direction(double lambda) {
  const auto m1 = hcwe_trig_moment(1, lambda);
  return std::atan2(m1.imag(), m1.real());
}

double hcwe_mean(double lambda) {
  require_rate(lambda, "hcwe_mean");
  const double x = kPi * lambda;
  if (x < 1e-3) {
    // pi * (1/2 - x/12 + x^3/720): avoids cancellation of 1/lambda terms.
    return kPi * (0.5 - x / 12.0 + x * x * x / 720.0);
  }
  return 1.0 / lambda - kPi / std::expm1(x);
}

double hcwe_fisher_information(double lambda) {
  require_rate(lambda, "hcwe_fisher_information");
  const double y = 0.5 * kPi * lambda;
  if (y < 1e-2) {
    const double y2 = y * y;
    return 0.25 * kPi * kPi * (1.0 / 3.0 - y2 / 15.0 + 2.0 * y2 * y2 / 189.0);
  }
  const double tail = kPi / (2.0 * std::sinh(y));
  return 1.0 / (lambda * lambda) - tail * tail;
}

double hcwe_draw(Rng& rng, double lambda) {
  return hcwe_quantile(rng.uniform(), lambda);
}

AngleSample hcwe_sample(std::size_t n, double lambda, std::uint64_t seed) {
  if (n == 0) throw ArgumentError("hcwe_sample: n must be >= 1");
  require_rate(lambda, "hcwe_sample");
  Rng rng(seed);
  std::vector<double> draws(n);
  for (auto& d : draws) d = hcwe_draw(rng, lambda);
  return AngleSample(std::move(draws));
}

double hcwe_score(double lambda, double sample_mean) {
  return hcwe_mean(lambda) - sample_mean;
}

double hcwe_mle_from_mean(double sample_mean) {
  if (!(sample_mean > 0.0)) {
    throw NoInteriorMleError(
        "hcwe_mle: sample mean is 0, likelihood increases without bound in "
        "lambda");
  }
  if (sample_mean >= kPi / 2.0) {
    throw NoInteriorMleError(
        "hcwe_mle: sample mean >= pi/2, likelihood is maximized at lambda -> "
        "0");
  }
  auto score = [sample_mean](double l) { return hcwe_score(l, sample_mean); };
  double lo = kMleLowerBracket;
  while (score(lo) <= 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) {
      throw NoInteriorMleError("hcwe_mle: sample mean indistinguishable from pi/2");
    }
  }
  double hi = 1.0;
  while (score(hi) >= 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) {
      throw NoInteriorMleError("hcwe_mle: sample mean too close to 0");
    }
  }
  if (hi / 2.0 > lo && score(hi / 2.0) > 0.0) lo = hi / 2.0;
  return bisect(score, lo, hi, kMleTolerance).x;
}

double hcwe_mle(const AngleSample& sample) {
  if (sample.empty()) throw ArgumentError("hcwe_mle: empty sample");
  return hcwe_mle_from_mean(sample.mean());
}

}  // namespace circseq
