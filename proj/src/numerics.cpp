#include "circseq/numerics.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "circseq/errors.hpp"

namespace circseq {

namespace {

template <std::size_t N>
double horner(const std::array<double, N>& c, double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// AS 241 coefficients, lowest order first.
constexpr std::array<double, 8> kA = {
    3.3871328727963666080e0,  1.3314166789178437745e+2,
    1.9715909503065514427e+3, 1.3731693765509461125e+4,
    4.5921953931549871457e+4, 6.7265770927008700853e+4,
    3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr std::array<double, 8> kB = {
    1.0,                      4.2313330701600911252e+1,
    6.8718700749205790830e+2, 5.3941960214247511077e+3,
    2.1213794301586595867e+4, 3.9307895800092710610e+4,
    2.8729085735721942674e+4, 5.2264952788528545610e+3};
constexpr std::array<double, 8> kC = {
    1.42343711074968357734e0,  4.63033784615654529590e0,
    5.76949722146069140550e0,  3.64784832476320460504e0,
    1.27045825245236838258e0,  2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr std::array<double, 8> kD = {
    1.0,                       2.05319162663775882187e0,
    1.67638483018380384940e0,  6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9};
constexpr std::array<double, 8> kE = {
    6.65790464350110377720e0,  5.46378491116411436990e0,
    1.78482653991729133580e0,  2.96560571828504891230e-1,
    2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr std::array<double, 8> kF = {
    1.0,                       5.99832206555887937690e-1,
    1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15};

constexpr double kBesselAsymptoticThreshold = 500.0;

// Hankel asymptotic series for exp(-x) * sqrt(2 pi x) * I_nu(x).
double scaled_bessel_i_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (k * 8.0 * x);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double one_minus_exp_neg(double x) {
  // exp(-x) is below the smallest normal double past this point.
  if (x > 700.0) return 1.0;
  return -std::expm1(-x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ArgumentError("normal_quantile: p must lie in (0, 1), got " +
                        std::to_string(p));
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(kA, r) / horner(kB, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = horner(kC, r) / horner(kD, r);
  } else {
    r -= 5.0;
    value = horner(kE, r) / horner(kF, r);
  }
  return q < 0.0 ? -value : value;
}

double normal_upper_quantile(double p) { return -normal_quantile(p); }

double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 1.18) {
    // Jacobi theta form, converges fast for small t.
    const double w = kPi * kPi / (8.0 * t * t);
    double sum = 0.0;
    for (int k = 1; k <= 40; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * w);
      sum += term;
      if (term < 1e-18) break;
    }
    const double cdf = std::sqrt(kTwoPi) / t * sum;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double bessel_ratio_a1(double kappa) {
  if (kappa < 0.0) throw ParameterError("bessel_ratio_a1: kappa must be >= 0");
  if (kappa == 0.0) return 0.0;
  if (kappa < kBesselAsymptoticThreshold) {
    return std::cyl_bessel_i(1.0, kappa) / std::cyl_bessel_i(0.0, kappa);
  }
  return scaled_bessel_i_asymptotic(1, kappa) /
         scaled_bessel_i_asymptotic(0, kappa);
}

double log_bessel_i0(double kappa) {
  if (kappa < 0.0) throw ParameterError("log_bessel_i0: kappa must be >= 0");
  if (kappa < kBesselAsymptoticThreshold) {
    return std::log(std::cyl_bessel_i(0.0, kappa));
  }
  return kappa - 0.5 * std::log(kTwoPi * kappa) +
         std::log(scaled_bessel_i_asymptotic(0, kappa));
}

double inverse_bessel_ratio_a1(double r) {
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) {
    throw ParameterError("inverse_bessel_ratio_a1: resultant length must be < 1");
  }
  double hi = 1.0;
  while (bessel_ratio_a1(hi) < r) {
    hi *= 2.0;
    if (hi > 1e12) throw FitFailure("inverse_bessel_ratio_a1: no bracket",
                                    "r=" + std::to_string(r));
  }
  const auto root = bisect([r](double k) { return bessel_ratio_a1(k) - r; },
                           0.0, hi, 1e-12 * hi);
  return root.x;
}

ScalarRoot bisect(const std::function<double(double)>& f, double lo, double hi,
                  double abs_tol, int max_iter) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, 0};
  if (f_hi == 0.0) return {hi, 0};
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw ArgumentError("bisect: endpoints do not bracket a root");
  }
  int it = 0;
  while (it < max_iter && hi - lo > abs_tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    ++it;
    if (f_mid == 0.0) return {mid, it};
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return {lo + 0.5 * (hi - lo), it};
}

ScalarMaximum maximize_on_interval(const std::function<double(double)>& f,
                                   double lo, double hi,
                                   std::uintmax_t max_iter) {
  std::uintmax_t iterations = max_iter;
  auto negated = [&f](double x) {
    const double v = f(x);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::max();
  };
  const auto [x, neg_value] = boost::math::tools::brent_find_minima(
      negated, lo, hi, std::numeric_limits<double>::digits / 2, iterations);
  return {x, -neg_value, iterations, iterations < max_iter};
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ArgumentError("Rng::below: n must be positive");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

}  // namespace circseq
