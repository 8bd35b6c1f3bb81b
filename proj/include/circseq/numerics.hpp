#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

namespace circseq {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// 1 - exp(-x) for x >= 0, returning exactly 1 once exp(-x) underflows.
double one_minus_exp_neg(double x);

/// Upper-p quantile of the standard normal: z such that P(Z > z) = p.
/// Wichura's AS 241 (PPND16), relative accuracy about 1e-16.
double normal_upper_quantile(double p);

/// Standard normal quantile (lower tail).
double normal_quantile(double p);

/// Survival function of the limiting Kolmogorov distribution,
/// P(K > t) with K = lim sqrt(n) * D_n.
double kolmogorov_survival(double t);

/// Ratio I_1(kappa) / I_0(kappa), the mean resultant length of a von Mises
/// distribution. Stable for all kappa >= 0.
double bessel_ratio_a1(double kappa);

/// log(I_0(kappa)) for kappa >= 0 without overflow.
double log_bessel_i0(double kappa);

/// Solves bessel_ratio_a1(kappa) = r for kappa >= 0.
double inverse_bessel_ratio_a1(double r);

struct ScalarRoot {
  double x = 0.0;
  int iterations = 0;
};

/// Bisection for a root of a monotone function with f(lo) and f(hi) of
/// opposite sign. Stops when hi - lo <= abs_tol or the bracket cannot shrink.
ScalarRoot bisect(const std::function<double(double)>& f, double lo, double hi,
                  double abs_tol, int max_iter = 400);

struct ScalarMaximum {
  double x = 0.0;
  double value = 0.0;
  std::uintmax_t iterations = 0;
  bool converged = false;
};

/// Brent maximization of f on [lo, hi].
ScalarMaximum maximize_on_interval(const std::function<double(double)>& f,
                                   double lo, double hi,
                                   std::uintmax_t max_iter = 200);

/// Seeded generator used throughout; uniform draws are built from the raw
/// 64-bit output so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Seed for the index-th independent task derived from a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return base + index;
}

}  // namespace circseq
