#include <doctest.h>

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <set>

#include "circseq/errors.hpp"
#include "circseq/numerics.hpp"

using namespace circseq;

TEST_CASE("normal quantile matches the reference value and boost") {
  CHECK(normal_upper_quantile(0.025) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(std::abs(normal_upper_quantile(0.025) - 1.959964) < 1e-6);

  const boost::math::normal_distribution<double> z;
  for (double p : {1e-300, 1e-20, 1e-9, 0.001, 0.025, 0.1, 0.3, 0.5, 0.7,
                   0.9, 0.975, 0.999, 1 - 1e-12}) {
    const double want = boost::math::quantile(z, p);
    CHECK(std::abs(normal_quantile(p) - want) < 1e-9 * std::max(1.0, std::abs(want)));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), ArgumentError);
  CHECK_THROWS_AS(normal_quantile(1.0), ArgumentError);
}

TEST_CASE("Kolmogorov tail") {
  CHECK(kolmogorov_survival(0.0) == 1.0);
  // Classical critical values of the limiting distribution.
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(2e-3));
  CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967).epsilon(1e-6));
  // The two series agree where they hand over.
  const double t = 1.18;
  double alt = 0.0;
  for (int k = 1; k < 50; ++k) alt += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * t * t);
  CHECK(kolmogorov_survival(std::nextafter(t, 0.0)) == doctest::Approx(alt).epsilon(1e-12));
  CHECK(kolmogorov_survival(5.0) < 1e-20);
}

TEST_CASE("Bessel ratio and its inverse") {
  CHECK(bessel_ratio_a1(0.0) == 0.0);
  // Series and asymptotic branches meet continuously.
  const double below = std::cyl_bessel_i(1.0, 499.999) / std::cyl_bessel_i(0.0, 499.999);
  CHECK(bessel_ratio_a1(500.0) == doctest::Approx(below).epsilon(1e-8));
  CHECK(log_bessel_i0(500.0) ==
        doctest::Approx(std::log(std::cyl_bessel_i(0.0, 500.0))).epsilon(1e-12));
  for (double kappa : {1e-3, 0.5, 2.0, 13.86, 150.0, 2000.0}) {
    CHECK(inverse_bessel_ratio_a1(bessel_ratio_a1(kappa)) ==
          doctest::Approx(kappa).epsilon(1e-8));
  }
  CHECK(inverse_bessel_ratio_a1(0.0) == 0.0);
  CHECK_THROWS_AS(inverse_bessel_ratio_a1(1.0), ParameterError);
}

TEST_CASE("bisection and Brent maximization") {
  const auto root = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
  CHECK(root.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(bisect([](double x) { return x + 1.0; }, 0.0, 1.0, 1e-10),
                  ArgumentError);

  const auto best = maximize_on_interval([](double x) { return -(x - 0.3) * (x - 0.3); },
                                         -1.0, 1.0);
  CHECK(best.converged);
  CHECK(best.x == doctest::Approx(0.3).epsilon(1e-7));
}

TEST_CASE("generator is deterministic and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  std::set<std::uint64_t> seen;
  Rng c(7);
  for (int i = 0; i < 2000; ++i) {
    const auto k = c.below(5);
    CHECK(k < 5);
    seen.insert(k);
  }
  CHECK(seen.size() == 5);
  CHECK(one_minus_exp_neg(800.0) == 1.0);
  CHECK(one_minus_exp_neg(1e-20) == doctest::Approx(1e-20).epsilon(1e-12));
}
