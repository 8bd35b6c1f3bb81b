#pragma once

// Test-only numerical oracles, independent of the closed forms under test.

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace circseq::testing {

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, 15, 1e-13);
}

}  // namespace circseq::testing
