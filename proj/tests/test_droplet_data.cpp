#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <vector>

#include "circseq/droplet_data.hpp"
#include "circseq/errors.hpp"
#include "circseq/hcwe.hpp"

using namespace circseq;

namespace {

double residual_ss(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& coeffs) {
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) v = v * x[i] + coeffs[j];
    ss += (y[i] - v) * (y[i] - v);
  }
  return ss;
}

}  // namespace

TEST_CASE("digitized series") {
  const auto series = table1_dataset();
  REQUIRE(series.size() == 20);
  CHECK(series.points().front().time_s == 10.0);
  CHECK(series.points().front().angle_rad == 0.811);
  CHECK(series.points()[8].time_s == 100.0);
  CHECK(series.points()[8].angle_rad == 0.261);
  CHECK(series.points().back().time_s == 550.0);
  CHECK(series.points().back().angle_rad == 0.020);
}

TEST_CASE("series validation") {
  CHECK_THROWS_AS(ContactAngleSeries({{1.0, 0.2}, {1.0, 0.3}}), ArgumentError);
  CHECK_THROWS_AS(ContactAngleSeries({{2.0, 0.2}, {1.0, 0.3}}), ArgumentError);
  CHECK_THROWS_AS(ContactAngleSeries({{1.0, -0.2}}), DomainError);
  CHECK_THROWS_AS(ContactAngleSeries({{1.0, 4.0}}), DomainError);
  ExperimentConditions ok;
  CHECK_NOTHROW(ok.validate());
  ExperimentConditions wet;
  wet.relative_humidity = 120.0;
  CHECK_THROWS_AS(wet.validate(), ParameterError);
  ExperimentConditions empty;
  empty.initial_volume = 0.0;
  CHECK_THROWS_AS(empty.validate(), ParameterError);
}

TEST_CASE("polynomial fit recovers exact polynomials") {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i);
    y.push_back(3.0 - 2.0 * i);
  }
  const auto line = fit_polynomial(x, y, 1);
  CHECK(line.coefficients[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(line.coefficients[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(line.r_squared == doctest::Approx(1.0));

  std::vector<double> t, a;
  for (double s = 5.0; s <= 300.0; s += 7.0) {
    t.push_back(s);
    a.push_back(published_time_to_angle_model()(s));
  }
  const auto cubic = fit_polynomial(t, a, 3);
  const auto want = published_time_to_angle_model().coefficients;
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(cubic.coefficients[j] == doctest::Approx(want[j]).epsilon(1e-8));
  }
}

TEST_CASE("polynomial fit error paths") {
  const std::vector<double> same(6, 1.0);
  const std::vector<double> y{1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(fit_polynomial(same, y, 2), SingularFitError);
  const std::vector<double> two{1.0, 2.0, 1.0, 2.0, 1.0, 2.0};
  CHECK_THROWS_AS(fit_polynomial(two, y, 3), SingularFitError);
  CHECK_THROWS_AS(fit_polynomial(y, std::vector<double>{1, 2}, 1), ArgumentError);
  CHECK_THROWS_AS(fit_polynomial(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}, 3),
                  ArgumentError);
}

TEST_CASE("time to angle refit on the digitized series") {
  const auto series = table1_dataset();
  const auto fit = fit_polynomial(series.times(), series.angles(), 3);
  const std::vector<double> want{0.98511, -8.4503e-3, 2.34138e-5, -2.05511e-8};
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(fit.coefficients[j] == doctest::Approx(want[j]).epsilon(1e-4));
  }
  CHECK(std::abs(fit.r_squared - 0.96735) < 1e-4);
  // The published 0.9613 is the adjusted coefficient.
  CHECK(std::abs(fit.adjusted_r_squared - 0.9613) < 0.005);

  const auto published = published_time_to_angle_model();
  for (double s = 5.0; s <= 300.0; s += 1.0) {
    CHECK(std::abs(fit(s) - published(s)) < 0.05);
  }
}

TEST_CASE("least squares optimality") {
  const auto series = table1_dataset();
  const auto x = series.times();
  const auto y = series.angles();
  const auto fit = fit_polynomial(x, y, 3);
  const double best = residual_ss(x, y, fit.coefficients);
  for (std::size_t j = 0; j < 4; ++j) {
    for (double sign : {-1.0, 1.0}) {
      auto c = fit.coefficients;
      c[j] += sign * 1e-4 * std::abs(c[j]);
      CHECK(residual_ss(x, y, c) >= best);
    }
  }
}

TEST_CASE("angle to time fits") {
  const auto pseudo = generate_pseudo_data(published_time_to_angle_model());
  const auto inverse =
      fit_polynomial(pseudo.angles(), pseudo.times(), 3, RegressionDirection::AngleToTime);
  CHECK(std::abs(inverse.r_squared - 0.98) < 0.01);
  const std::vector<double> want{266.69, -872.35, 1331.77, -765.01};
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(inverse.coefficients[j] == doctest::Approx(want[j]).epsilon(1e-4));
  }
  // The same regression on the 20 raw points fits noticeably worse.
  const auto raw = table1_dataset();
  const auto raw_fit =
      fit_polynomial(raw.angles(), raw.times(), 3, RegressionDirection::AngleToTime);
  CHECK(std::abs(raw_fit.r_squared - 0.850) < 0.005);
}

TEST_CASE("contact angle predictions") {
  const auto model = published_time_to_angle_model();
  CHECK(predict_contact_angle(0.0, model) == doctest::Approx(0.985));
  CHECK(std::abs(predict_contact_angle(100.0, model) - 0.3535) < 1e-4);
  CHECK(std::abs(predict_contact_angle(300.0, model) - 0.0025) < 2e-4);
  CHECK_THROWS_AS(predict_contact_angle(600.0, model), OutOfValidityError);
  CHECK_THROWS_AS(predict_contact_angle(-1.0, model), ArgumentError);
  CHECK_THROWS_AS(predict_contact_angle(10.0, published_angle_to_time_model()), ArgumentError);
}

TEST_CASE("pseudo data") {
  const auto pseudo = generate_pseudo_data(published_time_to_angle_model());
  REQUIRE(pseudo.size() == 296);
  CHECK(pseudo.points().front().time_s == 5.0);
  CHECK(pseudo.points().back().time_s == 300.0);
  CHECK(pseudo.angle_sample().mean() == doctest::Approx(0.270239).epsilon(1e-5));
  CHECK(std::abs(hcwe_mle(pseudo.angle_sample()) - 3.69) < 0.02);

  const auto again = generate_pseudo_data(published_time_to_angle_model());
  CHECK(again.angles() == pseudo.angles());

  const auto pair = generate_pseudo_data(published_time_to_angle_model(), {5.0, 6.0, 1.0});
  CHECK(pair.size() == 2);
  CHECK(TimeGrid{0.0, 1.0, 0.1}.size() == 11);
  CHECK_THROWS_AS((TimeGrid{5.0, 5.0, 1.0}.size()), ArgumentError);
  CHECK_THROWS_AS((TimeGrid{5.0, 6.0, 0.0}.size()), ArgumentError);
}

TEST_CASE("drying time") {
  const auto model = published_angle_to_time_model();
  CHECK(std::abs(drying_time(0.2646, model) - 115.1253) < 1e-3);
  CHECK(std::abs(drying_time(0.36, model) - 89.6877) < 1e-3);
  CHECK(std::abs(drying_time(0.78, model) - 33.5708) < 1e-3);
  double previous = drying_time(0.2, model);
  for (double a = 0.21; a <= 0.8; a += 0.01) {
    const double t = drying_time(a, model);
    CHECK(t >= 0.0);
    CHECK(t < previous);
    previous = t;
  }
  CHECK_THROWS_AS(drying_time(1.5, model), OutOfValidityError);
  CHECK_THROWS_AS(drying_time(-0.1, model), ArgumentError);
  CHECK_THROWS_AS(drying_time(0.3, published_time_to_angle_model()), ArgumentError);
}

TEST_CASE("CSV round trip") {
  const auto pseudo = generate_pseudo_data(published_time_to_angle_model());
  std::stringstream buffer;
  write_series_csv(buffer, pseudo);
  const auto back = read_series_csv(buffer);
  REQUIRE(back.size() == pseudo.size());
  CHECK(back.times() == pseudo.times());
  CHECK(back.angles() == pseudo.angles());

  const auto path = std::filesystem::temp_directory_path() / "circseq_series_roundtrip.csv";
  write_series_csv(path.string(), table1_dataset());
  CHECK(read_series_csv(path.string()).angles() == table1_dataset().angles());
  std::filesystem::remove(path);

  std::stringstream headerless("1,0.5\n2,0.4\n");
  CHECK(read_series_csv(headerless).size() == 2);
  std::stringstream bad("time_s,angle_rad\n1,abc\n");
  CHECK_THROWS_AS(read_series_csv(bad), ArgumentError);
  std::stringstream wide("1,0.5,3\n");
  CHECK_THROWS_AS(read_series_csv(wide), ArgumentError);
  CHECK_THROWS_AS(read_series_csv(std::string("/nonexistent/dir/x.csv")), ArgumentError);
}
