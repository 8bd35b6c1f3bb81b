#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "circseq/droplet_data.hpp"
#include "circseq/errors.hpp"
#include "circseq/model_selection.hpp"

using namespace circseq;

TEST_CASE("model ids round trip") {
  for (auto kind : kAllModels) {
    const auto parsed = parse_model_kind(model_id(kind));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == kind);
  }
  CHECK_FALSE(parse_model_kind("gamma").has_value());
  CHECK(parameter_count(ModelKind::Hcwe) == 1);
  CHECK(parameter_count(ModelKind::TransmutedWrappedExponential) == 2);
}

TEST_CASE("KS statistic on a quantile grid") {
  const double lambda = 2.0;
  const std::size_t n = 100;
  std::vector<double> grid;
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(hcwe_quantile((i + 0.5) / n, lambda));
  }
  const auto ks = ks_test(grid, [&](double t) { return hcwe_cdf(t, lambda); });
  // Every ECDF step sits half a step from the true cdf.
  CHECK(ks.statistic == doctest::Approx(0.5 / n).epsilon(1e-9));
  CHECK(ks.p_value > 0.99);

  // Uniform on [0, 1]: D for {0.1, 0.5, 0.9} is max(1/3 - 0.1, 0.5 - 1/3, ...).
  const std::vector<double> three{0.1, 0.5, 0.9};
  const auto u = ks_test(three, [](double x) { return x; });
  double want = 0.0;
  for (int i = 0; i < 3; ++i) {
    want = std::max({want, (i + 1) / 3.0 - three[i], three[i] - i / 3.0});
  }
  CHECK(u.statistic == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("KS rejects a broken cdf") {
  const std::vector<double> xs{0.1, 0.2, 0.3};
  CHECK_THROWS_AS(ks_test(xs, [](double x) { return 1.0 - x; }), ContractError);
  CHECK_THROWS_AS(ks_test(xs, [](double x) { return 2.0 * x + 0.5; }), ContractError);
  CHECK_THROWS_AS(ks_test(std::vector<double>{}, [](double x) { return x; }), ArgumentError);
}

TEST_CASE("KS p-values are roughly uniform under the null") {
  const double lambda = 3.69;
  std::vector<double> p;
  for (int r = 0; r < 200; ++r) {
    const auto s = hcwe_sample(400, lambda, derive_seed(500, r));
    p.push_back(ks_test(s, [&](double t) { return hcwe_cdf(t, lambda); }).p_value);
  }
  std::nth_element(p.begin(), p.begin() + 100, p.end());
  CHECK(p[100] > 0.25);
  CHECK(p[100] < 0.75);
}

TEST_CASE("AIC bookkeeping") {
  CHECK(aic(1, 91.3) == doctest::Approx(2.0 - 182.6));
  const auto data = generate_pseudo_data(published_time_to_angle_model()).angle_sample();
  for (auto kind : kAllModels) {
    const auto r = fit_report(kind, data);
    REQUIRE(r.ok);
    CHECK(r.n == data.size());
    CHECK(r.k == parameter_count(kind));
    CHECK(r.aic == doctest::Approx(2.0 * r.k - 2.0 * r.log_likelihood).epsilon(1e-14));
    CHECK(r.params.size() == r.k);
  }
}

TEST_CASE("HCWE and WE on the pseudo data") {
  const auto data = generate_pseudo_data(published_time_to_angle_model()).angle_sample();
  const auto h = fit_report(ModelKind::Hcwe, data);
  const auto w = fit_report(ModelKind::WrappedExponential, data);
  CHECK(std::abs(h.params[0] - 3.70) < 0.01);
  CHECK(std::abs(h.log_likelihood - 91.3034) < 1e-3);
  CHECK(std::abs(w.log_likelihood - 91.3007) < 1e-3);
  CHECK(h.aic < w.aic);
  // A one-parameter truncation beats von Mises by a wide margin on this data.
  const auto v = fit_report(ModelKind::VonMises, data);
  CHECK(v.log_likelihood < 0.0);
  CHECK(h.aic < v.aic);
}

TEST_CASE("HCWE is preferred to WE on HCWE data") {
  int wins = 0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    const auto s = hcwe_sample(300, 3.69, derive_seed(900, r));
    const auto h = fit_report(ModelKind::Hcwe, s);
    const auto w = fit_report(ModelKind::WrappedExponential, s);
    if (h.ok && w.ok && h.aic <= w.aic) ++wins;
  }
  CHECK(wins >= 90);
}

TEST_CASE("compare_models orders by AIC") {
  const auto data = generate_pseudo_data(published_time_to_angle_model()).angle_sample();
  const auto reports = compare_models(data);
  REQUIRE(reports.size() == 5);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].ok) CHECK(reports[i - 1].aic <= reports[i].aic);
  }
}

TEST_CASE("fit failure is reported, not thrown") {
  const AngleSample flat({2.0, 2.5, 3.0});
  const auto r = fit_report(ModelKind::Hcwe, flat);
  CHECK_FALSE(r.ok);
  CHECK(std::isnan(r.aic));
  CHECK_FALSE(r.diagnostic.empty());

  const auto v = fit_report(ModelKind::VonMises, AngleSample({0.7, 0.7}));
  CHECK_FALSE(v.ok);
  CHECK(v.diagnostic.find("resultant") != std::string::npos);
}

TEST_CASE("CSV row") {
  FitReport r;
  r.model_id = "twe";
  r.k = 2;
  r.params = {3.3, 0.25};
  r.log_likelihood = 1.5;
  r.aic = 1.0;
  r.ks_statistic = 0.125;
  r.ks_p_value = 0.5;
  CHECK(fit_report_csv_header() ==
        "model_id,k,params,log_likelihood,aic,ks_statistic,ks_p_value");
  CHECK(to_csv_row(r) == "twe,2,3.2999999999999998;0.25,1.5,1,0.125,0.5");
}

TEST_CASE("raw digitized series fits HCWE acceptably") {
  // On the 20 digitized points the exact small-sample KS p-value is about
  // 0.18; the limiting tail used here gives about 0.21.
  const auto r = fit_report(ModelKind::Hcwe, table1_dataset().angle_sample());
  REQUIRE(r.ok);
  CHECK(std::abs(r.params[0] - 3.435) < 0.01);
  CHECK(std::abs(r.ks_statistic - 0.2367) < 1e-3);
  CHECK(std::abs(r.ks_p_value - 0.212) < 0.005);
}
