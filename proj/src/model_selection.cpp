#include "circseq/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "circseq/csv.hpp"
#include "circseq/errors.hpp"

namespace circseq {

namespace {

CompetitorKind to_competitor(ModelKind kind) {
  switch (kind) {
    case ModelKind::WrappedExponential: return CompetitorKind::WrappedExponential;
    case ModelKind::TransmutedWrappedExponential:
      return CompetitorKind::TransmutedWrappedExponential;
    case ModelKind::WrappedLindley: return CompetitorKind::WrappedLindley;
    case ModelKind::VonMises: return CompetitorKind::VonMises;
    case ModelKind::Hcwe: break;
  }
  throw ArgumentError("HCWE is not a competitor model");
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string_view model_id(ModelKind kind) {
  if (kind == ModelKind::Hcwe) return "hcwe";
  return model_id(to_competitor(kind));
}

std::size_t parameter_count(ModelKind kind) {
  if (kind == ModelKind::Hcwe) return 1;
  return parameter_count(to_competitor(kind));
}

std::optional<ModelKind> parse_model_kind(std::string_view id) {
  for (auto kind : kAllModels) {
    if (model_id(kind) == id) return kind;
  }
  return std::nullopt;
}

KsResult ks_test(std::span<const double> sample,
                 const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ArgumentError("ks_test: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  double previous = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    if (!(f >= 0.0 && f <= 1.0)) {
      throw ContractError("ks_test: cdf returned " + std::to_string(f) +
                          " outside [0, 1]");
    }
    if (f < previous) {
      throw ContractError("ks_test: cdf is not monotone on the sample points");
    }
    previous = f;
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

FittedModel fit_model(ModelKind kind, const AngleSample& sample) {
  if (kind == ModelKind::Hcwe) {
    const HcweModel model(hcwe_mle(sample));
    return {kind,
            {model.lambda()},
            [model](double t) { return model.pdf(t); },
            [model](double t) { return model.cdf(t); }};
  }
  const auto model = fit_competitor(to_competitor(kind), sample);
  return {kind, model.params(),
          [model](double t) { return competitor_pdf(model, t); },
          [model](double t) { return competitor_cdf(model, t); }};
}

double aic(std::size_t k, double log_likelihood) {
  return 2.0 * static_cast<double>(k) - 2.0 * log_likelihood;
}

FitReport fit_report(ModelKind kind, const AngleSample& sample) {
  if (sample.empty()) throw ArgumentError("fit_report: empty sample");
  FitReport report;
  report.model_id = std::string(model_id(kind));
  report.k = parameter_count(kind);
  report.n = sample.size();
  try {
    const auto fitted = fit_model(kind, sample);
    report.params = fitted.params;
    if (kind == ModelKind::Hcwe) {
      report.log_likelihood = HcweModel(fitted.params[0]).log_likelihood(sample);
    } else {
      report.log_likelihood = competitor_log_likelihood(
          CompetitorModel(to_competitor(kind), fitted.params), sample);
    }
    report.aic = aic(report.k, report.log_likelihood);
    const auto ks = ks_test(sample, fitted.cdf);
    report.ks_statistic = ks.statistic;
    report.ks_p_value = ks.p_value;
  } catch (const FitFailure& e) {
    report.ok = false;
    report.diagnostic = std::string(e.what()) + " [" + e.diagnostics() + "]";
  } catch (const NoInteriorMleError& e) {
    report.ok = false;
    report.diagnostic = e.what();
  }
  if (!report.ok) {
    report.log_likelihood = report.aic = kNaN;
    report.ks_statistic = report.ks_p_value = kNaN;
  }
  return report;
}

std::vector<FitReport> compare_models(const AngleSample& sample) {
  std::vector<FitReport> reports;
  for (auto kind : kAllModels) reports.push_back(fit_report(kind, sample));
  std::stable_sort(reports.begin(), reports.end(),
                   [](const FitReport& a, const FitReport& b) {
                     if (a.ok != b.ok) return a.ok;
                     return a.ok && a.aic < b.aic;
                   });
  return reports;
}

std::string fit_report_csv_header() {
  return "model_id,k,params,log_likelihood,aic,ks_statistic,ks_p_value";
}

std::string to_csv_row(const FitReport& r) {
  return r.model_id + "," + std::to_string(r.k) + "," + csv::join(r.params, ';') +
         "," + csv::format(r.log_likelihood) + "," + csv::format(r.aic) + "," +
         csv::format(r.ks_statistic) + "," + csv::format(r.ks_p_value);
}

}  // namespace circseq
