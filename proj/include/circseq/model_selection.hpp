#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "circseq/competitors.hpp"
#include "circseq/hcwe.hpp"

namespace circseq {

enum class ModelKind { Hcwe, WrappedExponential, TransmutedWrappedExponential, WrappedLindley, VonMises };

inline constexpr ModelKind kAllModels[] = {
    ModelKind::Hcwe, ModelKind::WrappedExponential,
    ModelKind::TransmutedWrappedExponential, ModelKind::WrappedLindley,
    ModelKind::VonMises};

std::string_view model_id(ModelKind kind);
std::size_t parameter_count(ModelKind kind);
/// Accepts "hcwe", "we", "twe", "wl", "vonmises".
std::optional<ModelKind> parse_model_kind(std::string_view id);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test. The statistic is exact from the order
/// statistics; the p-value is the limiting Kolmogorov tail of sqrt(n) D_n and
/// does not correct for estimated parameters.
KsResult ks_test(std::span<const double> sample,
                 const std::function<double(double)>& cdf);

inline KsResult ks_test(const AngleSample& sample,
                        const std::function<double(double)>& cdf) {
  return ks_test(sample.angles(), cdf);
}

/// A fitted model as a closed-over density and distribution function.
struct FittedModel {
  ModelKind kind;
  std::vector<double> params;
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
};

FittedModel fit_model(ModelKind kind, const AngleSample& sample);

struct FitReport {
  std::string model_id;
  std::size_t k = 0;
  std::vector<double> params;
  double log_likelihood = 0.0;
  double aic = 0.0;
  double ks_statistic = 0.0;
  double ks_p_value = 0.0;
  std::size_t n = 0;
  /// False when the fit failed; numeric fields are then NaN.
  bool ok = true;
  std::string diagnostic;
};

/// 2k - 2 log L.
double aic(std::size_t k, double log_likelihood);

/// Fits one model and summarizes it. Fit failures are returned flagged.
FitReport fit_report(ModelKind kind, const AngleSample& sample);

/// Fits all five models; successful reports sorted by ascending AIC, failed
/// ones after them.
std::vector<FitReport> compare_models(const AngleSample& sample);

/// model_id,k,params,log_likelihood,aic,ks_statistic,ks_p_value
std::string fit_report_csv_header();
std::string to_csv_row(const FitReport& report);

}  // namespace circseq
