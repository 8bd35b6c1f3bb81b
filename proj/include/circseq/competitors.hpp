#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "circseq/hcwe.hpp"

namespace circseq {

enum class CompetitorKind {
  WrappedExponential,            // params: {lambda}
  TransmutedWrappedExponential,  // params: {lambda, beta}
  WrappedLindley,                // params: {lambda}
  VonMises,                      // params: {mu, kappa}
};

/// Full-circle competitor to the HCWE. All four live on [0, 2pi).
class CompetitorModel {
 public:
  /// Validates the parameter count and ranges; throws ParameterError.
  CompetitorModel(CompetitorKind kind, std::vector<double> params);

  CompetitorKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }

 private:
  CompetitorKind kind_;
  std::vector<double> params_;
};

std::size_t parameter_count(CompetitorKind kind);
std::string_view model_id(CompetitorKind kind);

double competitor_log_pdf(const CompetitorModel& model, double theta);
double competitor_pdf(const CompetitorModel& model, double theta);

/// Distribution function measured counter-clockwise from angle 0.
double competitor_cdf(const CompetitorModel& model, double theta);

double competitor_log_likelihood(const CompetitorModel& model,
                                 const AngleSample& sample);

/// Maximum-likelihood fit. Throws FitFailure when the optimizer does not
/// converge or the optimum sits on a search bound.
CompetitorModel fit_competitor(CompetitorKind kind, const AngleSample& sample);

}  // namespace circseq
