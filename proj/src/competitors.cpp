#include "circseq/competitors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circseq/errors.hpp"

namespace circseq {

namespace {

constexpr double kLogRateLo = -13.815510557964274;  // log(1e-6)
constexpr double kLogRateHi = 9.210340371976184;    // log(1e4)

void require_support(double theta, const char* where) {
  if (!(theta >= 0.0 && theta < kTwoPi)) {
    throw DomainError(std::string(where) + ": theta must lie in [0, 2pi), got " +
                      std::to_string(theta));
  }
}

double we_cdf(double lambda, double theta) {
  return one_minus_exp_neg(lambda * theta) / one_minus_exp_neg(kTwoPi * lambda);
}

double we_log_pdf(double lambda, double theta) {
  return std::log(lambda) - lambda * theta -
         std::log(one_minus_exp_neg(kTwoPi * lambda));
}

// Wrapped Lindley: sum over k of the Lindley density at theta + 2 pi k,
//   lambda^2/(1+lambda) e^{-lambda theta} [(1+theta)/(1-q) + 2 pi q/(1-q)^2],
// with q = exp(-2 pi lambda).
double wl_log_pdf(double lambda, double theta) {
  const double one_minus_q = one_minus_exp_neg(kTwoPi * lambda);
  const double q = 1.0 - one_minus_q;
  const double bracket =
      (1.0 + theta) / one_minus_q + kTwoPi * q / (one_minus_q * one_minus_q);
  return 2.0 * std::log(lambda) - std::log1p(lambda) - lambda * theta +
         std::log(bracket);
}

double wl_cdf(double lambda, double theta) {
  const double one_minus_q = one_minus_exp_neg(kTwoPi * lambda);
  const double q = 1.0 - one_minus_q;
  const double x = lambda * theta;
  const double head = one_minus_exp_neg(x);  // 1 - e^{-x}
  // int_0^theta (1 + t) e^{-lambda t} dt
  const double linear =
      head / lambda + (head - x * std::exp(-x)) / (lambda * lambda);
  const double wrapped =
      linear / one_minus_q +
      kTwoPi * q / (one_minus_q * one_minus_q) * head / lambda;
  return lambda * lambda / (1.0 + lambda) * wrapped;
}

// I_p(kappa)/I_0(kappa) for p = 1..; backward recurrence on the ratios
// I_p/I_{p-1} = 1 / (2p/kappa + I_{p+1}/I_p).
std::vector<double> bessel_ratios(double kappa) {
  if (kappa == 0.0) return {};
  const int top = 60 + static_cast<int>(kappa + 20.0 * std::sqrt(kappa));
  std::vector<double> step(static_cast<std::size_t>(top) + 2, 0.0);
  for (int p = top; p >= 1; --p) {
    step[p] = 1.0 / (2.0 * p / kappa + step[p + 1]);
  }
  std::vector<double> ratios;
  double r = 1.0;
  for (int p = 1; p <= top; ++p) {
    r *= step[p];
    if (r < 1e-18) break;
    ratios.push_back(r);
  }
  return ratios;
}

double vm_cdf(double mu, double kappa, double theta) {
  const auto ratios = bessel_ratios(kappa);
  double sum = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double p = static_cast<double>(i + 1);
    sum += ratios[i] / p * (std::sin(p * (theta - mu)) + std::sin(p * mu));
  }
  return std::clamp(theta / kTwoPi + sum / kPi, 0.0, 1.0);
}

double sum_of(const AngleSample& s) {
  double total = 0.0;
  for (double a : s.angles()) total += a;
  return total;
}

[[noreturn]] void fail(CompetitorKind kind, const std::string& why,
                       const ScalarMaximum& m) {
  std::ostringstream diag;
  diag << "model=" << model_id(kind) << " x=" << m.x << " value=" << m.value
       << " iterations=" << m.iterations << " converged=" << m.converged;
  throw FitFailure("fit_competitor(" + std::string(model_id(kind)) +
                       "): " + why,
                   diag.str());
}

double fit_log_rate(CompetitorKind kind,
                    const std::function<double(double)>& loglik_of_rate) {
  const auto best = maximize_on_interval(
      [&](double log_rate) { return loglik_of_rate(std::exp(log_rate)); },
      kLogRateLo, kLogRateHi);
  if (!best.converged) fail(kind, "optimizer did not converge", best);
  if (best.x - kLogRateLo < 1e-6 || kLogRateHi - best.x < 1e-6) {
    fail(kind, "optimum on the rate search bound", best);
  }
  return std::exp(best.x);
}

struct TransmutedProfile {
  double beta = 0.0;
  double loglik = 0.0;
};

TransmutedProfile best_transmutation(double lambda, const AngleSample& s) {
  const double base_ll = [&] {
    double ll = 0.0;
    for (double a : s.angles()) ll += we_log_pdf(lambda, a);
    return ll;
  }();
  std::vector<double> tilt;
  tilt.reserve(s.size());
  for (double a : s.angles()) tilt.push_back(1.0 - 2.0 * we_cdf(lambda, a));
  const auto best = maximize_on_interval(
      [&tilt](double beta) {
        double ll = 0.0;
        for (double g : tilt) ll += std::log1p(beta * g);
        return ll;
      },
      -1.0, 1.0);
  return {best.x, base_ll + best.value};
}

}  // namespace

CompetitorModel::CompetitorModel(CompetitorKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
  if (params_.size() != parameter_count(kind_)) {
    throw ParameterError("CompetitorModel(" + std::string(model_id(kind_)) +
                         "): expected " +
                         std::to_string(parameter_count(kind_)) +
                         " parameters, got " + std::to_string(params_.size()));
  }
  for (double p : params_) {
    if (!std::isfinite(p)) throw ParameterError("CompetitorModel: non-finite parameter");
  }
  switch (kind_) {
    case CompetitorKind::WrappedExponential:
    case CompetitorKind::WrappedLindley:
      if (!(params_[0] > 0.0)) throw ParameterError("CompetitorModel: rate must be > 0");
      break;
    case CompetitorKind::TransmutedWrappedExponential:
      if (!(params_[0] > 0.0)) throw ParameterError("CompetitorModel: rate must be > 0");
      if (!(params_[1] >= -1.0 && params_[1] <= 1.0)) {
        throw ParameterError("CompetitorModel: transmutation beta must lie in [-1, 1]");
      }
      break;
    case CompetitorKind::VonMises:
      if (!(params_[1] >= 0.0)) {
        throw ParameterError("CompetitorModel: concentration kappa must be >= 0");
      }
      break;
  }
}

std::size_t parameter_count(CompetitorKind kind) {
  switch (kind) {
    case CompetitorKind::WrappedExponential:
    case CompetitorKind::WrappedLindley:
      return 1;
    case CompetitorKind::TransmutedWrappedExponential:
    case CompetitorKind::VonMises:
      return 2;
  }
  return 0;
}

std::string_view model_id(CompetitorKind kind) {
  switch (kind) {
    case CompetitorKind::WrappedExponential: return "we";
    case CompetitorKind::TransmutedWrappedExponential: return "twe";
    case CompetitorKind::WrappedLindley: return "wl";
    case CompetitorKind::VonMises: return "vonmises";
  }
  return "unknown";
}

double competitor_log_pdf(const CompetitorModel& model, double theta) {
  require_support(theta, "competitor_log_pdf");
  const auto& p = model.params();
  switch (model.kind()) {
    case CompetitorKind::WrappedExponential:
      return we_log_pdf(p[0], theta);
    case CompetitorKind::TransmutedWrappedExponential: {
      const double tilt = 1.0 + p[1] - 2.0 * p[1] * we_cdf(p[0], theta);
      return we_log_pdf(p[0], theta) + std::log(tilt);
    }
    case CompetitorKind::WrappedLindley:
      return wl_log_pdf(p[0], theta);
    case CompetitorKind::VonMises:
      return p[1] * std::cos(theta - p[0]) - std::log(kTwoPi) -
             log_bessel_i0(p[1]);
  }
  return 0.0;
}

double competitor_pdf(const CompetitorModel& model, double theta) {
  return std::exp(competitor_log_pdf(model, theta));
}

double competitor_cdf(const CompetitorModel& model, double theta) {
  if (!(theta >= 0.0 && theta <= kTwoPi)) {
    throw DomainError("competitor_cdf: theta must lie in [0, 2pi]");
  }
  const auto& p = model.params();
  switch (model.kind()) {
    case CompetitorKind::WrappedExponential:
      return we_cdf(p[0], theta);
    case CompetitorKind::TransmutedWrappedExponential: {
      const double f = we_cdf(p[0], theta);
      return (1.0 + p[1]) * f - p[1] * f * f;
    }
    case CompetitorKind::WrappedLindley:
      return wl_cdf(p[0], theta);
    case CompetitorKind::VonMises:
      return vm_cdf(p[0], p[1], theta);
  }
  return 0.0;
}

double competitor_log_likelihood(const CompetitorModel& model,
                                 const AngleSample& sample) {
  double ll = 0.0;
  for (double a : sample.angles()) ll += competitor_log_pdf(model, a);
  return ll;
}

CompetitorModel fit_competitor(CompetitorKind kind, const AngleSample& sample) {
  if (sample.empty()) throw ArgumentError("fit_competitor: empty sample");
  const double n = static_cast<double>(sample.size());
  switch (kind) {
    case CompetitorKind::WrappedExponential: {
      const double total = sum_of(sample);
      const double rate = fit_log_rate(kind, [&](double l) {
        return n * (std::log(l) - std::log(one_minus_exp_neg(kTwoPi * l))) -
               l * total;
      });
      return CompetitorModel(kind, {rate});
    }
    case CompetitorKind::WrappedLindley: {
      const double rate = fit_log_rate(kind, [&](double l) {
        double ll = 0.0;
        for (double a : sample.angles()) ll += wl_log_pdf(l, a);
        return ll;
      });
      return CompetitorModel(kind, {rate});
    }
    case CompetitorKind::TransmutedWrappedExponential: {
      const double rate = fit_log_rate(kind, [&](double l) {
        return best_transmutation(l, sample).loglik;
      });
      return CompetitorModel(kind, {rate, best_transmutation(rate, sample).beta});
    }
    case CompetitorKind::VonMises: {
      double c = 0.0;
      double s = 0.0;
      for (double a : sample.angles()) {
        c += std::cos(a);
        s += std::sin(a);
      }
      c /= n;
      s /= n;
      const double resultant = std::hypot(c, s);
      if (resultant >= 1.0 - 1e-14) {
        throw FitFailure("fit_competitor(vonmises): all angles coincide",
                         "resultant=" + std::to_string(resultant));
      }
      double mu = std::atan2(s, c);
      if (mu < 0.0) mu += kTwoPi;
      if (mu >= kTwoPi) mu = 0.0;
      return CompetitorModel(kind, {mu, inverse_bessel_ratio_a1(resultant)});
    }
  }
  throw ArgumentError("fit_competitor: unknown model kind");
}

}  // namespace circseq
