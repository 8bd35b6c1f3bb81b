#pragma once

#include <stdexcept>
#include <string>

namespace circseq {

/// Root of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An angle or other input lies outside the support of the distribution.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A distribution parameter violates its constraints (e.g. lambda <= 0).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A malformed call: empty sample, mismatched lengths, bad counts.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The likelihood has no interior maximum (sample mean at or beyond the
/// boundary of the moment map).
class NoInteriorMleError : public Error {
 public:
  using Error::Error;
};

/// A numerical fit did not converge or ended on a parameter bound.
class FitFailure : public Error {
 public:
  FitFailure(const std::string& what, std::string diagnostics)
      : Error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

/// A caller-supplied function broke its contract (e.g. a non-monotone cdf).
class ContractError : public Error {
 public:
  using Error::Error;
};

class SingularFitError : public Error {
 public:
  using Error::Error;
};

/// A regression model was evaluated where its prediction is not physical.
class OutOfValidityError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class DegenerateIntervalError : public Error {
 public:
  using Error::Error;
};

}  // namespace circseq
