#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace citedyn {

/// Internal time unit is real-valued days since publication.
inline constexpr double kDaysPerYear = 365.25;

constexpr double years_to_days(double years) { return years * kDaysPerYear; }
constexpr double days_to_years(double days) { return days / kDaysPerYear; }

// ---------------------------------------------------------------------------
// Errors
//
// Two families, matching the CLI exit-code contract:
//   InputError   -> bad data, bad configuration, unmet preconditions (exit 1)
//   NumericError -> the computation itself failed (exit 2)
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
  using Error::Error;
};

class NumericError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public InputError {
public:
  using InputError::InputError;
};

class DegenerateHistoryError : public InputError {
public:
  using InputError::InputError;
};

class ParseError : public InputError {
public:
  using InputError::InputError;
};

class ValidationError : public InputError {
public:
  using InputError::InputError;
};

class EmptySelectionError : public InputError {
public:
  using InputError::InputError;
};

class TooFewPapersError : public InputError {
public:
  using InputError::InputError;
};

class DegenerateSpanError : public InputError {
public:
  using InputError::InputError;
};

class UndefinedSigmaError : public NumericError {
public:
  using NumericError::NumericError;
};

// ---------------------------------------------------------------------------
// Global constants
// ---------------------------------------------------------------------------

/// Corpus-wide constants. Only m enters any computed quantity; beta and A are
/// kept as optional metadata because a single paper's history identifies only
/// the combined relative fitness.
struct GlobalConstants {
  double m = 30.0;  ///< average number of references per paper
  std::optional<double> beta;  ///< corpus growth rate (1/day), informational
  std::optional<double> A;     ///< normalization constant, informational

  void validate() const {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw InputError("GlobalConstants: m must be positive and finite");
    }
  }
};

// ---------------------------------------------------------------------------
// Per-paper parameters
// ---------------------------------------------------------------------------

/// The three per-paper parameters of the citation model.
///   lambda : relative fitness, > 0 (dimensionless)
///   mu     : immediacy, log of days (unrestricted)
///   sigma  : longevity, > 0 (dimensionless)
struct WsbParams {
  double lambda = 1.0;
  double mu = 7.0;
  double sigma = 1.0;

  void validate() const {
    if (!std::isfinite(lambda) || !std::isfinite(mu) || !std::isfinite(sigma)) {
      throw InputError("WsbParams: parameters must be finite");
    }
    if (!(lambda > 0.0)) throw InputError("WsbParams: lambda must be > 0");
    if (!(sigma > 0.0)) throw InputError("WsbParams: sigma must be > 0");
  }
};

}  // namespace citedyn
