#pragma once

#include <stdexcept>
#include <string>

namespace fluct {

// Every failure raised by the library derives from Error, so callers can
// catch one type; the subclasses mark the failure category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class InsufficientDataError : public Error { using Error::Error; };
class UnsupportedModeError : public Error { using Error::Error; };
class UnboundedTailError : public Error { using Error::Error; };
class DegenerateStateError : public Error { using Error::Error; };
class InsufficientLadderError : public Error { using Error::Error; };
class InputError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };

class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, double acceptance_rate = -1.0)
      : Error(what), acceptance_rate_(acceptance_rate) {}
  // Observed acceptance rate for rejection samplers, -1 when not applicable.
  double acceptance_rate() const { return acceptance_rate_; }

 private:
  double acceptance_rate_;
};

}  // namespace fluct
