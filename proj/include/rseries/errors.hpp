#pragma once

#include <stdexcept>
#include <string>

namespace rseries {

/// An operation was called outside its documented preconditions.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A standing hypothesis on f (0 < f(x) < x, |f(x)| < |x|, ...) failed.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cancellation would leave fewer than the guarded number of digits.
class PrecisionGuardError : public std::runtime_error {
 public:
  PrecisionGuardError(const std::string& what, unsigned suggested_digits)
      : std::runtime_error(what), suggested_digits_(suggested_digits) {}
  unsigned suggested_digits() const { return suggested_digits_; }

 private:
  unsigned suggested_digits_;
};

}  // namespace rseries
