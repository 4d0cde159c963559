#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <string_view>

namespace rseries {

/// Extended-precision real backed by MPFR. Precision is chosen at runtime
/// through WorkingPrecision; values keep the precision they were created with.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

inline constexpr unsigned kDefaultDigits = 64;
inline constexpr unsigned kMinDigits = 16;

/// RAII guard for the working precision (significant decimal digits) used for
/// newly created Real values. The setting is process-wide, so concurrent
/// pipelines must agree on one precision.
class WorkingPrecision {
 public:
  explicit WorkingPrecision(unsigned digits);
  ~WorkingPrecision();
  WorkingPrecision(const WorkingPrecision&) = delete;
  WorkingPrecision& operator=(const WorkingPrecision&) = delete;

  static unsigned current();

 private:
  unsigned previous_;
};

/// Parses a decimal literal or a ratio "p/q" at the current working precision.
/// Throws std::invalid_argument on malformed input.
Real parse_real(std::string_view text);

/// Scientific notation with `digits` significant digits (0 means working precision).
std::string to_string(const Real& value, unsigned digits = 0);

/// Short form for human-readable reports.
std::string to_short_string(const Real& value, unsigned digits = 10);

Real real_pi();
Real real_e();

/// One unit in the last place of `value` at its own precision.
Real ulp(const Real& value);

}  // namespace rseries
