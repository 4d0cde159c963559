#include "rseries/real.hpp"

#include <cctype>
#include <ios>
#include <stdexcept>

namespace rseries {

WorkingPrecision::WorkingPrecision(unsigned digits) : previous_(Real::default_precision()) {
  if (digits < kMinDigits) {
    throw std::invalid_argument("precision must be at least " + std::to_string(kMinDigits) +
                                " significant digits");
  }
  Real::default_precision(digits);
}

WorkingPrecision::~WorkingPrecision() { Real::default_precision(previous_); }

unsigned WorkingPrecision::current() { return Real::default_precision(); }

namespace {

bool is_decimal_literal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  }
  if (digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == s.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Real parse_real(std::string_view text) {
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Real num = parse_real(text.substr(0, slash));
    Real den = parse_real(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  if (!is_decimal_literal(text)) {
    throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
  }
  return Real(std::string(text));
}

std::string to_string(const Real& value, unsigned digits) {
  if (digits == 0) digits = WorkingPrecision::current();
  if (value == 0) return "0";
  return value.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

std::string to_short_string(const Real& value, unsigned digits) {
  return value.str(static_cast<std::streamsize>(digits), std::ios_base::fmtflags(0));
}

Real real_pi() {
  Real result;
  mpfr_const_pi(result.backend().data(), MPFR_RNDN);
  return result;
}

Real real_e() { return exp(Real(1)); }

Real ulp(const Real& value) {
  if (value == 0) return Real(0);
  mpfr_exp_t exp = mpfr_get_exp(value.backend().data());
  Real result(1);
  mpfr_mul_2si(result.backend().data(), result.backend().data(),
               exp - static_cast<long>(mpfr_get_prec(value.backend().data())), MPFR_RNDN);
  return result;
}

}  // namespace rseries
