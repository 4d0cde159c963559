#include "rseries/classify.hpp"

#include <cmath>

namespace rseries {

namespace {

Real log1p_real(const Real& v) {
  Real out;
  mpfr_log1p(out.backend().data(), v.backend().data(), MPFR_RNDN);
  return out;
}

Real expm1_real(const Real& v) {
  Real out;
  mpfr_expm1(out.backend().data(), v.backend().data(), MPFR_RNDN);
  return out;
}

}  // namespace

std::string_view to_string(LimitProbe::Verdict verdict) {
  switch (verdict) {
    case LimitProbe::Verdict::FiniteNonzero: return "FiniteNonzero";
    case LimitProbe::Verdict::TendsToZero: return "TendsToZero";
    case LimitProbe::Verdict::TendsToInfinity: return "TendsToInfinity";
    case LimitProbe::Verdict::Oscillates: return "Oscillates";
  }
  return "?";
}

LimitProbe probe_limit(const Evaluator& f, const Real& a, const ClassifyConfig& config) {
  if (!(a > 0)) throw PreconditionError("exponent a must be positive");
  WorkingPrecision precision(f.digits());
  const unsigned digits = f.digits();
  if (digits <= config.guard_digits) throw PreconditionError("precision too low for the cancellation guard");
  const Real agreement_limit = pow(Real(10), -Real(digits - config.guard_digits));

  LimitProbe probe;
  probe.a = a;
  std::vector<Real> values;
  for (const Real& x : config.probe_grid.points()) {
    const Real fx = f(x);
    if (!(fx > 0)) {
      throw HypothesisError("f(x) <= 0 at probe point x = " + to_short_string(x) +
                            "; the limit probe needs 0 < f(x) < x");
    }
    // Digits lost to cancellation are set by how closely f(x) matches x;
    // the quotient itself is formed without subtracting x^a and f(x)^a.
    const Real u = (fx - x) / x;
    const Real rel = abs(u);
    if (rel < agreement_limit) {
      const double agreed = rel == 0 ? 2.0 * digits : -log10(rel).convert_to<double>();
      const unsigned suggested = static_cast<unsigned>(std::ceil(agreed)) + config.guard_digits + 8;
      throw PrecisionGuardError("x and f(x) agree in about " + std::to_string(static_cast<int>(agreed)) +
                                    " digits at x = " + to_short_string(x, 6) + " (a = " +
                                    to_short_string(a, 8) + "); rerun with at least " +
                                    std::to_string(suggested) + " digits of precision",
                                suggested);
    }
    if (!(u < 0)) {
      throw HypothesisError("f(x) >= x at probe point x = " + to_short_string(x));
    }
    // (x^a - f^a) / (x^a f^a) = (1 - (f/x)^a) / f^a
    Real scaled = a * log1p_real(u);
    const Real fa = pow(fx, a);
    Real value = -expm1_real(scaled) / fa;
    values.push_back(value);
    probe.samples.push_back({x, std::move(value)});
  }

  const TailAnalysis tail = analyze_tail(values, config.stabilization);
  const std::size_t w = config.stabilization.window;
  const Real& first = values[values.size() - w];
  probe.trend = values.back() > first ? 1 : (values.back() < first ? -1 : 0);
  switch (tail.shape) {
    case TailShape::Stable:
      if (abs(tail.median) <= config.stabilization.abs_tol) {
        probe.verdict = LimitProbe::Verdict::TendsToZero;
      } else {
        probe.verdict = LimitProbe::Verdict::FiniteNonzero;
        probe.limit = tail.last;
      }
      break;
    case TailShape::Increasing: probe.verdict = LimitProbe::Verdict::TendsToInfinity; break;
    case TailShape::Decreasing: probe.verdict = LimitProbe::Verdict::TendsToZero; break;
    case TailShape::Oscillating: probe.verdict = LimitProbe::Verdict::Oscillates; break;
  }
  return probe;
}

namespace {

// Which side of the critical exponent a probe sits on: -1 below (L -> 0),
// +1 above (L -> inf), 0 when the probe cannot tell.
int side_of(const LimitProbe& probe) {
  switch (probe.verdict) {
    case LimitProbe::Verdict::TendsToZero: return -1;
    case LimitProbe::Verdict::TendsToInfinity: return 1;
    case LimitProbe::Verdict::FiniteNonzero: return probe.trend;
    case LimitProbe::Verdict::Oscillates: return 0;
  }
  return 0;
}

}  // namespace

ExponentSearch search_exponent(const Evaluator& f, const ClassifyConfig& config) {
  WorkingPrecision precision(f.digits());
  Real lo = config.exponent_low;
  Real hi = config.exponent_high;
  if (!(lo > 0 && lo < hi)) throw PreconditionError("exponent range must satisfy 0 < low < high");

  ExponentSearch out;
  const LimitProbe low_probe = probe_limit(f, lo, config);
  const LimitProbe high_probe = probe_limit(f, hi, config);
  if (low_probe.verdict == LimitProbe::Verdict::Oscillates ||
      high_probe.verdict == LimitProbe::Verdict::Oscillates) {
    out.reason = "limit probe oscillates at the ends of the exponent range";
    return out;
  }
  if (side_of(low_probe) != -1 || side_of(high_probe) != 1) {
    out.reason = "no transition in [" + to_short_string(lo, 6) + ", " + to_short_string(hi, 6) +
                 "]: probe is " + std::string(to_string(low_probe.verdict)) + " at the low end and " +
                 std::string(to_string(high_probe.verdict)) + " at the high end";
    return out;
  }

  for (unsigned step = 0; step < config.bisection_steps; ++step) {
    const Real mid = (lo + hi) / 2;
    const LimitProbe probe = probe_limit(f, mid, config);
    const int side = side_of(probe);
    if (probe.verdict == LimitProbe::Verdict::Oscillates) {
      out.reason = "limit probe oscillates at a = " + to_short_string(mid, 10);
      return out;
    }
    if (side < 0) {
      lo = mid;
    } else if (side > 0) {
      hi = mid;
    } else {
      lo = hi = mid;
      break;
    }
  }

  const Real a = (lo + hi) / 2;
  LimitProbe confirm = probe_limit(f, a, config);
  if (confirm.verdict != LimitProbe::Verdict::FiniteNonzero) {
    out.reason = "confirmation probe at a = " + to_short_string(a, 10) + " is " +
                 std::string(to_string(confirm.verdict));
    return out;
  }
  ExponentFit fit;
  fit.a = a;
  fit.k = pow(confirm.limit, -1 / a);
  fit.probe = std::move(confirm);
  out.fit = std::move(fit);
  return out;
}

}  // namespace rseries
