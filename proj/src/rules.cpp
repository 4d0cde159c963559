#include "rseries/classify.hpp"

namespace rseries {

std::string_view to_string(Conclusion conclusion) {
  switch (conclusion) {
    case Conclusion::Convergent: return "convergent";
    case Conclusion::Divergent: return "divergent";
    case Conclusion::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::None: return "None";
    case Rule::DerivativeRule: return "DerivativeRule";
    case Rule::LimitExponentRule: return "LimitExponentRule";
    case Rule::AnalyticRule: return "AnalyticRule";
    case Rule::MajorantRule: return "MajorantRule";
    case Rule::AlternatingRule: return "AlternatingRule";
    case Rule::AbsoluteBoundRule: return "AbsoluteBoundRule";
  }
  return "?";
}

Verdict derivative_rule(const DerivativeEstimate& estimate, const ClassifyConfig& config) {
  using Kind = DerivativeEstimate::Kind;
  switch (estimate.kind) {
    case Kind::Value:
      if (estimate.c < 1 - config.derivative_margin) {
        Verdict v;
        v.conclusion = Conclusion::Convergent;
        v.rule = Rule::DerivativeRule;
        v.witness = DerivativeWitness{estimate.c};
        v.notes.push_back("f'(0) = " + to_short_string(estimate.c) +
                          " < 1: terms are eventually dominated by a geometric sequence");
        return v;
      }
      return Verdict::inconclusive("f'(0) = " + to_short_string(estimate.c) + " is within " +
                                   to_short_string(config.derivative_margin, 3) + " of 1: " +
                                   std::string(kRouteToLimit));
    case Kind::DNE:
      return Verdict::inconclusive("f(x)/x oscillates in [" + to_short_string(estimate.band_low, 6) + ", " +
                                   to_short_string(estimate.band_high, 6) +
                                   "]; f'(0) does not exist: " + std::string(kRouteToMajorant));
    case Kind::OutOfRange:
      return Verdict::inconclusive("f'(0) = " + to_short_string(estimate.c) +
                                   " lies outside [0, 1], contradicting 0 < f(x) < x near 0");
  }
  return Verdict::inconclusive("unknown derivative estimate");
}

Verdict limit_exponent_rule(const ExponentFit& fit, const ClassifyConfig& config) {
  Verdict v;
  v.rule = Rule::LimitExponentRule;
  v.witness = ExponentWitness{fit.a, fit.k};
  const std::string law = "a = " + to_short_string(fit.a) + ", k = " + to_short_string(fit.k);
  if (fit.a <= 1 - config.exponent_margin) {
    v.conclusion = Conclusion::Convergent;
    v.notes.push_back(law + ": n^(1/a) x_n -> k with a < 1, the series converges");
  } else {
    v.conclusion = Conclusion::Divergent;
    v.notes.push_back(law + ": n^(1/a) x_n -> k with a >= 1, the series diverges");
    if (fit.a < 1 + config.exponent_margin) {
      v.notes.push_back("boundary case: a is within " + to_short_string(config.exponent_margin, 3) +
                        " of 1, which diverges like the harmonic series");
    }
  }
  return v;
}

Verdict analytic_rule(const TaylorDef& taylor) {
  const auto& coeffs = taylor.coefficients;
  if (coeffs.empty()) throw HypothesisError("Taylor data is empty");
  if (coeffs.front() != 1) {
    throw HypothesisError("a1 = " + to_short_string(coeffs.front()) +
                          " != 1, theorem inapplicable; use the derivative rule with c = a1");
  }
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    if (coeffs[i] > 0) {
      throw HypothesisError("first nonzero higher coefficient a" + std::to_string(i + 1) +
                            " is positive, so f(x) > x near 0");
    }
    Verdict v;
    v.conclusion = Conclusion::Divergent;
    v.rule = Rule::AnalyticRule;
    v.witness = AnalyticWitness{i + 1, coeffs[i]};
    v.notes.push_back("f is analytic at 0 with a1 = 1 and a" + std::to_string(i + 1) + " = " +
                      to_short_string(coeffs[i]) + " < 0: the series diverges");
    return v;
  }
  throw HypothesisError("all higher coefficients vanish: f(x) = x has no decreasing orbit");
}

Verdict signed_rule(const Evaluator& f, const GridSpec& grid, const ClassifyConfig& config) {
  WorkingPrecision precision(f.digits());
  const std::vector<Real> positive = grid.points();
  bool alternating = true;
  Real sup = 0;
  std::size_t count = 0;
  for (const Real& p : positive) {
    for (const Real& x : {p, Real(-p)}) {
      const Real fx = f(x);
      if (!(x * fx < 0)) alternating = false;
      sup = std::max(sup, abs(fx) / abs(x));
      ++count;
    }
  }
  if (alternating) {
    Verdict v;
    v.conclusion = Conclusion::Convergent;
    v.rule = Rule::AlternatingRule;
    v.witness = AlternatingWitness{count};
    v.notes.push_back("x f(x) < 0 at all " + std::to_string(count) +
                      " grid points: terms alternate in sign with |x_n| decreasing to 0");
    return v;
  }
  if (sup < 1 - config.derivative_margin) {
    Verdict v;
    v.conclusion = Conclusion::Convergent;
    v.rule = Rule::AbsoluteBoundRule;
    v.witness = AbsoluteBoundWitness{sup};
    v.notes.push_back("|f(x)| <= c |x| with c = " + to_short_string(sup) +
                      " on the grid: the series converges absolutely");
    return v;
  }
  return Verdict::inconclusive("mixed signs and sup |f(x)|/|x| = " + to_short_string(sup) +
                               " is not bounded away from 1: no criterion applies in this regime");
}

}  // namespace rseries
