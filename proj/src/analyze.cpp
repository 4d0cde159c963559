#include "rseries/analyze.hpp"

#include <algorithm>

namespace rseries {

namespace {

template <class Fn>
auto run_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

Mode detect_mode(const Evaluator& f, const Real& x0, const GridSpec& grid, ModeRequest request) {
  if (request == ModeRequest::Positive) return Mode::Positive;
  if (request == ModeRequest::Signed) return Mode::Signed;
  if (x0 < 0) return Mode::Signed;
  for (const Real& x : grid.points()) {
    try {
      if (f(x) < 0) return Mode::Signed;
    } catch (const DomainError&) {
      // reported by hypothesis validation
    }
  }
  return Mode::Positive;
}

std::string describe(const GridViolation& v) {
  return "x = " + to_short_string(v.x, 12) +
         (v.fx ? ", f(x) = " + to_short_string(*v.fx, 12) : std::string()) + " (" + v.reason + ")";
}

Verdict with_trail(Verdict v, const std::vector<std::string>& trail) {
  v.notes.insert(v.notes.begin(), trail.begin(), trail.end());
  return v;
}

void cross_check(AnalysisReport& report, const Evaluator& f, const AnalyzeConfig& config) {
  const Verdict& verdict = report.verdict;
  const Orbit& orbit = report.orbit;
  if (orbit.status == OrbitStatus::HypothesisViolation && orbit.violation) {
    report.warnings.push_back("orbit left the admissible region at step " + std::to_string(orbit.violation->step) +
                              ": " + orbit.violation->reason);
  }

  if (report.mode == Mode::Signed) {
    if (verdict.rule == Rule::AlternatingRule) {
      for (std::size_t n = 0; n + 1 < orbit.terms.size(); ++n) {
        if (orbit.terms[n + 1] == 0) break;
        if (!(orbit.terms[n] * orbit.terms[n + 1] < 0)) {
          report.warnings.push_back("orbit signs do not alternate at step " + std::to_string(n + 1));
          break;
        }
      }
    }
    return;
  }

  if (orbit.last_index() >= 2 * kMinFitTerms) {
    try {
      AsymptoticFit fit = fit_power_law(orbit);
      if (fit.power_law) report.fit = std::move(fit);
    } catch (const PreconditionError&) {
      // orbit not usable for a fit; nothing to cross-check against
    }
  }

  if (verdict.conclusion == Conclusion::Convergent) {
    std::optional<AsymptoticFit> tail_fit;
    if (report.fit && report.fit->a < 1) tail_fit = report.fit;
    report.sum = sum_estimate(orbit, tail_fit);
    if (report.fit && report.fit->a >= 1) {
      report.warnings.push_back("empirical fit a = " + to_short_string(report.fit->a, 6) +
                                " >= 1 contradicts the convergent verdict");
    }
  } else if (verdict.conclusion == Conclusion::Divergent) {
    if (report.fit && report.fit->a < 1 - config.classify.exponent_margin) {
      report.warnings.push_back("empirical fit a = " + to_short_string(report.fit->a, 6) +
                                " < 1 contradicts the divergent verdict");
    } else if (orbit.status == OrbitStatus::ReachedFloor) {
      report.warnings.push_back("orbit reached the floor after " + std::to_string(orbit.last_index()) +
                                " steps, faster than a divergent series should decay");
    }
  }

  if (const auto* w = std::get_if<ExponentWitness>(&verdict.witness); w && orbit.last_index() >= 100) {
    const AsymptoticCheck check = verify_asymptotic(orbit, w->a, w->k, config.asymptotic_tolerance);
    if (!check.passed) {
      report.warnings.push_back("n^(1/a) x_n deviates from k by " + to_short_string(check.max_deviation, 4) +
                                " at n = " + std::to_string(check.worst_index));
    }
  }

  if (verdict.rule == Rule::MajorantRule && report.majorant) {
    const auto& m = std::get<MajorantWitness>(verdict.witness);
    const MajorantSpec spec = parse_majorant(m.majorant);
    const std::optional<Evaluator> user =
        std::holds_alternative<UserMajorant>(spec.family)
            ? std::optional<Evaluator>(std::in_place, std::get<UserMajorant>(spec.family).f, f.digits())
            : std::nullopt;
    WorkingPrecision precision(f.digits());
    Real mn = orbit.x0;
    for (std::size_t n = 1; n < orbit.terms.size(); ++n) {
      mn = user ? (*user)(mn) : evaluate_majorant(spec, mn);
      if (orbit.terms[n] > mn) {
        report.warnings.push_back("comparison induction fails at n = " + std::to_string(n) +
                                  ": g^n(x0) > m^n(x0)");
        break;
      }
    }
  }
}

}  // namespace

AnalysisReport analyze(const FunctionDef& f, const Real& x0, const AnalyzeConfig& config) {
  WorkingPrecision precision(config.digits);
  if (x0 == 0) throw StageError("config", "x0 must be nonzero");
  const Evaluator fe(f, config.digits);
  const ClassifyConfig& cc = config.classify;

  AnalysisReport report;
  report.function = render(f);
  report.x0 = x0;

  GridSpec validation_grid = cc.probe_grid;
  validation_grid.start = std::max(abs(x0), cc.probe_grid.start);

  run_stage("hypotheses", [&] {
    report.mode = detect_mode(fe, x0, validation_grid, config.mode);
    report.hypotheses = validate_hypotheses(fe, report.mode, validation_grid);
    if (!report.hypotheses.passed) {
      const auto& v = report.hypotheses.violations.front();
      throw HypothesisError(std::string(report.mode == Mode::Positive ? "0 < f(x) < x" : "|f(x)| < |x|") +
                            " fails at " + std::to_string(report.hypotheses.violations.size()) +
                            " grid point(s), first at " + describe(v));
    }
    return 0;
  });

  report.derivative = run_stage("derivative", [&] { return estimate_derivative_at_zero(fe, cc); });

  std::vector<std::string> trail;
  if (report.mode == Mode::Signed) {
    report.verdict = run_stage("signed", [&] { return signed_rule(fe, cc.probe_grid, cc); });
  } else {
    std::optional<Verdict> decided;
    if (config.taylor) {
      try {
        decided = analytic_rule(*config.taylor);
      } catch (const HypothesisError& e) {
        report.warnings.push_back(std::string("analytic rule not applicable: ") + e.what());
      }
    }
    if (!decided) {
      Verdict by_derivative = derivative_rule(report.derivative, cc);
      trail = by_derivative.notes;
      if (by_derivative.conclusion != Conclusion::Inconclusive) {
        decided = std::move(by_derivative);
      } else if (report.derivative.kind == DerivativeEstimate::Kind::Value) {
        report.exponent = run_stage("limit", [&] { return search_exponent(fe, cc); });
        if (report.exponent->fit) {
          decided = with_trail(limit_exponent_rule(*report.exponent->fit, cc), trail);
        } else {
          trail.push_back("no exponent a with a finite nonzero limit: " + report.exponent->reason);
        }
      }
      if (!decided && report.derivative.kind != DerivativeEstimate::Kind::OutOfRange) {
        GridSpec grid = cc.probe_grid;
        grid.start = std::max(x0, cc.probe_grid.start);
        report.majorant = run_stage("majorant", [&] { return search_majorant(fe, grid, cc); });
        decided = with_trail(report.majorant->verdict, trail);
      }
      if (!decided) decided = with_trail(Verdict::inconclusive("no criterion applies"), trail);
    }
    report.verdict = std::move(*decided);
  }

  const Mode mode = report.mode;
  report.orbit = run_stage("orbit", [&] {
    IterateOptions options;
    options.max_n = config.max_n;
    options.floor = config.floor;
    options.mode = mode;
    return iterate(fe, x0, options);
  });
  run_stage("cross-check", [&] {
    cross_check(report, fe, config);
    return 0;
  });
  return report;
}

}  // namespace rseries
