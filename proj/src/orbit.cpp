#include "rseries/orbit.hpp"

#include <algorithm>
#include <ostream>

namespace rseries {

std::string_view to_string(Mode mode) { return mode == Mode::Positive ? "positive" : "signed"; }

std::string_view to_string(OrbitStatus status) {
  switch (status) {
    case OrbitStatus::ReachedFloor: return "ReachedFloor";
    case OrbitStatus::MaxIterations: return "MaxIterations";
    case OrbitStatus::HypothesisViolation: return "HypothesisViolation";
    case OrbitStatus::Underflow: return "Underflow";
  }
  return "?";
}

Orbit iterate(const Evaluator& f, const Real& x0, const IterateOptions& options) {
  if (x0 == 0) throw PreconditionError("x0 must be nonzero");
  if (options.max_n < 1) throw PreconditionError("max_n must be at least 1");
  if (!(options.floor > 0)) throw PreconditionError("floor must be positive");

  WorkingPrecision precision(f.digits());
  Orbit orbit;
  orbit.x0 = x0;
  orbit.mode = options.mode;
  orbit.terms.reserve(std::min<std::size_t>(options.max_n + 1, 1 << 16));
  orbit.partial_sums.reserve(orbit.terms.capacity());

  const bool positive = options.mode == Mode::Positive;
  if (positive && x0 < 0) {
    orbit.status = OrbitStatus::HypothesisViolation;
    orbit.violation = StepViolation{0, x0, "x0 must be positive in positive mode"};
    return orbit;
  }

  orbit.terms.push_back(x0);
  orbit.partial_sums.push_back(x0);
  for (std::size_t n = 0;; ++n) {
    const Real& x = orbit.terms.back();
    if (abs(x) < options.floor) {
      orbit.status = OrbitStatus::ReachedFloor;
      break;
    }
    if (n == options.max_n) {
      orbit.status = OrbitStatus::MaxIterations;
      break;
    }
    Real next;
    try {
      next = f(x);
    } catch (const DomainError& e) {
      orbit.status = OrbitStatus::HypothesisViolation;
      orbit.violation = StepViolation{n + 1, std::nullopt, e.what()};
      break;
    }
    if (positive) {
      if (next == 0) {
        orbit.status = OrbitStatus::Underflow;
        break;
      }
      if (next < 0 || next >= x) {
        orbit.status = OrbitStatus::HypothesisViolation;
        orbit.violation = StepViolation{
            n + 1, next, next < 0 ? "non-positive term in positive mode" : "term did not decrease"};
        break;
      }
    } else if (abs(next) >= abs(x)) {
      orbit.status = OrbitStatus::HypothesisViolation;
      orbit.violation = StepViolation{n + 1, next, "|x_n| did not decrease"};
      break;
    }
    orbit.partial_sums.push_back(orbit.partial_sums.back() + next);
    orbit.terms.push_back(std::move(next));
  }
  return orbit;
}

HypothesisReport validate_hypotheses(const Evaluator& f, Mode mode, const GridSpec& grid) {
  WorkingPrecision precision(f.digits());
  HypothesisReport report;
  report.mode = mode;
  std::vector<Real> xs = grid.points();
  if (mode == Mode::Signed) {
    const std::size_t half = xs.size();
    for (std::size_t i = 0; i < half; ++i) xs.push_back(-xs[i]);
  }
  for (const Real& x : xs) {
    try {
      Real fx = f(x);
      if (mode == Mode::Positive) {
        if (!(fx > 0)) {
          report.violations.push_back({x, fx, "f(x) <= 0"});
        } else if (!(fx < x)) {
          report.violations.push_back({x, fx, "f(x) >= x"});
        }
      } else if (!(abs(fx) < abs(x))) {
        report.violations.push_back({x, fx, "|f(x)| >= |x|"});
      }
    } catch (const DomainError& e) {
      report.violations.push_back({x, std::nullopt, e.what()});
    }
  }
  report.checked_grid = std::move(xs);
  report.passed = report.violations.empty();
  report.note = "sampled on " + grid.describe() +
                (mode == Mode::Signed ? " (both signs)" : "") +
                "; a pass is evidence at the sampled points, not a proof";
  return report;
}

Real partial_sum(const Orbit& orbit) {
  if (orbit.partial_sums.empty()) throw PreconditionError("empty orbit");
  return orbit.partial_sums.back();
}

Real tail_bound_geometric(const Orbit& orbit, const Real& c, std::size_t lookback) {
  if (orbit.terms.empty()) throw PreconditionError("empty orbit");
  if (!(c > 0 && c < 1)) throw PreconditionError("ratio c must lie in (0, 1)");
  const std::size_t n = orbit.terms.size();
  const std::size_t first = n > lookback + 1 ? n - lookback - 1 : 0;
  for (std::size_t i = first; i + 1 < n; ++i) {
    if (abs(orbit.terms[i + 1]) > c * abs(orbit.terms[i])) {
      throw PreconditionError("ratio x_" + std::to_string(i + 1) + "/x_" + std::to_string(i) +
                              " exceeds c = " + to_short_string(c));
    }
  }
  return abs(orbit.last_term()) * c / (1 - c);
}

void write_orbit_csv(std::ostream& out, const Orbit& orbit, std::size_t every) {
  if (every == 0) every = 1;
  out << "n,x_n,S_n\n";
  for (std::size_t n = 0; n < orbit.terms.size(); ++n) {
    if (n % every != 0 && n + 1 != orbit.terms.size()) continue;
    out << n << ',' << to_string(orbit.terms[n]) << ',' << to_string(orbit.partial_sums[n]) << '\n';
  }
}

}  // namespace rseries
