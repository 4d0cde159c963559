#pragma once

#include "rseries/errors.hpp"
#include "rseries/expr.hpp"
#include "rseries/grid.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rseries {

enum class Mode { Positive, Signed };

enum class OrbitStatus { ReachedFloor, MaxIterations, HypothesisViolation, Underflow };

std::string_view to_string(Mode mode);
std::string_view to_string(OrbitStatus status);

/// First step at which the orbit left the admissible region.
struct StepViolation {
  std::size_t step;
  std::optional<Real> value;  // absent when f could not be evaluated
  std::string reason;
};

/// Trajectory x0, f(x0), f(f(x0)), ... with index-ascending partial sums.
struct Orbit {
  Real x0;
  std::vector<Real> terms;
  std::vector<Real> partial_sums;
  OrbitStatus status = OrbitStatus::MaxIterations;
  std::optional<StepViolation> violation;
  Mode mode = Mode::Positive;

  std::size_t last_index() const { return terms.size() - 1; }
  const Real& last_term() const { return terms.back(); }
};

struct IterateOptions {
  std::size_t max_n = 1'000'000;
  Real floor = parse_real("1e-40");
  Mode mode = Mode::Positive;
};

/// Iterates x_{n+1} = f(x_n) until |x_n| < floor, n = max_n, or a
/// per-step hypothesis check fails (positivity and strict decrease in
/// Positive mode, strict decrease of |x_n| in Signed mode).
Orbit iterate(const Evaluator& f, const Real& x0, const IterateOptions& options);

struct GridViolation {
  Real x;
  std::optional<Real> fx;
  std::string reason;
};

struct HypothesisReport {
  Mode mode = Mode::Positive;
  std::vector<Real> checked_grid;
  std::vector<GridViolation> violations;
  bool passed = false;
  std::string note;
};

/// Samples 0 < f(x) < x (Positive) or 0 < |f(x)| < |x| (Signed, both signs
/// of x) on the grid. A pass is evidence at the sampled points only.
HypothesisReport validate_hypotheses(const Evaluator& f, Mode mode, const GridSpec& grid);

/// S_N, the last partial sum.
Real partial_sum(const Orbit& orbit);

/// x_N * c / (1 - c), the tail bound under a sustained ratio x_{n+1}/x_n <= c.
/// Checks the last `lookback` recorded ratios; throws PreconditionError if
/// any exceeds c.
Real tail_bound_geometric(const Orbit& orbit, const Real& c, std::size_t lookback = 8);

/// CSV with header `n,x_n,S_n`. With every > 1 only rows n % every == 0 and
/// the final row are written.
void write_orbit_csv(std::ostream& out, const Orbit& orbit, std::size_t every = 1);

}  // namespace rseries
