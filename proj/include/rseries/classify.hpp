#pragma once

#include "rseries/errors.hpp"
#include "rseries/expr.hpp"
#include "rseries/grid.hpp"
#include "rseries/orbit.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rseries {

// ---------------------------------------------------------------------------
// Stabilization rule shared by the derivative and limit probes.

struct StabilizationConfig {
  std::size_t window = 8;
  Real rel_tol = parse_real("1e-6");
  Real abs_tol = parse_real("1e-30");
};

/// Shape of a sampled sequence as the grid approaches 0. Increasing and
/// Decreasing refer to the direction of travel toward 0.
enum class TailShape { Stable, Increasing, Decreasing, Oscillating };

struct TailAnalysis {
  TailShape shape;
  Real median;
  Real spread;  // max - min over the last window
  Real last;
};

/// Applies the fixed-window Cauchy criterion to the last `window` values:
/// stable if max - min < max(rel_tol |median|, abs_tol). An unstable tail is
/// oscillating when it is not monotone and its spread exceeds
/// 10 rel_tol |median| on the last two window shifts; otherwise the overall
/// direction of the window decides. Needs window + 1 values.
TailAnalysis analyze_tail(std::span<const Real> values, const StabilizationConfig& config);

struct ClassifyConfig {
  GridSpec probe_grid = GridSpec::probe_default();
  StabilizationConfig stabilization;
  Real derivative_margin = parse_real("1e-4");
  Real exponent_margin = parse_real("1e-4");
  Real exponent_low = parse_real("0.01");
  Real exponent_high = Real(4);
  unsigned bisection_steps = 40;
  /// Digits that must survive cancellation in the limit probe.
  unsigned guard_digits = 12;
  /// Extra points per grid step used to pin down an oscillation band.
  unsigned band_refinement = 64;
};

// ---------------------------------------------------------------------------
// f'(0)

struct DerivativeEstimate {
  enum class Kind { Value, DNE, OutOfRange };
  Kind kind = Kind::Value;
  Real c;           // Value / OutOfRange
  Real band_low;    // DNE
  Real band_high;   // DNE
  std::vector<Sample> samples;  // (x, f(x)/x)
  std::string grid;
  bool extrapolated = false;
};

std::string_view to_string(DerivativeEstimate::Kind kind);

/// Samples f(x)/x on the descending probe grid. A stable tail (directly, or
/// after Richardson extrapolation of a monotone tail) yields Value; anything
/// else is reported as a DNE band measured on a refined tail grid.
DerivativeEstimate estimate_derivative_at_zero(const Evaluator& f, const ClassifyConfig& config);

// ---------------------------------------------------------------------------
// Property-(3) quotient L_a(x) = (x^a - f(x)^a) / (x^a f(x)^a)

struct LimitProbe {
  enum class Verdict { FiniteNonzero, TendsToZero, TendsToInfinity, Oscillates };
  Real a;
  std::vector<Sample> samples;
  Verdict verdict = Verdict::Oscillates;
  Real limit;  // FiniteNonzero only
  /// +1 when L grows toward 0, -1 when it shrinks, 0 when flat.
  int trend = 0;
};

std::string_view to_string(LimitProbe::Verdict verdict);

/// The quotient is formed as -expm1(a log1p((f - x)/x)) / f^a. Throws
/// PrecisionGuardError when x and f(x) agree in more than
/// (precision - guard_digits) digits at some grid point.
LimitProbe probe_limit(const Evaluator& f, const Real& a, const ClassifyConfig& config);

struct ExponentFit {
  Real a;
  Real k;  // L^(-1/a)
  LimitProbe probe;
};

struct ExponentSearch {
  std::optional<ExponentFit> fit;
  std::string reason;  // why nothing was found
};

/// Bisection on the probe verdict over [exponent_low, exponent_high]:
/// TendsToZero below the critical exponent, TendsToInfinity above it.
ExponentSearch search_exponent(const Evaluator& f, const ClassifyConfig& config);

// ---------------------------------------------------------------------------
// Verdicts

enum class Conclusion { Convergent, Divergent, Inconclusive };
enum class Rule { None, DerivativeRule, LimitExponentRule, AnalyticRule, MajorantRule, AlternatingRule, AbsoluteBoundRule };

std::string_view to_string(Conclusion conclusion);
std::string_view to_string(Rule rule);

struct DerivativeWitness {
  Real c;
};
struct ExponentWitness {
  Real a;
  Real k;
};
struct AnalyticWitness {
  std::size_t index;  // k of the first nonzero a_k, k >= 2
  Real coefficient;
};
struct MajorantWitness {
  std::string majorant;
  std::optional<Real> delta;  // absent: monotone on all of (0, inf)
  Real margin;                // min over the grid of m(x) - g(x)
};
struct AlternatingWitness {
  std::size_t grid_points;
};
struct AbsoluteBoundWitness {
  Real c;
};

using Witness = std::variant<std::monostate, DerivativeWitness, ExponentWitness, AnalyticWitness,
                             MajorantWitness, AlternatingWitness, AbsoluteBoundWitness>;

struct Verdict {
  Conclusion conclusion = Conclusion::Inconclusive;
  Rule rule = Rule::None;
  Witness witness;
  std::vector<std::string> notes;

  static Verdict inconclusive(std::string note) {
    Verdict v;
    v.notes.push_back(std::move(note));
    return v;
  }
};

inline constexpr std::string_view kRouteToLimit = "route to limit-exponent rule";
inline constexpr std::string_view kRouteToMajorant = "route to majorant rule";

/// c < 1 - margin proves convergence; c near 1 and DNE are routed on.
Verdict derivative_rule(const DerivativeEstimate& estimate, const ClassifyConfig& config);

/// a >= 1 diverges (a within the margin of 1 too), a < 1 converges.
Verdict limit_exponent_rule(const ExponentFit& fit, const ClassifyConfig& config);

/// Divergent for analytic f with a1 = 1 whose first nonzero higher
/// coefficient is negative. Throws HypothesisError otherwise.
Verdict analytic_rule(const TaylorDef& taylor);

// ---------------------------------------------------------------------------
// Comparison with monotone majorants

struct LinearMajorant {
  Real c;
  std::string label;
};
struct PowerLawMajorant {
  Real a;
  Real c;
  std::string label;
};
struct UserMajorant {
  FunctionDef f;
};

struct MajorantSpec {
  std::variant<LinearMajorant, PowerLawMajorant, UserMajorant> family;
  std::optional<Real> monotone_delta;  // UserMajorant only, filled by check_monotone

  std::string id() const;
  static MajorantSpec linear(const Real& c, std::string label);
  static MajorantSpec power_law(const Real& a, const Real& c, std::string label);
};

/// "linear:<c>", "powerlaw:a=<a>,c=<c>" or "fn:<expression>"; numbers may be
/// written as p/q.
MajorantSpec parse_majorant(std::string_view text);

/// Evaluates m(x) at the working precision.
Real evaluate_majorant(const MajorantSpec& m, const Real& x);

struct MonotoneCheck {
  bool monotone = false;  // nondecreasing on every sampled pair
  Real delta;             // largest grid point x with f nondecreasing on (0, x]; 0 if none
};

/// Samples consecutive grid pairs from `upper` down to the grid floor.
MonotoneCheck check_monotone(const Evaluator& f, const Real& upper, const ClassifyConfig& config);

struct MajorantResult {
  Verdict verdict;
  Real margin;
  std::optional<Real> failure_x;
  std::optional<Real> delta;
};

/// Checks 0 < g(x) <= m(x) < x on `grid` and transfers convergence of the
/// majorant's series to g.
MajorantResult majorant_rule(const Evaluator& g, const MajorantSpec& m, const GridSpec& grid,
                             const ClassifyConfig& config);

/// Built-in search: Linear members first, then PowerLaw members, each in
/// ascending c (then a). Returns the first dominating member's result, or
/// an Inconclusive result when none dominates.
MajorantResult search_majorant(const Evaluator& g, const GridSpec& grid, const ClassifyConfig& config);

/// Candidate c values for Linear majorants, ascending with labels.
std::vector<LinearMajorant> linear_candidates();
std::vector<PowerLawMajorant> power_law_candidates();

// ---------------------------------------------------------------------------
// Signed mode

/// x f(x) < 0 on the symmetric grid gives the alternating rule; otherwise
/// sup |f(x)|/|x| < 1 - margin gives absolute convergence.
Verdict signed_rule(const Evaluator& f, const GridSpec& grid, const ClassifyConfig& config);

}  // namespace rseries
