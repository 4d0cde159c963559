#pragma once

#include "rseries/classify.hpp"
#include "rseries/estimate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rseries {

enum class ModeRequest { Auto, Positive, Signed };

struct AnalyzeConfig {
  ModeRequest mode = ModeRequest::Auto;
  unsigned digits = kDefaultDigits;
  std::size_t max_n = 1'000'000;
  Real floor = parse_real("1e-40");
  ClassifyConfig classify;
  std::optional<TaylorDef> taylor;
  /// Tolerance for the n^(1/a) x_n check attached to limit-exponent verdicts.
  Real asymptotic_tolerance = parse_real("0.02");
};

/// A pipeline stage failed; `stage` names it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct AnalysisReport {
  std::string function;
  Real x0;
  Mode mode = Mode::Positive;
  Verdict verdict;
  HypothesisReport hypotheses;
  DerivativeEstimate derivative;
  std::optional<ExponentSearch> exponent;
  std::optional<MajorantResult> majorant;
  Orbit orbit;
  std::optional<AsymptoticFit> fit;
  std::optional<SumEstimate> sum;
  std::vector<std::string> warnings;
};

/// Full pipeline: hypothesis validation and mode detection, then the signed
/// rule or the derivative rule with routing to the limit-exponent rule (f'(0)
/// near 1) or the built-in majorant search (f'(0) does not exist), followed
/// by an empirical cross-check on the computed orbit.
///
/// Stage failures are rethrown as StageError; a failed hypothesis check in
/// the first stage surfaces as a StageError wrapping the first witness.
AnalysisReport analyze(const FunctionDef& f, const Real& x0, const AnalyzeConfig& config);

}  // namespace rseries
