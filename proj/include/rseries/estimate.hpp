#pragma once

#include "rseries/orbit.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rseries {

/// Inclusive range of orbit indices.
struct IndexWindow {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t size() const { return last - first + 1; }
};

/// x_n ~ k * n^(-1/a) fitted on a window of the orbit.
struct AsymptoticFit {
  Real a;
  Real k;
  /// max over the window of |n^(1/a) x_n - k| / k
  Real residual;
  IndexWindow window;
  /// Relative change of the log-log slope between the two window halves.
  Real slope_drift;
  /// False when the data are not consistent with a power law.
  bool power_law = true;
  std::string note;
};

inline constexpr std::size_t kMinFitTerms = 100;

/// Least squares on (ln n, ln x_n); the window defaults to [N/2, N].
AsymptoticFit fit_power_law(const Orbit& orbit, std::optional<IndexWindow> window = std::nullopt);

struct TracePoint {
  std::size_t n;
  Real x_n;
  Real r_n;
};

struct AsymptoticCheck {
  bool passed = false;
  Real max_deviation;  // max |r_n / k - 1|
  std::size_t worst_index = 0;
  std::vector<TracePoint> trace;
};

/// Checks |n^(1/a) x_n / k - 1| <= tolerance over the last decade of indices.
AsymptoticCheck verify_asymptotic(const Orbit& orbit, const Real& a, const Real& k, const Real& tolerance);

/// CSV with header `n,x_n,r_n`.
void write_trace_csv(std::ostream& out, const AsymptoticCheck& check);

struct Extrapolation {
  Real limit;
  Real uncertainty;
  bool fell_back = false;
};

/// One Aitken/Richardson elimination step on the last samples of a
/// geometric grid, assuming v(x) = L + A x^p. Falls back to the raw tail
/// value when the differences vanish or the implied ratio is not in (0, 1).
Extrapolation extrapolate_limit(std::span<const Sample> samples);

struct SumEstimate {
  Real partial;
  Real tail;
  Real total;
  std::string tail_model;
};

/// S_N plus a model-based tail: k N^(1-1/a) / (1/a - 1) from a fit with
/// a < 1, otherwise the geometric bound from the recent ratios when they stay
/// below 1.
SumEstimate sum_estimate(const Orbit& orbit, const std::optional<AsymptoticFit>& fit);

}  // namespace rseries
