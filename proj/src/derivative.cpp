#include "rseries/classify.hpp"
#include "rseries/estimate.hpp"

#include <algorithm>

namespace rseries {

namespace {

Real spread_of(std::span<const Real> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

Real median_of(std::span<const Real> values) {
  std::vector<Real> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size() / 2;
  return sorted.size() % 2 == 1 ? sorted[m] : (sorted[m - 1] + sorted[m]) / 2;
}

}  // namespace

TailAnalysis analyze_tail(std::span<const Real> values, const StabilizationConfig& config) {
  const std::size_t w = config.window;
  if (w < 2 || values.size() < w + 1) {
    throw PreconditionError("stabilization needs at least " + std::to_string(w + 1) + " samples");
  }
  const auto window = values.subspan(values.size() - w);
  const auto previous = values.subspan(values.size() - w - 1, w);

  TailAnalysis out;
  out.median = median_of(window);
  out.spread = spread_of(window);
  out.last = values.back();
  const Real scale = abs(out.median);
  if (out.spread < std::max(config.rel_tol * scale, config.abs_tol)) {
    out.shape = TailShape::Stable;
    return out;
  }
  bool up = true, down = true;
  for (std::size_t i = 1; i < window.size(); ++i) {
    if (window[i] < window[i - 1]) up = false;
    if (window[i] > window[i - 1]) down = false;
  }
  if (up) {
    out.shape = TailShape::Increasing;
  } else if (down) {
    out.shape = TailShape::Decreasing;
  } else {
    const Real band = 10 * config.rel_tol * scale;
    if (out.spread > band && spread_of(previous) > band) {
      out.shape = TailShape::Oscillating;
    } else {
      out.shape = window.back() >= window.front() ? TailShape::Increasing : TailShape::Decreasing;
    }
  }
  return out;
}

std::string_view to_string(DerivativeEstimate::Kind kind) {
  switch (kind) {
    case DerivativeEstimate::Kind::Value: return "value";
    case DerivativeEstimate::Kind::DNE: return "dne";
    case DerivativeEstimate::Kind::OutOfRange: return "out_of_range";
  }
  return "?";
}

DerivativeEstimate estimate_derivative_at_zero(const Evaluator& f, const ClassifyConfig& config) {
  WorkingPrecision precision(f.digits());
  const GridSpec& grid = config.probe_grid;
  DerivativeEstimate est;
  est.grid = grid.describe();

  std::vector<Real> ratios;
  for (const Real& x : grid.points()) {
    Real ratio = f(x) / x;
    ratios.push_back(ratio);
    est.samples.push_back({x, std::move(ratio)});
  }

  const StabilizationConfig& stab = config.stabilization;
  const TailAnalysis tail = analyze_tail(ratios, stab);
  std::optional<Real> value;
  if (tail.shape == TailShape::Stable) {
    value = tail.last;
  } else if (tail.shape != TailShape::Oscillating) {
    // A monotone tail that creeps toward its limit (f(x)/x = 1 - C x^p with
    // small p) settles once extrapolated.
    std::vector<Real> accelerated;
    const std::size_t need = stab.window + 1;
    const std::size_t n = est.samples.size();
    if (n >= need + 3) {
      for (std::size_t end = n - need + 1; end <= n; ++end) {
        accelerated.push_back(
            extrapolate_limit(std::span<const Sample>(est.samples.data(), end)).limit);
      }
      const TailAnalysis acc = analyze_tail(accelerated, stab);
      if (acc.shape == TailShape::Stable) {
        value = acc.last;
        est.extrapolated = true;
      }
    }
  }

  if (value) {
    est.c = *value;
    const bool in_range = *value >= 0 && *value <= 1 + config.derivative_margin;
    est.kind = in_range ? DerivativeEstimate::Kind::Value : DerivativeEstimate::Kind::OutOfRange;
    return est;
  }

  // No limit: measure the band [liminf, limsup] on a refined tail grid.
  const std::size_t n = est.samples.size();
  const std::size_t tail_start = n > stab.window + 1 ? n - stab.window - 1 : 0;
  GridSpec dense = grid.refined(config.band_refinement);
  dense.start = est.samples[tail_start].x;
  Real lo = ratios[tail_start];
  Real hi = ratios[tail_start];
  for (std::size_t i = tail_start; i < n; ++i) {
    lo = std::min(lo, ratios[i]);
    hi = std::max(hi, ratios[i]);
  }
  for (const Real& x : dense.points()) {
    const Real ratio = f(x) / x;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  est.kind = DerivativeEstimate::Kind::DNE;
  est.band_low = lo;
  est.band_high = hi;
  return est;
}

}  // namespace rseries
