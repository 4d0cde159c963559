#include "rseries/estimate.hpp"

#include <algorithm>
#include <ostream>

namespace rseries {

namespace {

struct LineFit {
  Real slope;
  Real intercept;
};

LineFit least_squares(const std::vector<Real>& xs, const std::vector<Real>& ys, std::size_t first,
                      std::size_t last) {
  const Real count(last - first);
  Real sx = 0, sy = 0;
  for (std::size_t i = first; i < last; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const Real mx = sx / count;
  const Real my = sy / count;
  Real sxx = 0, sxy = 0;
  for (std::size_t i = first; i < last; ++i) {
    const Real dx = xs[i] - mx;
    sxx += dx * dx;
    sxy += dx * (ys[i] - my);
  }
  if (sxx == 0) throw PreconditionError("degenerate fit window");
  const Real slope = sxy / sxx;
  return {slope, my - slope * mx};
}

unsigned digits_of(const Orbit& orbit) {
  return std::max<unsigned>(kMinDigits, static_cast<unsigned>(orbit.terms.front().precision()));
}

}  // namespace

AsymptoticFit fit_power_law(const Orbit& orbit, std::optional<IndexWindow> window) {
  if (orbit.terms.size() < 2) throw PreconditionError("orbit too short to fit");
  if (orbit.mode != Mode::Positive) throw PreconditionError("power-law fit needs a positive orbit");
  WorkingPrecision precision(digits_of(orbit));
  const std::size_t last_index = orbit.last_index();
  IndexWindow w = window.value_or(IndexWindow{std::max<std::size_t>(1, last_index / 2), last_index});
  w.first = std::max<std::size_t>(w.first, 1);
  if (w.last > last_index || w.first > w.last) throw PreconditionError("fit window outside the orbit");
  if (w.size() < kMinFitTerms) {
    throw PreconditionError("fit window holds " + std::to_string(w.size()) + " terms, need at least " +
                            std::to_string(kMinFitTerms));
  }
  for (std::size_t n = w.first; n < w.last; ++n) {
    if (!(orbit.terms[n + 1] < orbit.terms[n]) || !(orbit.terms[n + 1] > 0)) {
      throw PreconditionError("orbit is not strictly decreasing and positive at n = " + std::to_string(n + 1));
    }
  }

  std::vector<Real> log_n, log_x;
  log_n.reserve(w.size());
  log_x.reserve(w.size());
  for (std::size_t n = w.first; n <= w.last; ++n) {
    log_n.push_back(log(Real(n)));
    log_x.push_back(log(orbit.terms[n]));
  }
  const std::size_t count = log_n.size();
  const LineFit whole = least_squares(log_n, log_x, 0, count);
  const LineFit head = least_squares(log_n, log_x, 0, count / 2);
  const LineFit tail = least_squares(log_n, log_x, count / 2, count);

  AsymptoticFit fit;
  fit.window = w;
  fit.slope_drift = abs(head.slope - tail.slope) / abs(whole.slope);
  if (!(whole.slope < 0)) {
    fit.a = Real(0);
    fit.k = Real(0);
    fit.residual = Real(0);
    fit.power_law = false;
    fit.note = "no power law: log-log slope is not negative";
    return fit;
  }
  fit.a = -1 / whole.slope;
  fit.k = exp(whole.intercept);
  const Real inv_a = 1 / fit.a;
  Real worst = 0;
  for (std::size_t i = 0; i < count; ++i) {
    // n^(1/a) x_n evaluated in log space
    const Real r = exp(inv_a * log_n[i] + log_x[i]);
    worst = std::max(worst, abs(r - fit.k) / fit.k);
  }
  fit.residual = worst;
  if (fit.residual > parse_real("0.1") || fit.slope_drift > parse_real("0.05")) {
    fit.power_law = false;
    fit.note = "no power law: residual " + to_short_string(fit.residual, 4) + ", slope drift " +
               to_short_string(fit.slope_drift, 4);
  }
  return fit;
}

AsymptoticCheck verify_asymptotic(const Orbit& orbit, const Real& a, const Real& k, const Real& tolerance) {
  if (orbit.terms.size() < 2) throw PreconditionError("orbit too short to verify");
  if (!(a > 0) || !(k > 0)) throw PreconditionError("a and k must be positive");
  WorkingPrecision precision(digits_of(orbit));
  const std::size_t last = orbit.last_index();
  const std::size_t first = std::max<std::size_t>(1, (last + 9) / 10);
  const Real inv_a = 1 / a;

  AsymptoticCheck check;
  check.passed = true;
  check.max_deviation = 0;
  check.trace.reserve(last - first + 1);
  for (std::size_t n = first; n <= last; ++n) {
    Real r = pow(Real(n), inv_a) * orbit.terms[n];
    Real dev = abs(r / k - 1);
    if (dev > check.max_deviation) {
      check.max_deviation = dev;
      check.worst_index = n;
    }
    if (dev > tolerance) check.passed = false;
    check.trace.push_back({n, orbit.terms[n], std::move(r)});
  }
  return check;
}

void write_trace_csv(std::ostream& out, const AsymptoticCheck& check) {
  out << "n,x_n,r_n\n";
  for (const TracePoint& p : check.trace) {
    out << p.n << ',' << to_string(p.x_n) << ',' << to_string(p.r_n) << '\n';
  }
}

Extrapolation extrapolate_limit(std::span<const Sample> samples) {
  if (samples.size() < 4) throw PreconditionError("extrapolation needs at least 4 samples");
  const std::size_t n = samples.size();
  const Sample& s0 = samples[n - 4];
  const Sample& s1 = samples[n - 3];
  const Sample& s2 = samples[n - 2];
  const Sample& s3 = samples[n - 1];
  WorkingPrecision precision(std::max<unsigned>(kMinDigits, static_cast<unsigned>(s3.value.precision())));

  const Real r1 = s1.x / s0.x;
  const Real r2 = s2.x / s1.x;
  const Real r3 = s3.x / s2.x;
  const Real eps = parse_real("1e-10");
  if (!(r1 > 0 && r1 < 1) || abs(r2 / r1 - 1) > eps || abs(r3 / r1 - 1) > eps) {
    throw PreconditionError("extrapolation needs samples on a descending geometric grid");
  }

  const Real d1 = s2.value - s1.value;
  const Real d2 = s3.value - s2.value;
  const Real d0 = s1.value - s0.value;
  auto fallback = [&] { return Extrapolation{s3.value, abs(d2), true}; };
  if (d1 == 0 || d0 == 0) return fallback();
  // q = r^p from the last triple; the previous triple must agree on it.
  const Real q = d2 / d1;
  const Real q_prev = d1 / d0;
  if (!(q > 0 && q < 1) || !(q_prev > 0) || abs(q_prev - q) > q / 2) return fallback();
  Extrapolation out;
  out.limit = s3.value + d2 * q / (1 - q);
  out.uncertainty = abs(out.limit - s3.value);
  return out;
}

SumEstimate sum_estimate(const Orbit& orbit, const std::optional<AsymptoticFit>& fit) {
  if (orbit.mode != Mode::Positive) throw PreconditionError("sum estimate needs a positive orbit");
  WorkingPrecision precision(digits_of(orbit));
  SumEstimate out;
  out.partial = partial_sum(orbit);
  out.tail = 0;
  out.tail_model = "none";
  const bool finished = orbit.status == OrbitStatus::Underflow;
  if (fit && fit->power_law) {
    if (fit->a >= 1) throw PreconditionError("tail divergent: fitted exponent a >= 1");
    const Real big_n(orbit.last_index());
    const Real p = 1 / fit->a;
    out.tail = fit->k * pow(big_n, 1 - p) / (p - 1);
    out.tail_model = "power law k*N^(1-1/a)/(1/a-1) (model-based)";
  } else if (!finished && orbit.terms.size() >= 2) {
    const std::size_t n = orbit.terms.size();
    const std::size_t first = n > 9 ? n - 9 : 0;
    Real ratio = 0;
    for (std::size_t i = first; i + 1 < n; ++i) ratio = std::max(ratio, orbit.terms[i + 1] / orbit.terms[i]);
    if (ratio > 0 && ratio < 1) {
      out.tail = tail_bound_geometric(orbit, ratio);
      out.tail_model = "geometric ratio " + to_short_string(ratio, 6) + " (heuristic)";
    }
  }
  out.total = out.partial + out.tail;
  return out;
}

}  // namespace rseries
