#include "rseries/report.hpp"

#include <ostream>

namespace rseries {

namespace {

std::string dec(const Real& value) { return to_string(value); }

Json witness_json(const Witness& witness) {
  Json w = Json::object();
  std::visit(
      [&w](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, DerivativeWitness>) {
          w["c"] = dec(payload.c);
        } else if constexpr (std::is_same_v<T, ExponentWitness>) {
          w["a"] = dec(payload.a);
          w["k"] = dec(payload.k);
        } else if constexpr (std::is_same_v<T, AnalyticWitness>) {
          w["index"] = std::to_string(payload.index);
          w["coefficient"] = dec(payload.coefficient);
        } else if constexpr (std::is_same_v<T, MajorantWitness>) {
          w["majorant"] = payload.majorant;
          w["delta"] = payload.delta ? dec(*payload.delta) : std::string("inf");
          w["margin"] = dec(payload.margin);
        } else if constexpr (std::is_same_v<T, AlternatingWitness>) {
          w["pattern"] = "alternating";
          w["grid_points"] = std::to_string(payload.grid_points);
        } else if constexpr (std::is_same_v<T, AbsoluteBoundWitness>) {
          w["c"] = dec(payload.c);
        }
      },
      witness);
  return w;
}

}  // namespace

Json to_json(const DerivativeEstimate& estimate) {
  Json d;
  d["kind"] = std::string(to_string(estimate.kind));
  if (estimate.kind == DerivativeEstimate::Kind::DNE) {
    d["band"] = Json::array({dec(estimate.band_low), dec(estimate.band_high)});
  } else {
    d["c"] = dec(estimate.c);
  }
  return d;
}

Json to_json(const Verdict& verdict) {
  Json v;
  v["verdict"] = std::string(to_string(verdict.conclusion));
  v["rule"] = std::string(to_string(verdict.rule));
  v["witnesses"] = witness_json(verdict.witness);
  return v;
}

Json to_json(const AnalysisReport& report) {
  Json j;
  j["function"] = report.function;
  j["x0"] = dec(report.x0);
  j["mode"] = std::string(to_string(report.mode));
  const Json verdict = to_json(report.verdict);
  j["verdict"] = verdict["verdict"];
  j["rule"] = verdict["rule"];
  j["witnesses"] = verdict["witnesses"];
  j["derivative"] = to_json(report.derivative);
  if (report.fit) {
    j["fit"] = Json{{"a", dec(report.fit->a)}, {"k", dec(report.fit->k)}, {"residual", dec(report.fit->residual)}};
  }
  const Orbit& orbit = report.orbit;
  j["orbit"] = Json{{"n", orbit.last_index()},
                    {"x_n", dec(orbit.last_term())},
                    {"partial_sum", dec(partial_sum(orbit))},
                    {"status", std::string(to_string(orbit.status))}};
  if (report.sum) {
    j["sum_estimate"] = Json{{"value", dec(report.sum->total)},
                             {"tail", dec(report.sum->tail)},
                             {"tail_model", report.sum->tail_model}};
  }
  j["notes"] = report.verdict.notes;
  j["warnings"] = report.warnings;
  return j;
}

void write_text(std::ostream& out, const AnalysisReport& report) {
  out << "function:   f(x) = " << report.function << '\n';
  out << "x0:         " << to_short_string(report.x0, 20) << '\n';
  out << "mode:       " << to_string(report.mode) << '\n';
  out << "verdict:    " << to_string(report.verdict.conclusion) << '\n';
  out << "rule:       " << to_string(report.verdict.rule) << '\n';
  const Json w = witness_json(report.verdict.witness);
  for (const auto& [key, value] : w.items()) {
    out << "  " << key << " = " << value.get<std::string>() << '\n';
  }
  out << "derivative: " << to_string(report.derivative.kind);
  if (report.derivative.kind == DerivativeEstimate::Kind::DNE) {
    out << " band [" << to_short_string(report.derivative.band_low, 8) << ", "
        << to_short_string(report.derivative.band_high, 8) << "]";
  } else {
    out << " c = " << to_short_string(report.derivative.c, 20);
  }
  out << '\n';
  const Orbit& orbit = report.orbit;
  out << "orbit:      N = " << orbit.last_index() << ", x_N = " << to_short_string(orbit.last_term(), 20)
      << ", S_N = " << to_short_string(partial_sum(orbit), 20) << ", status " << to_string(orbit.status) << '\n';
  if (report.fit) {
    out << "fit:        a = " << to_short_string(report.fit->a, 10) << ", k = " << to_short_string(report.fit->k, 10)
        << ", residual " << to_short_string(report.fit->residual, 4) << '\n';
  }
  if (report.sum) {
    out << "sum:        " << to_short_string(report.sum->total, 20) << " (tail " << to_short_string(report.sum->tail, 6)
        << ", " << report.sum->tail_model << ")\n";
  }
  for (const std::string& note : report.verdict.notes) out << "note:       " << note << '\n';
  for (const std::string& warning : report.warnings) out << "warning:    " << warning << '\n';
}

}  // namespace rseries
