#include "rseries/cli.hpp"

#include "rseries/analyze.hpp"
#include "rseries/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <ostream>

namespace rseries::cli {

namespace {

/// Everything a subcommand may read from the command line.
struct RunConfig {
  std::string function_text;
  std::string x0;
  std::string mode = "auto";
  unsigned precision = kDefaultDigits;
  std::size_t max_n = 1'000'000;
  std::string floor = "1e-40";
  std::string grid_start;
  std::string grid_ratio;
  std::string grid_floor;
  bool json = false;
  std::string orbit_csv;
  std::string trace_csv;
  std::size_t every = 1;
  std::string taylor;
  std::string exponent;
  std::string majorant;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ModeRequest parse_mode(const std::string& text) {
  if (text == "auto") return ModeRequest::Auto;
  if (text == "positive") return ModeRequest::Positive;
  if (text == "signed") return ModeRequest::Signed;
  throw UsageError("--mode must be auto, positive or signed");
}

Real parse_x0(const RunConfig& rc) {
  Real x0 = parse_real(rc.x0);
  if (x0 == 0) throw UsageError("--x0 must be nonzero");
  return x0;
}

ClassifyConfig classify_config(const RunConfig& rc) {
  ClassifyConfig cc;
  if (!rc.grid_start.empty()) cc.probe_grid.start = parse_real(rc.grid_start);
  if (!rc.grid_ratio.empty()) cc.probe_grid.ratio = parse_real(rc.grid_ratio);
  if (!rc.grid_floor.empty()) cc.probe_grid.floor = parse_real(rc.grid_floor);
  validate(cc.probe_grid);
  return cc;
}

FunctionDef function_of(const RunConfig& rc) {
  if (!rc.function_text.empty()) return parse(rc.function_text);
  if (!rc.taylor.empty()) return taylor_polynomial(parse_taylor(rc.taylor));
  throw UsageError("--f is required");
}

void write_file(const std::string& path, const auto& writer) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  writer(file);
}

int exit_for(Conclusion conclusion) {
  return conclusion == Conclusion::Inconclusive ? kExitInconclusive : kExitDecisive;
}

// ---------------------------------------------------------------------------

int cmd_analyze(const RunConfig& rc, std::ostream& out) {
  WorkingPrecision precision(rc.precision);
  AnalyzeConfig config;
  config.mode = parse_mode(rc.mode);
  config.digits = rc.precision;
  config.max_n = rc.max_n;
  config.floor = parse_real(rc.floor);
  config.classify = classify_config(rc);
  if (!rc.taylor.empty()) config.taylor = parse_taylor(rc.taylor);
  const FunctionDef f = function_of(rc);

  const AnalysisReport report = analyze(f, parse_x0(rc), config);
  if (!rc.orbit_csv.empty()) {
    write_file(rc.orbit_csv, [&](std::ostream& os) { write_orbit_csv(os, report.orbit, rc.every); });
  }
  if (!rc.trace_csv.empty()) {
    std::optional<std::pair<Real, Real>> law;
    if (const auto* w = std::get_if<ExponentWitness>(&report.verdict.witness)) {
      law.emplace(w->a, w->k);
    } else if (report.fit) {
      law.emplace(report.fit->a, report.fit->k);
    }
    if (!law) throw std::runtime_error("--trace-csv needs an exponent witness or an accepted power-law fit");
    const AsymptoticCheck check = verify_asymptotic(report.orbit, law->first, law->second, config.asymptotic_tolerance);
    write_file(rc.trace_csv, [&](std::ostream& os) { write_trace_csv(os, check); });
  }
  if (rc.json) {
    out << to_json(report).dump(2) << '\n';
  } else {
    write_text(out, report);
  }
  return exit_for(report.verdict.conclusion);
}

int cmd_iterate(const RunConfig& rc, std::ostream& out) {
  WorkingPrecision precision(rc.precision);
  const FunctionDef f = function_of(rc);
  const Evaluator fe(f, rc.precision);
  const Real x0 = parse_x0(rc);
  IterateOptions options;
  options.max_n = rc.max_n;
  options.floor = parse_real(rc.floor);
  const ModeRequest mode = parse_mode(rc.mode);
  if (mode == ModeRequest::Signed) {
    options.mode = Mode::Signed;
  } else if (mode == ModeRequest::Auto) {
    bool negative = x0 < 0;
    try {
      negative = negative || fe(x0) < 0;
    } catch (const DomainError&) {
      // surfaces as a hypothesis violation at step 1
    }
    options.mode = negative ? Mode::Signed : Mode::Positive;
  }
  const Orbit orbit = iterate(fe, x0, options);

  if (!rc.orbit_csv.empty()) {
    write_file(rc.orbit_csv, [&](std::ostream& os) { write_orbit_csv(os, orbit, rc.every); });
  } else if (!rc.json) {
    write_orbit_csv(out, orbit, rc.every);
  }
  if (rc.json) {
    Json j;
    j["function"] = render(f);
    j["x0"] = to_string(x0);
    j["mode"] = std::string(to_string(orbit.mode));
    j["n"] = orbit.last_index();
    j["x_n"] = to_string(orbit.last_term());
    j["partial_sum"] = to_string(partial_sum(orbit));
    j["status"] = std::string(to_string(orbit.status));
    if (orbit.violation) {
      j["violation"] = Json{{"step", orbit.violation->step},
                            {"value", orbit.violation->value ? to_string(*orbit.violation->value) : std::string()},
                            {"reason", orbit.violation->reason}};
    }
    out << j.dump(2) << '\n';
  } else {
    out << "# N = " << orbit.last_index() << ", x_N = " << to_short_string(orbit.last_term(), 20)
        << ", S_N = " << to_short_string(partial_sum(orbit), 20) << ", status " << to_string(orbit.status) << '\n';
    if (orbit.violation) {
      out << "# violation at step " << orbit.violation->step << ": " << orbit.violation->reason;
      if (orbit.violation->value) out << " (x = " << to_short_string(*orbit.violation->value, 20) << ")";
      out << '\n';
    }
  }
  return orbit.status == OrbitStatus::HypothesisViolation ? kExitError : kExitDecisive;
}

Json samples_json(const std::vector<Sample>& samples) {
  Json arr = Json::array();
  for (const Sample& s : samples) arr.push_back(Json::array({to_string(s.x), to_string(s.value)}));
  return arr;
}

void samples_text(std::ostream& out, const std::vector<Sample>& samples) {
  out << "x,L_a(x)\n";
  for (const Sample& s : samples) out << to_string(s.x) << ',' << to_string(s.value) << '\n';
}

int cmd_limit(const RunConfig& rc, std::ostream& out) {
  WorkingPrecision precision(rc.precision);
  const FunctionDef f = function_of(rc);
  const Evaluator fe(f, rc.precision);
  const ClassifyConfig cc = classify_config(rc);
  if (rc.exponent.empty()) throw UsageError("--a is required (a number or 'search')");

  Json j;
  j["function"] = render(f);
  if (rc.exponent == "search") {
    const ExponentSearch search = search_exponent(fe, cc);
    j["search"] = search.fit ? "found" : "not_found";
    if (search.fit) {
      const ExponentFit& fit = *search.fit;
      j["a"] = to_string(fit.a);
      j["verdict"] = std::string(to_string(fit.probe.verdict));
      j["L"] = to_string(fit.probe.limit);
      j["k"] = to_string(fit.k);
      j["samples"] = samples_json(fit.probe.samples);
    } else {
      j["reason"] = search.reason;
    }
    if (rc.json) {
      out << j.dump(2) << '\n';
    } else if (search.fit) {
      out << "search: found a = " << to_short_string(search.fit->a, 12) << ", L = "
          << to_short_string(search.fit->probe.limit, 12) << ", k = " << to_short_string(search.fit->k, 12) << '\n';
      samples_text(out, search.fit->probe.samples);
    } else {
      out << "search: NotFound (" << search.reason << ")\n";
    }
    return search.fit ? kExitDecisive : kExitInconclusive;
  }

  const Real a = parse_real(rc.exponent);
  const LimitProbe probe = probe_limit(fe, a, cc);
  const bool finite = probe.verdict == LimitProbe::Verdict::FiniteNonzero;
  j["a"] = to_string(a);
  j["verdict"] = std::string(to_string(probe.verdict));
  if (finite) {
    j["L"] = to_string(probe.limit);
    j["k"] = to_string(pow(probe.limit, -1 / a));
  }
  j["samples"] = samples_json(probe.samples);
  if (rc.json) {
    out << j.dump(2) << '\n';
  } else {
    out << "a = " << to_short_string(a, 12) << ": " << to_string(probe.verdict);
    if (finite) {
      out << ", L = " << to_short_string(probe.limit, 12) << ", k = " << to_short_string(pow(probe.limit, -1 / a), 12);
    }
    out << '\n';
    samples_text(out, probe.samples);
  }
  return finite ? kExitDecisive : kExitInconclusive;
}

int cmd_compare(const RunConfig& rc, std::ostream& out) {
  WorkingPrecision precision(rc.precision);
  const FunctionDef g = function_of(rc);
  const Evaluator ge(g, rc.precision);
  if (rc.majorant.empty()) throw UsageError("--majorant is required");
  const MajorantSpec m = parse_majorant(rc.majorant);
  const ClassifyConfig cc = classify_config(rc);
  const Real x0 = rc.x0.empty() ? parse_real("0.5") : parse_x0(rc);
  if (!(x0 > 0)) throw UsageError("--x0 must be positive for a comparison");

  GridSpec grid = cc.probe_grid;
  grid.start = std::max(x0, grid.start);
  const MajorantResult result = majorant_rule(ge, m, grid, cc);

  // Term-by-term comparison of the two orbits from x0.
  IterateOptions options;
  options.max_n = std::min<std::size_t>(rc.max_n, 10'000);
  options.floor = parse_real(rc.floor);
  const Orbit orbit = iterate(ge, x0, options);
  std::optional<Evaluator> user;
  if (const auto* u = std::get_if<UserMajorant>(&m.family)) user.emplace(u->f, rc.precision);
  std::vector<Real> majorant_terms{orbit.x0};
  std::optional<std::size_t> first_failure;
  for (std::size_t n = 1; n < orbit.terms.size(); ++n) {
    const Real& prev = majorant_terms.back();
    majorant_terms.push_back(user ? (*user)(prev) : evaluate_majorant(m, prev));
    if (!first_failure && orbit.terms[n] > majorant_terms.back()) first_failure = n;
  }

  const std::string delta = result.delta ? to_string(*result.delta) : std::string("inf");
  if (rc.json) {
    Json j;
    j["function"] = render(g);
    j["majorant"] = m.id();
    j["x0"] = to_string(x0);
    const Json v = to_json(result.verdict);
    j["verdict"] = v["verdict"];
    j["rule"] = v["rule"];
    j["margin"] = to_string(result.margin);
    j["delta"] = delta;
    if (result.failure_x) j["failure_x"] = to_string(*result.failure_x);
    j["comparison"] = Json{{"n", orbit.last_index()}, {"holds", !first_failure.has_value()}};
    if (first_failure) j["comparison"]["first_failure"] = *first_failure;
    Json rows = Json::array();
    for (std::size_t n = 0; n < std::min<std::size_t>(orbit.terms.size(), 20); ++n) {
      rows.push_back(Json{{"n", n}, {"g_n", to_string(orbit.terms[n])}, {"m_n", to_string(majorant_terms[n])}});
    }
    j["rows"] = rows;
    j["notes"] = result.verdict.notes;
    out << j.dump(2) << '\n';
  } else {
    out << "g(x) = " << render(g) << ", majorant " << m.id() << '\n';
    out << "verdict: " << to_string(result.verdict.conclusion) << " (" << to_string(result.verdict.rule) << ")\n";
    out << "margin min(m - g) = " << to_short_string(result.margin, 12) << ", delta = " << delta << '\n';
    if (result.failure_x) out << "domination fails at x = " << to_short_string(*result.failure_x, 20) << '\n';
    for (const std::string& note : result.verdict.notes) out << "note: " << note << '\n';
    out << "n,g^n(x0),m^n(x0)\n";
    for (std::size_t n = 0; n < std::min<std::size_t>(orbit.terms.size(), 20); ++n) {
      out << n << ',' << to_short_string(orbit.terms[n], 20) << ',' << to_short_string(majorant_terms[n], 20) << '\n';
    }
    out << "m^n(x0) >= g^n(x0) for n <= " << orbit.last_index() << ": "
        << (first_failure ? "fails at n = " + std::to_string(*first_failure) : std::string("holds")) << '\n';
  }
  return exit_for(result.verdict.conclusion);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convergence analyzer for series of iterates x_{n+1} = f(x_n)", "rseries"};
  app.require_subcommand(1);
  RunConfig rc;

  auto common = [&rc](CLI::App* sub) {
    sub->add_option("--f", rc.function_text, "defining function f(x)");
    sub->add_option("--precision", rc.precision, "significant digits")->check(CLI::Range(16u, 100000u));
    sub->add_option("--grid-start", rc.grid_start, "largest probe grid point");
    sub->add_option("--grid-ratio", rc.grid_ratio, "probe grid ratio in (0, 1)");
    sub->add_option("--grid-floor", rc.grid_floor, "smallest probe grid point");
    sub->add_flag("--json", rc.json, "machine-readable output");
  };

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "classify the series and report the rule that fired");
  common(analyze_cmd);
  analyze_cmd->add_option("--x0", rc.x0, "seed")->required();
  analyze_cmd->add_option("--mode", rc.mode, "auto | positive | signed");
  analyze_cmd->add_option("--max-n", rc.max_n, "iteration cap for the orbit cross-check")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--floor", rc.floor, "stop once |x_n| drops below this");
  analyze_cmd->add_option("--orbit-csv", rc.orbit_csv, "write the orbit as CSV");
  analyze_cmd->add_option("--every", rc.every, "record every m-th orbit row in the CSV");
  analyze_cmd->add_option("--trace-csv", rc.trace_csv, "write n,x_n,r_n for r_n = n^(1/a) x_n");
  analyze_cmd->add_option("--taylor", rc.taylor, "Taylor coefficients a1,a2,... at 0");

  CLI::App* iterate_cmd = app.add_subcommand("iterate", "compute the orbit and its partial sums");
  common(iterate_cmd);
  iterate_cmd->add_option("--x0", rc.x0, "seed")->required();
  iterate_cmd->add_option("--mode", rc.mode, "auto | positive | signed");
  iterate_cmd->add_option("--max-n", rc.max_n, "iteration cap")->check(CLI::PositiveNumber);
  iterate_cmd->add_option("--floor", rc.floor, "stop once |x_n| drops below this");
  iterate_cmd->add_option("--orbit-csv", rc.orbit_csv, "write the CSV here instead of stdout");
  iterate_cmd->add_option("--every", rc.every, "record every m-th row");

  CLI::App* limit_cmd = app.add_subcommand("limit", "probe (x^a - f^a)/(x^a f^a) as x -> 0");
  common(limit_cmd);
  limit_cmd->add_option("--a", rc.exponent, "exponent, or 'search'")->required();

  CLI::App* compare_cmd = app.add_subcommand("compare", "comparison test against a monotone majorant");
  common(compare_cmd);
  compare_cmd->add_option("--majorant", rc.majorant, "linear:<c> | powerlaw:a=<a>,c=<c> | fn:<expr>")->required();
  compare_cmd->add_option("--x0", rc.x0, "seed for the orbit comparison (default 0.5)");
  compare_cmd->add_option("--max-n", rc.max_n, "orbit length cap (at most 10000)")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--floor", rc.floor, "stop once x_n drops below this");

  try {
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitDecisive;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(rc, out);
    if (iterate_cmd->parsed()) return cmd_iterate(rc, out);
    if (limit_cmd->parsed()) return cmd_limit(rc, out);
    return cmd_compare(rc, out);
  } catch (const ParseError& e) {
    err << "parse error at offset " << e.offset() << ": " << e.what() << '\n';
  } catch (const PrecisionGuardError& e) {
    err << "precision guard: " << e.what() << " (try --precision " << e.suggested_digits() << ")\n";
  } catch (const StageError& e) {
    err << "error in stage " << e.stage() << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace rseries::cli
