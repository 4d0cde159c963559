#include "rseries/classify.hpp"

#include <algorithm>
#include <numeric>

namespace rseries {

namespace {

std::string strip(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return std::string(s);
}

// m(x) with the user expression compiled once.
class MajorantFn {
 public:
  MajorantFn(const MajorantSpec& spec, unsigned digits) : spec_(spec) {
    if (const auto* user = std::get_if<UserMajorant>(&spec.family)) user_.emplace(user->f, digits);
  }
  Real operator()(const Real& x) const {
    if (user_) return (*user_)(x);
    return evaluate_majorant(spec_, x);
  }

 private:
  const MajorantSpec& spec_;
  std::optional<Evaluator> user_;
};

}  // namespace

MajorantSpec MajorantSpec::linear(const Real& c, std::string label) {
  return MajorantSpec{LinearMajorant{c, std::move(label)}, std::nullopt};
}

MajorantSpec MajorantSpec::power_law(const Real& a, const Real& c, std::string label) {
  return MajorantSpec{PowerLawMajorant{a, c, std::move(label)}, std::nullopt};
}

std::string MajorantSpec::id() const {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearMajorant>) {
          return "linear:" + m.label;
        } else if constexpr (std::is_same_v<T, PowerLawMajorant>) {
          return "powerlaw:" + m.label;
        } else {
          return "fn:" + render(m.f);
        }
      },
      family);
}

MajorantSpec parse_majorant(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("majorant must look like linear:<c>, powerlaw:a=<a>,c=<c> or fn:<expr>");
  }
  const std::string kind = strip(text.substr(0, colon));
  const std::string body = strip(text.substr(colon + 1));
  if (kind == "linear") {
    Real c = parse_real(body);
    if (!(c > 0 && c < 1)) throw std::invalid_argument("linear majorant needs c in (0, 1)");
    return MajorantSpec::linear(c, body);
  }
  if (kind == "powerlaw") {
    std::optional<std::string> a_text, c_text;
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t comma = body.find(',', start);
      if (comma == std::string::npos) comma = body.size();
      const std::string item = strip(std::string_view(body).substr(start, comma - start));
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("powerlaw parameters look like a=<a>,c=<c>");
      const std::string key = strip(std::string_view(item).substr(0, eq));
      const std::string value = strip(std::string_view(item).substr(eq + 1));
      if (key == "a") {
        a_text = value;
      } else if (key == "c") {
        c_text = value;
      } else {
        throw std::invalid_argument("unknown powerlaw parameter '" + key + "'");
      }
      start = comma + 1;
    }
    if (!a_text || !c_text) throw std::invalid_argument("powerlaw majorant needs both a and c");
    Real a = parse_real(*a_text);
    Real c = parse_real(*c_text);
    if (!(a > 0 && a < 1) || !(c > 0)) throw std::invalid_argument("powerlaw majorant needs a in (0, 1) and c > 0");
    return MajorantSpec::power_law(a, c, "a=" + *a_text + ",c=" + *c_text);
  }
  if (kind == "fn") return MajorantSpec{UserMajorant{parse(body)}, std::nullopt};
  throw std::invalid_argument("unknown majorant family '" + kind + "'");
}

Real evaluate_majorant(const MajorantSpec& m, const Real& x) {
  return std::visit(
      [&x](const auto& family) -> Real {
        using T = std::decay_t<decltype(family)>;
        if constexpr (std::is_same_v<T, LinearMajorant>) {
          return family.c * x;
        } else if constexpr (std::is_same_v<T, PowerLawMajorant>) {
          return x / pow(1 + family.c * pow(x, family.a), 1 / family.a);
        } else {
          return evaluate(family.f, x, WorkingPrecision::current());
        }
      },
      m.family);
}

std::vector<LinearMajorant> linear_candidates() {
  struct Ratio {
    int num, den;
    std::string label;
  };
  std::vector<Ratio> ratios;
  for (int j = 2; j <= 19; ++j) {
    const int whole = j * 5;  // hundredths
    std::string label = "0." + std::to_string(whole / 10) + (whole % 10 ? std::to_string(whole % 10) : "");
    ratios.push_back({j, 20, std::move(label)});
  }
  for (int den = 2; den <= 6; ++den) {
    for (int num = 1; num < den; ++num) {
      if (std::gcd(num, den) != 1) continue;
      const bool duplicate = std::any_of(ratios.begin(), ratios.end(), [&](const Ratio& r) {
        return r.num * den == num * r.den;
      });
      if (!duplicate) ratios.push_back({num, den, std::to_string(num) + "/" + std::to_string(den)});
    }
  }
  std::stable_sort(ratios.begin(), ratios.end(),
                   [](const Ratio& l, const Ratio& r) { return l.num * r.den < r.num * l.den; });
  std::vector<LinearMajorant> out;
  for (const Ratio& r : ratios) out.push_back({Real(r.num) / Real(r.den), r.label});
  return out;
}

std::vector<PowerLawMajorant> power_law_candidates() {
  static constexpr std::string_view kC[] = {"0.25", "0.5", "1", "2", "4"};
  std::vector<PowerLawMajorant> out;
  for (std::string_view c : kC) {
    for (int tenth = 1; tenth <= 9; ++tenth) {
      const std::string a = "0." + std::to_string(tenth);
      out.push_back({parse_real(a), parse_real(c), "a=" + a + ",c=" + std::string(c)});
    }
  }
  return out;
}

MonotoneCheck check_monotone(const Evaluator& f, const Real& upper, const ClassifyConfig& config) {
  if (!(upper > 0)) throw PreconditionError("monotonicity interval must lie in (0, inf)");
  WorkingPrecision precision(f.digits());
  GridSpec grid = config.probe_grid.refined(4);
  grid.start = upper;
  const std::vector<Real> xs = grid.points();
  std::vector<Real> fs;
  fs.reserve(xs.size());
  for (const Real& x : xs) fs.push_back(f(x));

  MonotoneCheck out;
  out.monotone = true;
  out.delta = xs.front();
  // Walk upward from the smallest grid point; the first decreasing pair caps delta.
  for (std::size_t j = xs.size() - 1; j-- > 0;) {
    if (fs[j + 1] > fs[j]) {
      out.monotone = false;
      out.delta = j + 1 == xs.size() - 1 ? Real(0) : xs[j + 1];
      break;
    }
  }
  return out;
}

namespace {

// Is the majorant's own series known to converge?
std::optional<std::string> certify(const MajorantSpec& m, unsigned digits, const ClassifyConfig& config) {
  if (const auto* lin = std::get_if<LinearMajorant>(&m.family)) {
    if (lin->c < 1) return "geometric series with ratio " + lin->label;
    return std::nullopt;
  }
  if (const auto* pl = std::get_if<PowerLawMajorant>(&m.family)) {
    if (pl->a < 1) return "x/(1+c x^a)^(1/a) with a < 1 has L_a = c exactly, so its series converges";
    return std::nullopt;
  }
  const auto& user = std::get<UserMajorant>(m.family);
  Evaluator mf(user.f, digits);
  const Verdict by_derivative = derivative_rule(estimate_derivative_at_zero(mf, config), config);
  if (by_derivative.conclusion == Conclusion::Convergent) return "majorant has f'(0) < 1";
  const ExponentSearch search = search_exponent(mf, config);
  if (search.fit && limit_exponent_rule(*search.fit, config).conclusion == Conclusion::Convergent) {
    return "majorant has a = " + to_short_string(search.fit->a, 8) + " < 1";
  }
  return std::nullopt;
}

}  // namespace

MajorantResult majorant_rule(const Evaluator& g, const MajorantSpec& m, const GridSpec& grid,
                             const ClassifyConfig& config) {
  WorkingPrecision precision(g.digits());
  MajorantResult out;
  out.margin = Real(0);
  const bool user = std::holds_alternative<UserMajorant>(m.family);
  if (user) {
    const auto& uf = std::get<UserMajorant>(m.family).f;
    Evaluator mf(uf, g.digits());
    const MonotoneCheck mono = check_monotone(mf, grid.start, config);
    out.delta = mono.delta;
    if (!(mono.delta > 0)) {
      out.verdict = Verdict::inconclusive("majorant " + m.id() + " is not monotone increasing near 0");
      return out;
    }
  }

  MajorantFn mf(m, g.digits());
  bool first = true;
  for (const Real& x : grid.points()) {
    const Real gx = g(x);
    const Real mx = mf(x);
    std::string failure;
    if (!(gx > 0)) {
      failure = "g(x) <= 0";
    } else if (!(gx <= mx)) {
      failure = "g(x) > m(x)";
    } else if (!(mx < x)) {
      failure = "m(x) >= x";
    }
    if (!failure.empty()) {
      out.failure_x = x;
      out.verdict = Verdict::inconclusive("domination fails at x = " + to_short_string(x, 10) + ": " + failure +
                                          " (g = " + to_short_string(gx, 10) + ", m = " +
                                          to_short_string(mx, 10) + ")");
      return out;
    }
    const Real gap = mx - gx;
    if (first || gap < out.margin) out.margin = gap;
    first = false;
  }

  const std::optional<std::string> why = certify(m, g.digits(), config);
  if (!why) {
    out.verdict = Verdict::inconclusive("majorant " + m.id() + " dominates but its own series is not certified convergent");
    return out;
  }
  Verdict v;
  v.conclusion = Conclusion::Convergent;
  v.rule = Rule::MajorantRule;
  v.witness = MajorantWitness{m.id(), out.delta, out.margin};
  v.notes.push_back("0 < g(x) <= m(x) < x on " + grid.describe() + " with m = " + m.id() +
                    " monotone increasing; " + *why);
  out.verdict = std::move(v);
  return out;
}

MajorantResult search_majorant(const Evaluator& g, const GridSpec& grid, const ClassifyConfig& config) {
  WorkingPrecision precision(g.digits());
  std::vector<MajorantSpec> specs;
  for (auto& lin : linear_candidates()) specs.push_back(MajorantSpec{std::move(lin), std::nullopt});
  for (auto& pl : power_law_candidates()) specs.push_back(MajorantSpec{std::move(pl), std::nullopt});
  for (const MajorantSpec& m : specs) {
    MajorantResult result = majorant_rule(g, m, grid, config);
    if (result.verdict.conclusion == Conclusion::Convergent) return result;
  }
  MajorantResult none;
  none.margin = Real(0);
  none.verdict = Verdict::inconclusive("no built-in Linear or PowerLaw majorant dominates f on " + grid.describe());
  return none;
}

}  // namespace rseries
