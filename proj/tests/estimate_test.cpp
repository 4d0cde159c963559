#include "rseries/estimate.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace rseries {
namespace {

Orbit run(const std::string& f, const std::string& x0, std::size_t max_n, const std::string& floor = "1e-40") {
  WorkingPrecision p(64);
  IterateOptions options;
  options.max_n = max_n;
  options.floor = parse_real(floor);
  return iterate(Evaluator(parse(f), 64), parse_real(x0), options);
}

// x_n = k (n + 1)^(-1/a), a synthetic power-law orbit
Orbit synthetic(const Real& a, const Real& k, std::size_t n_max) {
  Orbit o;
  o.x0 = k;
  Real sum = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    o.terms.push_back(k * pow(Real(n + 1), -1 / a));
    sum += o.terms.back();
    o.partial_sums.push_back(sum);
  }
  return o;
}

std::vector<Sample> sampled(const std::function<Real(const Real&)>& v, const Real& start, const Real& ratio,
                            int count) {
  std::vector<Sample> out;
  Real x = start;
  for (int i = 0; i < count; ++i, x *= ratio) out.push_back({x, v(x)});
  return out;
}

class Orbits : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    reciprocal_ = new Orbit(run("x/(1+x)", "1", 100'000));
    sine_ = new Orbit(run("sin(x)", "1", 100'000));
  }
  static void TearDownTestSuite() {
    delete reciprocal_;
    delete sine_;
  }
  static Orbit* reciprocal_;
  static Orbit* sine_;
};
Orbit* Orbits::reciprocal_ = nullptr;
Orbit* Orbits::sine_ = nullptr;

TEST_F(Orbits, FitReciprocalMap) {
  WorkingPrecision p(64);
  const AsymptoticFit fit = fit_power_law(*reciprocal_);
  EXPECT_TRUE(fit.power_law) << fit.note;
  EXPECT_NEAR(static_cast<double>(fit.a), 1.0, 1e-3);
  EXPECT_NEAR(static_cast<double>(fit.k), 1.0, 1e-3);
  EXPECT_LT(fit.residual, parse_real("1e-3"));
  EXPECT_EQ(fit.window.first, 50'000u);
  EXPECT_EQ(fit.window.last, 100'000u);
}

TEST_F(Orbits, FitSine) {
  WorkingPrecision p(64);
  const AsymptoticFit fit = fit_power_law(*sine_);
  EXPECT_TRUE(fit.power_law) << fit.note;
  EXPECT_NEAR(static_cast<double>(fit.a), 2.0, 0.02);
  EXPECT_NEAR(static_cast<double>(fit.k) / std::sqrt(3.0), 1.0, 0.01);
}

TEST_F(Orbits, VerifyExamples) {
  WorkingPrecision p(64);
  const AsymptoticCheck good = verify_asymptotic(*reciprocal_, Real(1), Real(1), parse_real("1e-3"));
  EXPECT_TRUE(good.passed);
  EXPECT_EQ(good.trace.front().n, 10'000u);
  EXPECT_EQ(good.trace.back().n, 100'000u);

  EXPECT_TRUE(verify_asymptotic(*sine_, Real(2), sqrt(Real(3)), parse_real("0.02")).passed);

  const AsymptoticCheck wrong = verify_asymptotic(*reciprocal_, Real(2), Real(1), parse_real("1e-3"));
  EXPECT_FALSE(wrong.passed);
  // sqrt(n) x_n ~ 1/sqrt(n) is far from 1 over the whole decade
  EXPECT_GT(wrong.max_deviation, parse_real("0.9"));
}

TEST_F(Orbits, EmittedFitsVerify) {
  WorkingPrecision p(64);
  // The fit window is [N/2, N] but verification runs over [N/10, N]; the
  // floor absorbs the log corrections picked up over the extra half decade.
  const Real tol_floor = parse_real("1e-3");
  for (const Orbit* o : {reciprocal_, sine_}) {
    const AsymptoticFit fit = fit_power_law(*o);
    ASSERT_TRUE(fit.power_law);
    EXPECT_TRUE(verify_asymptotic(*o, fit.a, fit.k, 3 * fit.residual + tol_floor).passed);
  }
}

TEST(Fit, GeometricDecayIsNotAPowerLaw) {
  const Orbit o = run("x/2", "1", 1'000'000, "1e-1000");
  ASSERT_GT(o.terms.size(), 3000u);
  WorkingPrecision p(64);
  const AsymptoticFit fit = fit_power_law(o);
  EXPECT_FALSE(fit.power_law);
  EXPECT_NE(fit.note.find("no power law"), std::string::npos);
}

TEST(Fit, ScaleCovariance) {
  WorkingPrecision p(64);
  const Real a = parse_real("0.5");
  const AsymptoticFit base = fit_power_law(synthetic(a, Real(3), 4'000));
  for (const char* lambda_text : {"7", "1e-10", "0.25"}) {
    const Real lambda = parse_real(lambda_text);
    const AsymptoticFit scaled = fit_power_law(synthetic(a, 3 * lambda, 4'000));
    EXPECT_LT(abs(scaled.a - base.a), parse_real("1e-40")) << lambda_text;
    EXPECT_LT(abs(scaled.k / (lambda * base.k) - 1), parse_real("1e-40")) << lambda_text;
  }
}

TEST(Fit, Preconditions) {
  WorkingPrecision p(64);
  const Orbit short_orbit = run("x/(1+x)", "1", 150);
  EXPECT_THROW(fit_power_law(short_orbit), PreconditionError);
  EXPECT_THROW(fit_power_law(synthetic(Real(1), Real(1), 500), IndexWindow{10, 600}), PreconditionError);
  Orbit bumpy = synthetic(Real(1), Real(1), 500);
  bumpy.terms[400] = bumpy.terms[398];
  EXPECT_THROW(fit_power_law(bumpy), PreconditionError);
  const AsymptoticFit fit = fit_power_law(synthetic(Real(1), Real(1), 500), IndexWindow{100, 499});
  EXPECT_EQ(fit.window.first, 100u);
  EXPECT_GT(fit.a, 0);
  EXPECT_GT(fit.k, 0);
  EXPECT_GE(fit.residual, 0);
}

TEST(Verify, TraceCsv) {
  WorkingPrecision p(64);
  const Orbit o = run("x/(1+x)", "1", 100);
  const AsymptoticCheck check = verify_asymptotic(o, Real(1), Real(1), parse_real("0.02"));
  std::ostringstream csv;
  write_trace_csv(csv, check);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "n,x_n,r_n");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, check.trace.size());
  EXPECT_EQ(check.trace.front().n, 10u);
}

TEST(Extrapolate, LinearModel) {
  WorkingPrecision p(64);
  const auto s = sampled([](const Real& x) { return 1 + x; }, parse_real("0.1"), parse_real("0.1"), 4);
  const Extrapolation e = extrapolate_limit(s);
  EXPECT_FALSE(e.fell_back);
  EXPECT_LT(abs(e.limit - 1), parse_real("1e-8"));
}

TEST(Extrapolate, ConstantIsExact) {
  WorkingPrecision p(64);
  const Real c = parse_real("0.75");
  const auto s = sampled([&](const Real&) { return c; }, parse_real("1e-2"), pow(Real(10), Real(-1) / 4), 12);
  const Extrapolation e = extrapolate_limit(s);
  EXPECT_EQ(e.limit, c);
  EXPECT_EQ(e.uncertainty, 0);
}

TEST(Extrapolate, OscillationFallsBack) {
  WorkingPrecision p(64);
  const auto s =
      sampled([](const Real& x) { return sin(1 / x); }, parse_real("1e-2"), pow(Real(10), Real(-1) / 4), 12);
  const Extrapolation e = extrapolate_limit(s);
  EXPECT_TRUE(e.fell_back);
  EXPECT_EQ(e.limit, s.back().value);
  EXPECT_GT(e.uncertainty, parse_real("0.01"));
}

TEST(Extrapolate, ExactOnItsModel) {
  WorkingPrecision p(64);
  const Real ratio = pow(Real(10), Real(-1) / 4);
  for (const char* power : {"0.5", "1", "2", "0.25"}) {
    const Real q = parse_real(power);
    const auto s = sampled([&](const Real& x) { return 2 - 3 * pow(x, q); }, parse_real("1e-2"), ratio, 6);
    const Extrapolation e = extrapolate_limit(s);
    EXPECT_FALSE(e.fell_back) << power;
    EXPECT_LT(abs(e.limit - 2), parse_real("1e-55")) << power;
  }
}

TEST(Extrapolate, RejectsBadGrids) {
  WorkingPrecision p(64);
  auto s = sampled([](const Real& x) { return x; }, parse_real("0.1"), parse_real("0.5"), 4);
  EXPECT_THROW(extrapolate_limit(std::span<const Sample>(s).first(3)), PreconditionError);
  s[2].x *= parse_real("0.9");
  EXPECT_THROW(extrapolate_limit(s), PreconditionError);
}

TEST(SumEstimate, Geometric) {
  const Orbit o = run("x/2", "1", 1'000'000);
  WorkingPrecision p(64);
  const SumEstimate s = sum_estimate(o, std::nullopt);
  EXPECT_LT(abs(s.total - 2), parse_real("1e-12"));
  EXPECT_EQ(s.total, s.partial + s.tail);
}

TEST(SumEstimate, GeometricTailBeforeTheFloor) {
  const Orbit o = run("x/2", "1", 20);
  WorkingPrecision p(64);
  const SumEstimate s = sum_estimate(o, std::nullopt);
  EXPECT_EQ(s.tail, o.last_term());
  EXPECT_LT(abs(s.total - 2), parse_real("1e-60"));
  EXPECT_NE(s.tail_model.find("geometric"), std::string::npos);
}

TEST(SumEstimate, PowerLawTailAtTwoHorizons) {
  // member a = 1/2, c = 1 of the majorant family: x_n ~ n^-2, k = c^(-1/a) = 1
  const Orbit long_orbit = run("x/(1 + sqrt(x))^2", "1", 1'000'000);
  Orbit short_orbit = long_orbit;
  short_orbit.terms.resize(100'001);
  short_orbit.partial_sums.resize(100'001);
  WorkingPrecision p(64);
  const AsymptoticFit fit = fit_power_law(short_orbit);
  ASSERT_TRUE(fit.power_law);
  EXPECT_NEAR(static_cast<double>(fit.a), 0.5, 1e-3);
  EXPECT_NEAR(static_cast<double>(fit.k), 1.0, 1e-3);
  const SumEstimate s = sum_estimate(short_orbit, fit);
  EXPECT_GT(s.tail, 0);
  EXPECT_LE(abs(partial_sum(long_orbit) - s.total), 2 * s.tail);
  EXPECT_NE(s.tail_model.find("model"), std::string::npos);
}

TEST(SumEstimate, DivergentTailIsAnError) {
  WorkingPrecision p(64);
  const Orbit o = run("x/(1+x)", "1", 1'000);
  AsymptoticFit fit;
  fit.a = 1;
  fit.k = 1;
  fit.residual = 0;
  try {
    sum_estimate(o, fit);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("tail divergent"), std::string::npos);
  }
}

}  // namespace
}  // namespace rseries
