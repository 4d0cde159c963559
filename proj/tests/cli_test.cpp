#include "rseries/cli.hpp"
#include "rseries/real.hpp"

#include <gtest/gtest.h>

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace rseries {
namespace {

using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rseries");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json corpus() {
  std::ifstream in(std::string(RSERIES_TEST_DATA) + "/corpus.json");
  return json::parse(in);
}

bool is_decimal(const json& v) {
  if (!v.is_string()) return false;
  try {
    WorkingPrecision p(64);
    parse_real(v.get<std::string>());
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

void expect_report_schema(const json& j, const std::string& label) {
  SCOPED_TRACE(label);
  ASSERT_TRUE(j.is_object());
  EXPECT_TRUE(j["function"].is_string());
  EXPECT_TRUE(is_decimal(j["x0"]));
  EXPECT_TRUE(j["mode"] == "positive" || j["mode"] == "signed");
  EXPECT_TRUE(j["verdict"] == "convergent" || j["verdict"] == "divergent" || j["verdict"] == "inconclusive");
  EXPECT_TRUE(j["rule"].is_string());
  ASSERT_TRUE(j["witnesses"].is_object());
  for (const char* key : {"c", "a", "k", "delta"}) {
    if (!j["witnesses"].contains(key)) continue;
    const json& w = j["witnesses"][key];
    EXPECT_TRUE(is_decimal(w) || (std::string(key) == "delta" && w == "inf")) << key;
  }
  if (j["witnesses"].contains("majorant")) EXPECT_TRUE(j["witnesses"]["majorant"].is_string());

  const json& d = j["derivative"];
  ASSERT_TRUE(d.is_object());
  EXPECT_TRUE(d["kind"] == "value" || d["kind"] == "dne" || d["kind"] == "out_of_range");
  if (d["kind"] == "dne") {
    ASSERT_TRUE(d["band"].is_array());
    ASSERT_EQ(d["band"].size(), 2u);
    EXPECT_TRUE(is_decimal(d["band"][0]) && is_decimal(d["band"][1]));
  } else {
    EXPECT_TRUE(is_decimal(d["c"]));
  }
  if (j.contains("fit")) {
    for (const char* key : {"a", "k", "residual"}) EXPECT_TRUE(is_decimal(j["fit"][key])) << key;
  }
  const json& o = j["orbit"];
  ASSERT_TRUE(o.is_object());
  EXPECT_TRUE(o["n"].is_number_integer());
  EXPECT_TRUE(is_decimal(o["x_n"]));
  EXPECT_TRUE(is_decimal(o["partial_sum"]));
  EXPECT_TRUE(o["status"].is_string());
  ASSERT_TRUE(j["warnings"].is_array());
  for (const auto& w : j["warnings"]) EXPECT_TRUE(w.is_string());
}

TEST(Analyze, HalvingIsDecisive) {
  const Result r = run({"analyze", "--f", "x/2", "--x0", "1"});
  EXPECT_EQ(r.code, cli::kExitDecisive);
  EXPECT_NE(r.out.find("verdict:    convergent"), std::string::npos);
  EXPECT_NE(r.out.find("rule:       DerivativeRule"), std::string::npos);
  EXPECT_NE(r.out.find("c = 5.0"), std::string::npos);
}

TEST(Analyze, OscillatoryExampleUsesFiveSixths) {
  const Result r = run({"analyze", "--f", "x*(1/2+1/3*sin(1/x))", "--x0", "0.3", "--max-n", "20000", "--json"});
  ASSERT_EQ(r.code, cli::kExitDecisive) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "convergent");
  EXPECT_EQ(j["rule"], "MajorantRule");
  EXPECT_EQ(j["witnesses"]["majorant"], "linear:5/6");
  EXPECT_EQ(j["derivative"]["kind"], "dne");
}

TEST(Analyze, InconclusiveExitsTwo) {
  const Result r = run({"analyze", "--f", "abs(x)*(1 - abs(x))", "--x0", "0.5", "--mode", "signed", "--json"});
  EXPECT_EQ(r.code, cli::kExitInconclusive) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "inconclusive");
  EXPECT_EQ(j["rule"], "None");
}

TEST(Analyze, ErrorsExitOne) {
  const Result parse_error = run({"analyze", "--f", "2x", "--x0", "1"});
  EXPECT_EQ(parse_error.code, cli::kExitError);
  EXPECT_NE(parse_error.err.find("offset 1"), std::string::npos) << parse_error.err;

  const Result hypothesis = run({"analyze", "--f", "2*x", "--x0", "1"});
  EXPECT_EQ(hypothesis.code, cli::kExitError);
  EXPECT_NE(hypothesis.err.find("hypotheses"), std::string::npos) << hypothesis.err;

  EXPECT_EQ(run({"analyze", "--f", "x/2", "--x0", "0"}).code, cli::kExitError);
  EXPECT_EQ(run({"analyze", "--f", "x/2", "--x0", "one"}).code, cli::kExitError);
  EXPECT_EQ(run({"analyze", "--f", "x/2", "--x0", "1", "--precision", "12"}).code, cli::kExitError);
  EXPECT_EQ(run({"analyze", "--f", "x/2", "--x0", "1", "--max-n", "0"}).code, cli::kExitError);
  EXPECT_EQ(run({"analyze", "--x0", "1"}).code, cli::kExitError);
  EXPECT_EQ(run({"bogus"}).code, cli::kExitError);
}

TEST(Analyze, PrecisionGuardSuggestsDigits) {
  const Result r = run({"limit", "--f", "x*(1 - 1e-60)", "--a", "1"});
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_NE(r.err.find("--precision"), std::string::npos) << r.err;
}

TEST(Analyze, TaylorFlag) {
  const Result r =
      run({"analyze", "--f", "x - x^2", "--x0", "0.5", "--taylor", "1,-1", "--max-n", "1000", "--json"});
  ASSERT_EQ(r.code, cli::kExitDecisive) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["rule"], "AnalyticRule");
  EXPECT_EQ(j["verdict"], "divergent");
}

TEST(Analyze, CorpusSchemaAndTextAgreement) {
  for (const auto& entry : corpus()) {
    const std::string f = entry["f"];
    const std::string x0 = entry["x0"];
    const Result jr = run({"analyze", "--f", f, "--x0", x0, "--max-n", "20000", "--json"});
    ASSERT_EQ(jr.code, cli::kExitDecisive) << f << ": " << jr.err;
    const json j = json::parse(jr.out);
    expect_report_schema(j, f);
    EXPECT_EQ(j["verdict"], entry["verdict"]) << f;
    EXPECT_EQ(j["rule"], entry["rule"]) << f;

    const Result tr = run({"analyze", "--f", f, "--x0", x0, "--max-n", "20000"});
    ASSERT_EQ(tr.code, jr.code);
    EXPECT_NE(tr.out.find("verdict:    " + j["verdict"].get<std::string>() + "\n"), std::string::npos) << f;
    EXPECT_NE(tr.out.find("rule:       " + j["rule"].get<std::string>() + "\n"), std::string::npos) << f;
    for (const auto& [key, value] : j["witnesses"].items()) {
      EXPECT_NE(tr.out.find("  " + key + " = " + value.get<std::string>() + "\n"), std::string::npos)
          << f << " witness " << key;
    }
  }
}

TEST(Iterate, ReciprocalMapLastRow) {
  const Result r = run({"iterate", "--f", "x/(1+x)", "--x0", "1", "--max-n", "100"});
  ASSERT_EQ(r.code, cli::kExitDecisive) << r.err;
  std::istringstream lines(r.out);
  std::string line, last_row;
  std::getline(lines, line);
  EXPECT_EQ(line, "n,x_n,S_n");
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] != '#') last_row = line;
  }
  const auto c1 = last_row.find(',');
  const auto c2 = last_row.find(',', c1 + 1);
  EXPECT_EQ(last_row.substr(0, c1), "100");
  WorkingPrecision p(64);
  const Real x = parse_real(last_row.substr(c1 + 1, c2 - c1 - 1));
  EXPECT_LT(abs(x - Real(1) / 101), parse_real("1e-60"));
  EXPECT_NE(r.out.find("# N = 100"), std::string::npos);
}

TEST(Iterate, HalvingReachesFloor) {
  const Result r = run({"iterate", "--f", "x/2", "--x0", "1", "--json"});
  ASSERT_EQ(r.code, cli::kExitDecisive);
  EXPECT_EQ(json::parse(r.out)["status"], "ReachedFloor");
  const Result text = run({"iterate", "--f", "x/2", "--x0", "1", "--every", "50"});
  EXPECT_NE(text.out.find("status ReachedFloor"), std::string::npos);
}

TEST(Iterate, InvalidExpression) {
  const Result r = run({"iterate", "--f", "x +* 2", "--x0", "1"});
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_NE(r.err.find("parse error at offset 3"), std::string::npos) << r.err;
}

TEST(Iterate, ViolationExitsOne) {
  const Result r = run({"iterate", "--f", "x-1", "--x0", "0.5", "--mode", "positive"});
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_NE(r.out.find("violation at step 1"), std::string::npos) << r.out;
}

TEST(Limit, FixedExponent) {
  const Result r = run({"limit", "--f", "x/(1+x)", "--a", "1", "--json"});
  ASSERT_EQ(r.code, cli::kExitDecisive) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "FiniteNonzero");
  WorkingPrecision p(64);
  EXPECT_LT(abs(parse_real(j["L"].get<std::string>()) - 1), parse_real("1e-30"));
  EXPECT_LT(abs(parse_real(j["k"].get<std::string>()) - 1), parse_real("1e-30"));
  EXPECT_FALSE(j["samples"].empty());
}

TEST(Limit, Search) {
  const Result r = run({"limit", "--f", "x/(1+x)", "--a", "search", "--json"});
  ASSERT_EQ(r.code, cli::kExitDecisive) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["search"], "found");
  WorkingPrecision p(64);
  EXPECT_LT(abs(parse_real(j["a"].get<std::string>()) - 1), parse_real("1e-6"));
  EXPECT_LT(abs(parse_real(j["k"].get<std::string>()) - 1), parse_real("1e-6"));

  const Result none = run({"limit", "--f", "x/2", "--a", "search"});
  EXPECT_EQ(none.code, cli::kExitInconclusive);
  EXPECT_NE(none.out.find("NotFound"), std::string::npos);
}

TEST(Compare, Examples) {
  const Result osc = run({"compare", "--f", "x*(1/2+1/3*sin(1/x))", "--majorant", "linear:5/6", "--json"});
  ASSERT_EQ(osc.code, cli::kExitDecisive) << osc.err;
  const json j = json::parse(osc.out);
  EXPECT_EQ(j["verdict"], "convergent");
  EXPECT_EQ(j["comparison"]["holds"], true);

  const Result fails = run({"compare", "--f", "x/2", "--majorant", "powerlaw:a=0.5,c=1"});
  EXPECT_EQ(fails.code, cli::kExitInconclusive);
  EXPECT_NE(fails.out.find("domination fails at x = "), std::string::npos) << fails.out;

  EXPECT_EQ(run({"compare", "--f", "x/3", "--majorant", "linear:0.5"}).code, cli::kExitDecisive);
  EXPECT_EQ(run({"compare", "--f", "x/3", "--majorant", "cubic:2"}).code, cli::kExitError);
}

TEST(Output, OrbitCsvFile) {
  const std::string path = ::testing::TempDir() + "rseries_orbit.csv";
  const Result r = run({"analyze", "--f", "x/2", "--x0", "1", "--orbit-csv", path});
  ASSERT_EQ(r.code, cli::kExitDecisive);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "n,x_n,S_n");
}

TEST(Output, JsonIsDeterministic) {
  const std::vector<std::string> args = {"analyze", "--f", "sin(x)", "--x0", "1", "--max-n", "5000", "--json"};
  EXPECT_EQ(run(args).out, run(args).out);
}

}  // namespace
}  // namespace rseries
