#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rootflow/io.hpp"

namespace rootflow {
namespace {

using io::json;

struct Run {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ROOTFLOW_DATA_DIR) + "/" + name; }

std::vector<Complex> root_values(const json& report) {
  std::vector<Complex> v;
  for (const auto& r : report["root_set"]["roots"]) {
    for (int m = 0; m < r["multiplicity"].get<int>(); ++m) v.push_back(io::complex_from_json(r["value"]));
  }
  return v;
}

TEST(CliRoots, InlineQuadratic) {
  const auto r = run({"roots", "--inline", "-1,0,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  EXPECT_EQ(rep["schema"], "rootflow/1");
  EXPECT_EQ(rep["kind"], "roots");
  const std::vector<Complex> expected{-1.0, 1.0};
  EXPECT_LT(align_bottleneck(root_values(rep), expected).max_distance, 1e-14);
  EXPECT_NO_THROW(io::validate_report(rep));
}

TEST(CliRoots, WilkinsonWithOracle) {
  const auto r = run({"roots", data("wilkinson5.json"), "--verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  EXPECT_TRUE(rep["verify"]["agrees"].get<bool>());
  EXPECT_LT(rep["verify"]["max_deviation"].get<double>(), 1e-8);
  const std::vector<Complex> expected{1.0, 2.0, 3.0, 4.0, 5.0};
  EXPECT_LT(align_bottleneck(root_values(rep), expected).max_distance, 1e-9);
}

TEST(CliRoots, ZeroPolynomialIsAUsageError) {
  const auto r = run({"roots", "--inline", "0,0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("zero polynomial"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliRoots, MalformedInlineReportsOffset) {
  const auto r = run({"roots", "--inline", "1,2x"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("offset 3"), std::string::npos) << r.err;
}

TEST(CliRoots, MissingFileAndUnknownFlag) {
  EXPECT_EQ(run({"roots", "/nonexistent/p.json"}).code, 2);
  EXPECT_EQ(run({"roots", "--inline", "1,1", "--bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(CliAlign, SmallShift) {
  const auto r = run({"align", "--f-inline", "-1,0,1", "--g-inline", "-1.00000001,0,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  EXPECT_TRUE(rep["agreement"].get<bool>());
  EXPECT_NEAR(rep["deflation"]["max_distance"].get<double>(), std::sqrt(1.0 + 1e-8) - 1.0, 1e-15);
  EXPECT_NO_THROW(io::validate_report(rep));
}

TEST(CliAlign, FilesAndIdenticalInputs) {
  const auto r = run({"align", data("unit_circle.json"), data("unit_circle.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["bottleneck"]["max_distance"].get<double>(), 0.0);
  EXPECT_EQ(r.report()["deflation"]["max_distance"].get<double>(), 0.0);
  const auto s = run({"align", data("unit_circle.json"), data("unit_circle_shifted.json"), "--verify"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_TRUE(s.report()["verify"]["agrees"].get<bool>());
}

TEST(CliAlign, DegreeMismatchIsAUsageError) {
  const auto r = run({"align", "--f-inline", "-1,1", "--g-inline", "-1,0,1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("degree mismatch"), std::string::npos);
}

TEST(CliLemma, Lemma2Passes) {
  const auto r = run({"lemma", data("shift_deformation.json"), "--which", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  EXPECT_TRUE(rep["passed"].get<bool>());
  EXPECT_NO_THROW(io::validate_report(rep));
}

TEST(CliLemma, VanishingLeadingIsInformational) {
  const auto r = run({"lemma", data("vanishing_leading.json"), "--which", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  bool seen = false;
  const auto rep = r.report();
  for (const auto& it : rep["items"]) {
    seen = seen || (it["name"] == "hypothesis violation: divergent trajectory" && it["status"] == "info");
  }
  EXPECT_TRUE(seen);
}

TEST(CliLemma, Lemma1WithInfiniteCoefficient) {
  const auto r = run({"lemma", data("infinite_coefficient.json"), "--which", "1", "--points", "0,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.report()["passed"].get<bool>());
}

TEST(CliLemma, BadLadderIsAUsageError) {
  EXPECT_EQ(run({"lemma", data("shift_deformation.json"), "--ladder", "1e-3,1e-2"}).code, 2);
  EXPECT_EQ(run({"lemma", data("shift_deformation.json"), "--order", "1"}).code, 2);
  EXPECT_EQ(run({"lemma", data("shift_deformation.json"), "--which", "3"}).code, 2);
}

TEST(CliContinuity, SlopeSummaryForZSquared) {
  const auto r = run({"continuity", "--inline", "0,0,1", "--eps-range", "-3:-2:3"});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(r.err.rfind("slope ", 0), 0u) << r.err;
  const double slope = std::stod(r.err.substr(6));
  EXPECT_NEAR(slope, 2.0, 0.1);
  const auto rep = r.report();
  EXPECT_NEAR(rep["slope"].get<double>(), slope, 1e-12);
  EXPECT_NO_THROW(io::validate_report(rep));
}

TEST(CliContinuity, CsvAndOutFile) {
  const auto path = std::filesystem::temp_directory_path() / "rootflow_cli_test.csv";
  const auto r = run({"continuity", "--inline", "-1,1", "--epsilons", "1e-3,1e-2", "--format", "csv",
                      "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "epsilon,delta,distance_at_delta,witness_json,samples,seed");
  int rows = 0;
  for (std::string line; std::getline(in, line);) rows += !line.empty();
  EXPECT_EQ(rows, 2);
  std::filesystem::remove(path);
}

TEST(CliContinuity, VerifyRunsSoundness) {
  const auto r = run({"continuity", "--inline", "0,0,1", "--epsilons", "1e-3", "--verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = r.report();
  const auto& s = rep["soundness"];
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0]["violations"], 0);
  EXPECT_EQ(s[0]["samples"], 500);
}

TEST(CliContinuity, EpsilonsMustIncrease) {
  EXPECT_EQ(run({"continuity", "--inline", "0,0,1", "--epsilons", "1e-2,1e-3"}).code, 2);
  EXPECT_EQ(run({"continuity", "--inline", "0,0,1"}).code, 2);
}

TEST(CliDeterminism, SameSeedSameBytes) {
  const std::vector<std::string> args{"continuity", "--inline", "1,0,-2,1", "--epsilons", "1e-3,1e-2",
                                      "--seed", "42"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> other{"continuity", "--inline", "1,0,-2,1", "--epsilons", "1e-3,1e-2",
                                       "--seed", "43"};
  EXPECT_NE(run(args).out, run(other).out);
}

}  // namespace
}  // namespace rootflow
