#include "pql/checks.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace pql;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pql-test-" + name);
  fs::remove_all(p);
  return p;
}

const fs::path& shared_calibration() {
  static const fs::path path = [] {
    const fs::path p = scratch("calibration.json");
    write_calibration(calibrate(200000, 0), p);
    return p;
  }();
  return path;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PQL_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(RunCheck, MetabelianPasses) {
  const auto r = run_check({"metabelian", {{"n", 7}, {"trials", 1000}, {"seed", 1}}, {}});
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_EQ(r.seed, 1u);
  EXPECT_FALSE(r.counterexample.has_value());
  EXPECT_EQ(r.library_version, kLibraryVersion);
}

TEST(RunCheck, SccOrderReportsObservedOrder) {
  const auto r = run_check({"scc-order", {{"g", 2}, {"n", 5}, {"spec", "nonsep"}}, {}});
  ASSERT_EQ(r.status, CheckStatus::Pass);
  const auto it = std::find_if(r.items.begin(), r.items.end(), [](const auto& i) { return i.name == "witness_order"; });
  ASSERT_NE(it, r.items.end());
  EXPECT_EQ(it->observed, 5);
  EXPECT_TRUE(it->tolerance.is_null());
}

TEST(RunCheck, BadParametersAreErrors) {
  for (const CheckRequest& req : std::vector<CheckRequest>{
           {"metabelian", {{"n", 1}}, {}},
           {"metabelian", {{"n", 2}}, {}},
           {"no-such-check", nlohmann::json::object(), {}},
           {"scc-order", {{"n", 5}, {"spec", "sideways"}}, {}},
           {"scc-order", {{"n", 5}}, {}},
           {"twist-trivial", {{"n", "three"}, {"spec", "twist:a1"}}, {}},
           {"commuting-twists", {{"n", 3}, {"spec", "twist:a1,twist:a1"}}, {}},
       }) {
    const auto r = run_check(req);
    EXPECT_EQ(r.status, CheckStatus::Error) << req.check_id << " " << req.params.dump();
    EXPECT_FALSE(r.message.empty());
    EXPECT_FALSE(r.counterexample.has_value());
    EXPECT_EQ(exit_code(r.status), 2);
  }
}

TEST(RunCheck, MissingCalibrationIsConfigurationError) {
  const auto r = run_check({"four-point", {{"calibration", scratch("absent.json").string()}}, {}});
  EXPECT_EQ(r.status, CheckStatus::Error);
  EXPECT_NE(r.message.find("pql calibrate"), std::string::npos);
}

TEST(RunCheck, FaultInjectionYieldsFailWithCounterexample) {
  const auto r = run_check({"twist-valid", {{"genus", 2}, {"spec", "twist:a1"}, {"fault", "corrupt-twist"}}, {}});
  EXPECT_EQ(r.status, CheckStatus::Fail);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_TRUE(r.counterexample->contains("relator_image"));
  EXPECT_EQ(exit_code(r.status), 1);
}

TEST(RunCheck, StatusPassIffEveryItemPasses) {
  for (const auto& id : {"cyclotomic", "fuchsian", "cone"}) {
    const auto r = run_check({id, {{"n", 40}, {"samples", 500}}, {}});
    bool all = !r.items.empty();
    for (const auto& it : r.items) all = all && it.passed;
    EXPECT_EQ(r.status == CheckStatus::Pass, all) << id;
  }
}

TEST(RunCheck, ReportsAreByteStable) {
  const CheckRequest req{"energy", {{"samples", 5}, {"seed", 3}, {"resolution", 24}}, {}};
  EXPECT_EQ(dump_report(run_check(req), true), dump_report(run_check(req), true));
  const CheckRequest other{"energy", {{"samples", 5}, {"seed", 4}, {"resolution", 24}}, {}};
  EXPECT_NE(dump_report(run_check(req), true), dump_report(run_check(other), true));
}

TEST(RunCheck, WritesOutputPath) {
  const fs::path out = scratch("report.json");
  CheckRequest req{"cyclotomic", {{"n", 12}}, out};
  const auto r = run_check(req);
  ASSERT_TRUE(fs::exists(out));
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j.at("check_id"), "cyclotomic");
  EXPECT_EQ(j.at("status"), "pass");
  for (const char* key : {"params", "items", "counterexample", "duration_ms", "seed", "library_version"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(r.params.at("n"), 12);
}

TEST(RunCheck, GeometryChecksPassWithCalibration) {
  const std::string cal = shared_calibration().string();
  for (const auto& id : {"four-point", "lengths", "thinness", "fix-set"}) {
    const auto r = run_check({id, {{"samples", 5}, {"calibration", cal}}, {}});
    EXPECT_EQ(r.status, CheckStatus::Pass) << id << " " << dump_report(r);
  }
}

TEST(Catalogue, ContainsEveryCheck) {
  const auto ids = check_ids();
  for (const char* id : {"metabelian", "cyclotomic", "scc-order", "twist-valid", "twist-trivial", "commuting-twists",
                         "h1-surjection", "four-point", "metric", "lengths", "cone", "energy", "fuchsian", "thinness",
                         "fix-set"})
    EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
}

TEST(RunSuite, AlgebraPassesAndWritesReports) {
  SuiteOptions opt;
  opt.name = "algebra";
  opt.report_dir = scratch("algebra");
  opt.stable = true;
  const SuiteResult res = run_suite(opt);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.failed + res.errored, 0u);
  std::ifstream summary(*opt.report_dir / "summary.ndjson");
  std::size_t lines = 0;
  for (std::string line; std::getline(summary, line); ++lines) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("status"), "pass");
    EXPECT_TRUE(fs::exists(*opt.report_dir / j.at("report").get<std::string>()));
  }
  EXPECT_EQ(lines, res.reports.size());
}

TEST(RunSuite, GeometryWithoutCalibrationExitsTwo) {
  SuiteOptions opt;
  opt.name = "geometry";
  opt.calibration = scratch("absent-calibration.json");
  const SuiteResult res = run_suite(opt);
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.message.find("calibrate"), std::string::npos);
}

TEST(RunSuite, UnknownSuiteExitsTwo) {
  SuiteOptions opt;
  opt.name = "topology";
  EXPECT_EQ(run_suite(opt).exit_code, 2);
}

TEST(RunSuite, CorruptedTwistFailsWithCounterexample) {
  SuiteOptions opt;
  opt.name = "all";
  opt.calibration = shared_calibration();
  opt.corrupt_twist = true;
  const SuiteResult res = run_suite(opt);
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_GT(res.failed, 0u);
  EXPECT_EQ(res.errored, 0u);
  for (const auto& r : res.reports)
    if (r.status == CheckStatus::Fail) EXPECT_TRUE(r.counterexample.has_value());
}

TEST(RunSuite, ConcurrentRunsMatchSerialRuns) {
  SuiteOptions a;
  a.name = "algebra";
  a.threads = 1;
  SuiteOptions b = a;
  b.threads = 4;
  const auto ra = run_suite(a), rb = run_suite(b);
  ASSERT_EQ(ra.reports.size(), rb.reports.size());
  for (std::size_t i = 0; i < ra.reports.size(); ++i)
    EXPECT_EQ(dump_report(ra.reports[i], true), dump_report(rb.reports[i], true));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("check scc-order --genus 2 --n 5 --spec nonsep"), 0);
  EXPECT_EQ(run_cli("check metabelian --n 1"), 2);
  EXPECT_EQ(run_cli("check bogus"), 2);
  EXPECT_EQ(run_cli("check twist-valid --spec twist:a1 --fault corrupt-twist"), 1);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("check scc-order --n notanumber"), 2);
  EXPECT_EQ(run_cli("suite geometry --calibration " + scratch("nope.json").string()), 2);
  EXPECT_EQ(run_cli("suite algebra --inject-fault corrupt-twist"), 1);
  EXPECT_EQ(run_cli("list"), 0);
}

TEST(Cli, CalibrateThenSuiteAndStableReports) {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  const std::string cal = (dir / "cal.json").string();
  ASSERT_EQ(run_cli("calibrate --samples 50000 --out " + cal), 0);
  EXPECT_EQ(run_cli("suite geometry --calibration " + cal + " --report-dir " + (dir / "geo").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "geo" / "summary.ndjson"));
  const std::string r1 = (dir / "r1.json").string(), r2 = (dir / "r2.json").string();
  ASSERT_EQ(run_cli("check metric --samples 200 --seed 7 --stable --out " + r1), 0);
  ASSERT_EQ(run_cli("check metric --samples 200 --seed 7 --stable --out " + r2), 0);
  EXPECT_EQ(slurp(r1), slurp(r2));
}
