// pql: command-line front end for the verification catalogue.
//
//   pql check <id> [--n INT] [--genus INT] [--spec STR] [--samples INT] [--seed INT] [--out PATH]
//   pql suite <algebra|geometry|all> [--seed INT] [--report-dir PATH]
//   pql calibrate [--samples INT] [--out PATH]
//
// Exit codes: 0 pass, 1 mathematical failure, 2 usage or configuration error.

#include "pql/checks.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

template <class T>
void put(nlohmann::json& params, const char* key, const std::optional<T>& v) {
  if (v) params[key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pql: verification checks for power quotients of surface groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pql::kLibraryVersion);

  // check
  auto* check = app.add_subcommand("check", "run one named check and print its JSON report");
  std::string check_id;
  std::optional<std::int64_t> n, genus, samples, trials, seed, resolution;
  std::optional<std::string> spec, witness, calibration, fault;
  std::string out;
  bool stable = false;
  check->add_option("check_id", check_id, "check id (see 'pql list')")->required();
  check->add_option("--n", n, "exponent / ring parameter");
  check->add_option("--genus,-g", genus, "surface genus");
  check->add_option("--spec", spec, "curve or twist spec, e.g. nonsep, sep:1, twist:a1, twist:a1,twist:a2");
  check->add_option("--samples", samples, "number of random samples");
  check->add_option("--trials", trials, "random trials (metabelian)");
  check->add_option("--seed", seed, "base seed (default 0)");
  check->add_option("--resolution", resolution, "search grid points per axis");
  check->add_option("--witness", witness, "qn or h1 (twist-trivial)");
  check->add_option("--calibration", calibration, "calibration file");
  check->add_option("--out", out, "also write the report here");
  check->add_option("--fault", fault, "test hook: corrupt-twist")->group("");
  check->add_flag("--stable", stable, "write duration_ms as 0");

  // suite
  auto* suite = app.add_subcommand("suite", "run a matrix of checks");
  pql::SuiteOptions suite_opts;
  std::string report_dir, suite_fault;
  std::string suite_calibration = pql::kDefaultCalibrationPath;
  suite->add_option("name", suite_opts.name, "algebra, geometry or all")->required();
  suite->add_option("--seed", suite_opts.seed, "base seed (default 0)");
  suite->add_option("--report-dir", report_dir, "directory for per-cell reports and summary.ndjson");
  suite->add_option("--calibration", suite_calibration, "calibration file");
  suite->add_option("--threads", suite_opts.threads, "worker threads (0 = all cores)");
  suite->add_option("--inject-fault", suite_fault, "test hook: corrupt-twist")->group("");
  suite->add_flag("--stable", suite_opts.stable, "write duration_ms as 0");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "measure delta-hat and write the calibration file");
  std::int64_t cal_samples = 1000000;
  std::uint64_t cal_seed = 0;
  std::string cal_out = pql::kDefaultCalibrationPath;
  cal->add_option("--samples", cal_samples, "random quadruples");
  cal->add_option("--seed", cal_seed, "seed");
  cal->add_option("--out,--calibration", cal_out, "output path");

  app.add_subcommand("list", "print the check catalogue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (app.got_subcommand("list")) {
    for (const auto& id : pql::check_ids()) std::cout << id << "\n";
    return 0;
  }

  if (check->parsed()) {
    pql::CheckRequest req;
    req.check_id = check_id;
    put(req.params, "n", n);
    put(req.params, "genus", genus);
    put(req.params, "spec", spec);
    put(req.params, "samples", samples);
    put(req.params, "trials", trials);
    put(req.params, "seed", seed);
    put(req.params, "resolution", resolution);
    put(req.params, "witness", witness);
    put(req.params, "calibration", calibration);
    put(req.params, "fault", fault);
    const pql::CheckReport r = pql::run_check(req);
    const std::string text = pql::dump_report(r, stable);
    if (!out.empty()) std::ofstream(out) << text;
    std::cout << text;
    if (r.status == pql::CheckStatus::Error) std::cerr << "pql: " << r.message << "\n";
    return pql::exit_code(r.status);
  }

  if (suite->parsed()) {
    if (!report_dir.empty()) suite_opts.report_dir = report_dir;
    suite_opts.calibration = suite_calibration;
    if (!suite_fault.empty()) {
      if (suite_fault != "corrupt-twist") {
        std::cerr << "pql: unknown fault '" << suite_fault << "'\n";
        return 2;
      }
      suite_opts.corrupt_twist = true;
    }
    const pql::SuiteResult res = pql::run_suite(suite_opts);
    if (!res.message.empty()) {
      std::cerr << "pql: " << res.message << "\n";
      return res.exit_code;
    }
    for (const auto& r : res.reports) {
      if (r.passed()) continue;
      std::cerr << pql::to_string(r.status) << " " << r.check_id << " " << r.params.dump();
      if (r.counterexample) std::cerr << " counterexample=" << r.counterexample->dump();
      if (!r.message.empty()) std::cerr << " message=" << r.message;
      std::cerr << "\n";
    }
    std::cout << "suite " << suite_opts.name << ": " << res.reports.size() << " cells, " << res.passed << " passed, "
              << res.failed << " failed, " << res.errored << " errors\n";
    return res.exit_code;
  }

  if (cal->parsed()) {
    try {
      const pql::Calibration c = pql::calibrate(cal_samples, cal_seed);
      pql::write_calibration(c, cal_out);
      std::cout << "delta_hat " << c.delta_hat << " (sampled " << c.delta_hat_sampled << ", " << c.samples
                << " quadruples) -> " << cal_out << "\n";
    } catch (const std::exception& e) {
      std::cerr << "pql: " << e.what() << "\n";
      return 2;
    }
    return 0;
  }
  return 2;
}
