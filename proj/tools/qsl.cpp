// qsl: run seeded verification scenarios and the built-in acceptance suite.
//
// Exit status: 0 all relations hold, 1 a relation is violated beyond its
// tolerance, 2 configuration or usage error, 3 numerical or I/O failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsl/cli/config.hpp"
#include "qsl/cli/report.hpp"
#include "qsl/cli/scenarios.hpp"
#include "qsl/cli/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(const qsl::Error& e) {
  switch (e.code()) {
    case qsl::ErrorCode::ParseError:
    case qsl::ErrorCode::UnknownScenario:
    case qsl::ErrorCode::MissingSeed:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

struct RunOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
};

int do_run(const RunOptions& o) {
  qsl::cli::RunConfig config;
  try {
    config = qsl::cli::load_config(o.config_path);
  } catch (const qsl::Error& e) {
    std::cerr << "qsl: " << e.what() << '\n';
    return e.code() == qsl::ErrorCode::IoError ? kExitConfig : exit_code_for(e);
  }
  if (o.out_dir) config.output.dir = *o.out_dir;
  if (o.format) config.output.format = *o.format;
  if (o.seed) config.seed = *o.seed;
  const int workers = qsl::cli::resolve_workers(o.workers ? o.workers : config.workers);
  try {
    const qsl::cli::RunReport report = qsl::cli::run_scenario(config, workers);
    for (const auto& path : qsl::cli::emit_report(report, config.output.dir, config.output.basename, config.output.format)) {
      std::cout << "wrote " << path << '\n';
    }
    for (const auto& a : report.aggregates) {
      std::printf("%-30s %-5s n=%-6zu min_slack=%-12.4g tol=%-8.1g %s\n", a.quantity.c_str(), a.tag.c_str(), a.count,
                  a.min_slack, a.tolerance, a.passed ? "ok" : "VIOLATED");
    }
    return report.passed ? kExitPass : kExitViolation;
  } catch (const qsl::Error& e) {
    std::cerr << "qsl: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

int do_verify(const std::string& out_dir, std::uint64_t seed, std::optional<int> workers_flag, const std::vector<int>& only) {
  const int workers = qsl::cli::resolve_workers(workers_flag);
  std::vector<qsl::cli::Record> all;
  std::string meta = "{\n  \"seed\": " + std::to_string(seed) + ",\n  \"criteria\": [";
  bool passed = true;
  const auto start = std::chrono::steady_clock::now();
  try {
    bool first = true;
    for (int id = 1; id <= qsl::cli::criterion_count(); ++id) {
      if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
      qsl::cli::CriterionResult r = qsl::cli::run_criterion(id, seed, workers);
      std::cout << qsl::cli::summary_line(r) << std::endl;
      passed = passed && r.passed;
      meta += std::string(first ? "" : ",") + "\n    {\"id\": " + std::to_string(id) + ", \"passed\": " +
              (r.passed ? "true" : "false") + ", \"seconds\": " + qsl::cli::format_number(r.seconds) + "}";
      for (auto& rec : r.records) all.push_back(std::move(rec));
      first = false;
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    meta += "\n  ],\n  \"wall_seconds\": " + qsl::cli::format_number(total) + "\n}\n";

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw qsl::Error(qsl::ErrorCode::IoError, "cannot create '" + out_dir + "': " + ec.message());
    const auto base = std::filesystem::path(out_dir) / "verify";
    qsl::cli::write_text(base.string() + ".csv", qsl::cli::format_csv(all));
    qsl::cli::write_text(base.string() + ".meta.json", meta);
    std::cout << "verify " << (passed ? "PASS" : "FAIL") << ": " << all.size() << " records in " << base.string()
              << ".csv, " << total << " s" << std::endl;
  } catch (const qsl::Error& e) {
    std::cerr << "qsl: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return passed ? kExitPass : kExitViolation;
}

void do_scenarios() {
  std::cout << "scenarios:\n";
  for (const auto& s : qsl::cli::scenario_catalog()) std::printf("  %-22s %s\n", s.name.data(), s.summary.data());
  std::cout << R"(
config (JSON; only "scenario" and "seed" are required):
  scenario            one of the names above
  seed                non-negative integer master seed
  dim | dims          system dimension(s), default [2]; athermality: system dimension (ancilla matches)
  subsystems          [dim_a, dim_b] for correlation-witness, default [2, 2]
  ensemble            trials per dimension, default 100
  steps               integrator steps per trajectory, default 1000
  duration            run time tau, default 1.0
  search              {restarts 20, iterations 500, initial_step 0.3, final_step 0.001, trials 10}
  output              {dir "qsl-out", basename "report", format "csv" | "json"}
  workers             worker threads (flag --workers, then this, then QSL_WORKERS, then 1)
  tolerances          {quantity: tolerance} overrides
  protocol            {family "random" | "constant" | "linear-ramp" | "piecewise",
                       hamiltonian M, start M, end M, segments [{hamiltonian M, duration t}]}
  beta                athermality inverse temperature (random in [0, 3] when absent)
  system_hamiltonian  athermality system Hamiltonian M (random when absent)
  M is a row-major array of rows of [re, im] pairs.

quantities (eq_tag, default tolerance):
)";
  for (const auto& q : qsl::cli::quantity_catalog()) {
    std::printf("  %-30s %-5s %-8.0e %s\n", q.name.data(), q.tag.data(), q.tolerance, q.meaning.data());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speed limits for measurement probabilities: scenarios and acceptance suite"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "run a scenario from a config file");
  run->add_option("config", run_opts.config_path, "config file (JSON)")->required();
  run->add_option("--out", run_opts.out_dir, "output directory");
  run->add_option("--format", run_opts.format, "report format")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--workers", run_opts.workers, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_opts.seed, "override the master seed");

  std::string verify_out = "qsl-verify";
  std::uint64_t verify_seed = qsl::cli::kVerifySeed;
  std::optional<int> verify_workers;
  auto* verify = app.add_subcommand("verify", "run the built-in acceptance suite (criteria 1-9)");
  verify->add_option("--out", verify_out, "output directory")->capture_default_str();
  verify->add_option("--seed", verify_seed, "master seed")->capture_default_str();
  verify->add_option("--workers", verify_workers, "worker threads")->check(CLI::PositiveNumber);
  std::vector<int> verify_only;
  verify->add_option("--only", verify_only, "run only these criteria")->check(CLI::Range(1, 9));

  app.add_subcommand("scenarios", "list scenarios, config schema and report quantities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return do_run(run_opts);
  if (*verify) return do_verify(verify_out, verify_seed, verify_workers, verify_only);
  do_scenarios();
  return kExitPass;
}
