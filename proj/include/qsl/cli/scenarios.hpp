#pragma once

// Scenario runner. Every scenario is a loop over trials; trial k of a
// scenario at dimension d draws everything from
//   derive_seed(master, stream(scenario) + d, k)
// so a single trial can be replayed without running the others.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qsl/cli/config.hpp"
#include "qsl/cli/report.hpp"
#include "qsl/kdq.hpp"

namespace qsl::cli {

std::uint64_t stream_id(std::string_view name);
std::uint64_t trial_seed(std::uint64_t master, std::string_view stream, int dim, int trial);

struct TrialOutput {
  std::vector<Record> records;
  std::vector<GridRow> grid;
};

// Per-trial building blocks shared by `run` and `verify`. `label` fills the
// scenario column of the emitted records.

TrialOutput speed_trial(std::string_view label, std::uint64_t seed, int trial, int dim,
                        const std::optional<HamiltonianSchedule>& protocol, double duration);
TrialOutput holder_trial(std::string_view label, std::uint64_t seed, int trial, int dim,
                         const std::optional<HamiltonianSchedule>& protocol);
TrialOutput entropy_trial(std::string_view label, std::uint64_t seed, int trial, int dim, bool with_pure);
TrialOutput stddev_trial(std::string_view label, std::uint64_t seed, int trial, int dim);
TrialOutput kd_trial(std::string_view label, std::uint64_t seed, int trial, int dim,
                     const std::optional<SearchBudget>& search);
TrialOutput qubit_trial(std::string_view label, std::uint64_t seed, int trial);
TrialOutput correlation_trial(std::string_view label, std::uint64_t seed, int trial, BipartiteDims dims, bool pure,
                              const SearchBudget& budget);
struct AthermalityTrialSettings {
  std::optional<double> beta;                        // random in [0, 3] when absent
  std::optional<ComplexMatrix> system_hamiltonian;   // random when absent
  std::optional<HamiltonianSchedule> joint_schedule; // random uncoupled -> coupled ramp when absent
  double duration = 1.0;
  int steps = 1000;
  bool keep_grid = true;
};
TrialOutput athermality_trial(std::string_view label, std::uint64_t seed, int trial, int dim,
                              const AthermalityTrialSettings& settings);
TrialOutput qsl_time_trial(std::string_view label, std::uint64_t seed, int trial, int dim,
                           const std::optional<HamiltonianSchedule>& protocol, double duration, int steps);

/// Runs fn(0..count-1) on up to `workers` threads and returns results in
/// index order. The lowest-index failure is rethrown with its index attached.
template <class Fn>
std::vector<TrialOutput> run_indexed(int count, int workers, Fn&& fn);

struct RunReport {
  RunConfig config;
  std::vector<Record> records;
  std::vector<Aggregate> aggregates;
  std::vector<GridRow> grid;
  bool passed = true;
  double wall_seconds = 0.0;
};

RunReport run_scenario(const RunConfig& config, int workers);

/// Writes <dir>/<basename>.<format>, a .meta.json sidecar (timestamp, wall time)
/// and, when present, a .grid.csv sidecar. Returns the paths written.
std::vector<std::string> emit_report(const RunReport& report, const std::string& dir, const std::string& basename,
                                     const std::string& format);

/// Worker count: explicit value, else QSL_WORKERS, else 1.
int resolve_workers(std::optional<int> explicit_workers);

}  // namespace qsl::cli

namespace qsl::cli {

template <class Fn>
std::vector<TrialOutput> run_indexed(int count, int workers, Fn&& fn) {
  std::vector<TrialOutput> out(static_cast<std::size_t>(std::max(count, 0)));
  std::vector<std::exception_ptr> errors(out.size());
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min(workers, count));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "trial " + std::to_string(i) + ": " + e.detail());
    }
  }
  return out;
}

}  // namespace qsl::cli
