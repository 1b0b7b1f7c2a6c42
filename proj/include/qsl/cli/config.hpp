#pragma once

// Run configuration: a JSON document with nested objects. Complex matrices
// are written as row-major nested arrays of [re, im] pairs, e.g. sigma_y is
// [[[0,0],[0,-1]],[[0,1],[0,0]]].

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsl/quantum.hpp"

namespace qsl::cli {

struct ScenarioInfo {
  std::string_view name;
  std::string_view summary;
};

const std::vector<ScenarioInfo>& scenario_catalog();
bool is_known_scenario(std::string_view name);

struct SearchSettings {
  int restarts = 20;
  int iterations = 500;
  double initial_step = 0.3;
  double final_step = 1e-3;
  int trials = 10;  // kd-verify: trials per dimension that also run the stochastic search
};

struct OutputSettings {
  std::string dir = "qsl-out";
  std::string basename = "report";
  std::string format = "csv";
};

struct ProtocolSettings {
  std::string family = "random";  // random | constant | linear-ramp | piecewise
  std::optional<ComplexMatrix> hamiltonian;  // constant
  std::optional<ComplexMatrix> start;        // linear-ramp
  std::optional<ComplexMatrix> end;          // linear-ramp
  std::vector<HamiltonianSchedule::Segment> segments;  // piecewise

  /// Builds the configured schedule over `duration`; empty for "random".
  std::optional<HamiltonianSchedule> schedule(double duration) const;
};

struct RunConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<int> dims{2};
  std::array<int, 2> subsystems{2, 2};
  int ensemble = 100;
  int steps = 1000;
  double duration = 1.0;
  SearchSettings search;
  OutputSettings output;
  std::optional<int> workers;
  std::map<std::string, double> tolerances;  // overrides keyed by quantity name
  ProtocolSettings protocol;
  std::optional<double> beta;
  std::optional<ComplexMatrix> system_hamiltonian;
};

/// Throws Error with ParseError (line/key context), UnknownScenario or MissingSeed.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
/// Normalized document: every field present, defaults filled, fixed key order.
std::string serialize_config(const RunConfig& config);

}  // namespace qsl::cli
