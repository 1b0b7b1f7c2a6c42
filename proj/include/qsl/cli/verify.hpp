#pragma once

// Built-in acceptance suite: nine criteria with fixed ensemble sizes and
// tolerances, each a composition of the scenario trial functions plus
// analytic anchors.

#include <cstdint>
#include <string>
#include <vector>

#include "qsl/cli/report.hpp"

namespace qsl::cli {

inline constexpr std::uint64_t kVerifySeed = 20240917;

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Record> records;
  std::vector<Aggregate> aggregates;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds
};

int criterion_count();
CriterionResult run_criterion(int id, std::uint64_t seed = kVerifySeed, int workers = 1);

/// One line: "C<id> PASS|FAIL <title> (<n> records, min slack <s>, <t> s)".
std::string summary_line(const CriterionResult& r);

}  // namespace qsl::cli
