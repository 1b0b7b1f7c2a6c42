#pragma once

// Report records and their CSV / JSON encodings. Column order and number
// formatting (%.17g) are frozen so report bodies diff cleanly across runs.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qsl::cli {

/// One evaluated relation. Inequalities carry slack = bound - value;
/// identities carry slack = -|value - bound| (possibly rescaled, see catalog).
struct Record {
  std::string scenario;
  int trial = 0;
  int dim = 0;
  std::string quantity;
  double value = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  std::string eq_tag;
};

struct QuantitySpec {
  std::string_view name;
  std::string_view tag;
  double tolerance;  // a record passes iff slack >= -tolerance
  std::string_view meaning;
};

const std::vector<QuantitySpec>& quantity_catalog();
const QuantitySpec& quantity_spec(std::string_view name);
bool is_known_quantity(std::string_view name);

struct Aggregate {
  std::string quantity;
  std::string tag;
  double tolerance = 0.0;
  std::size_t count = 0;
  double min_slack = 0.0;
  bool passed = true;
};

/// One row per quantity in first-appearance order.
std::vector<Aggregate> aggregate(const std::vector<Record>& records,
                                 const std::map<std::string, double>& tolerance_overrides = {});
bool all_passed(const std::vector<Aggregate>& aggregates);

/// Per-grid athermality trace (sidecar table).
struct GridRow {
  int trial = 0;
  int dim = 0;
  double time = 0.0;
  double athermality = 0.0;
  double entropy = 0.0;
  double energy = 0.0;
  double bound_so_far = 0.0;
};

std::string format_number(double x);
std::string csv_header();
std::string format_csv(const std::vector<Record>& records);
std::string format_json(const std::string& config_json, const std::vector<Record>& records,
                        const std::vector<Aggregate>& aggregates);
std::string format_grid_csv(const std::vector<GridRow>& rows);

/// Writes atomically enough for a CLI: truncate then write; IoError on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace qsl::cli
