#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "qsl/cli/config.hpp"
#include "qsl/cli/report.hpp"
#include "qsl/cli/scenarios.hpp"
#include "qsl/cli/verify.hpp"

using namespace qsl;
using namespace qsl::cli;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qsl-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string error_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

int run_qsl(const std::string& args) {
  const std::string cmd = std::string(QSL_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(ParseConfig, MinimalSpeedConfigGetsDefaults) {
  const RunConfig c = parse_config(R"({"scenario": "speed", "dim": 2, "seed": 1})");
  EXPECT_EQ(c.scenario, "speed");
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.dims, std::vector<int>{2});
  EXPECT_EQ(c.ensemble, 100);
  EXPECT_EQ(c.steps, 1000);
  EXPECT_EQ(c.output.format, "csv");
  EXPECT_EQ(c.search.restarts, 20);
  EXPECT_EQ(c.protocol.family, "random");
  EXPECT_FALSE(c.workers.has_value());
}

TEST(ParseConfig, UnknownKeyIsNamed) {
  const std::string msg = error_message([] { parse_config(R"({"scenario": "speed", "seed": 1, "foo": 3})"); });
  EXPECT_NE(msg.find("foo"), std::string::npos) << msg;
  EXPECT_EQ(oracle::error_code_of([] { parse_config(R"({"scenario": "speed", "seed": 1, "foo": 3})"); }),
            ErrorCode::ParseError);
  const std::string nested =
      error_message([] { parse_config(R"({"scenario": "speed", "seed": 1, "search": {"bar": 1}})"); });
  EXPECT_NE(nested.find("bar"), std::string::npos) << nested;
}

TEST(ParseConfig, ErrorKinds) {
  EXPECT_EQ(oracle::error_code_of([] { parse_config(R"({"scenario": "nope", "seed": 1})"); }),
            ErrorCode::UnknownScenario);
  EXPECT_EQ(oracle::error_code_of([] { parse_config(R"({"scenario": "speed"})"); }), ErrorCode::MissingSeed);
  EXPECT_EQ(oracle::error_code_of([] { parse_config("{\"scenario\": \"speed\",\n \"seed\": }"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(oracle::error_code_of([] { parse_config(R"({"scenario": "speed", "seed": 1, "dims": [1]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(oracle::error_code_of([] { parse_config(R"({"scenario": "speed", "seed": -4})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(oracle::error_code_of([] { parse_config(R"({"scenario": "speed", "seed": 1, "beta": 1})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(
      oracle::error_code_of([] { parse_config(R"({"scenario": "speed", "seed": 1, "tolerances": {"nothing": 1}})"); }),
      ErrorCode::ParseError);
  // Syntax errors carry a line number.
  const std::string msg = error_message([] { parse_config("{\"scenario\": \"speed\",\n\n \"seed\": ]}"); });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(ParseConfig, ComplexMatricesAsReImPairs) {
  const RunConfig c = parse_config(R"({"scenario": "qsl-time", "seed": 3, "dims": [2],
    "protocol": {"family": "constant", "hamiltonian": [[[0,0],[0,-1]],[[0,1],[0,0]]]}})");
  ASSERT_TRUE(c.protocol.hamiltonian.has_value());
  EXPECT_LT(oracle::max_abs(*c.protocol.hamiltonian - pauli_y()), 1e-15);
  const auto schedule = c.protocol.schedule(2.0);
  ASSERT_TRUE(schedule.has_value());
  EXPECT_DOUBLE_EQ(schedule->duration(), 2.0);
  EXPECT_EQ(oracle::error_code_of([] {
              parse_config(R"({"scenario": "qsl-time", "seed": 3, "dims": [3],
                "protocol": {"family": "constant", "hamiltonian": [[[0,0],[1,0]],[[1,0],[0,0]]]}})");
            }),
            ErrorCode::ParseError);
}

TEST(ParseConfig, AthermalityRoundTrip) {
  const std::string doc = R"({"scenario": "athermality", "seed": 9, "dim": 2, "beta": 1, "duration": 1,
    "system_hamiltonian": [[[0,0],[0,0]],[[0,0],[1,0]]],
    "protocol": {"family": "constant", "hamiltonian":
      [[[0,0],[0,0],[0,0],[1,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[1,0],[0,0],[0,0],[0,0]]]}})";
  const RunConfig parsed = parse_config(doc);
  const std::string normalized = serialize_config(parsed);
  EXPECT_EQ(serialize_config(parse_config(normalized)), normalized);
  // Normalization fills every field and keeps the values given.
  const nlohmann::json j = nlohmann::json::parse(normalized);
  EXPECT_EQ(j.at("beta").get<double>(), 1.0);
  EXPECT_EQ(j.at("duration").get<double>(), 1.0);
  EXPECT_EQ(j.at("ensemble").get<int>(), 100);
  EXPECT_TRUE(j.contains("search"));
  EXPECT_TRUE(j.contains("output"));
}

TEST(Seeds, TrialSeedsAreReproducibleInIsolation) {
  EXPECT_EQ(trial_seed(1, "holder", 3, 7), trial_seed(1, "holder", 3, 7));
  EXPECT_NE(trial_seed(1, "holder", 3, 7), trial_seed(1, "holder", 3, 8));
  EXPECT_NE(trial_seed(1, "holder", 3, 7), trial_seed(1, "speed", 3, 7));
  // A single trial recomputed alone matches its counterpart in a batch.
  const TrialOutput alone = holder_trial("bounds", 11, 4, 3, std::nullopt);
  const auto batch = run_indexed(6, 2, [](int i) { return holder_trial("bounds", 11, i, 3, std::nullopt); });
  ASSERT_EQ(alone.records.size(), batch[4].records.size());
  for (std::size_t i = 0; i < alone.records.size(); ++i) EXPECT_EQ(alone.records[i].value, batch[4].records[i].value);
}

TEST(RunIndexed, AnnotatesLowestFailingTrial) {
  const std::string msg = error_message([] {
    run_indexed(8, 3, [](int i) -> TrialOutput {
      if (i == 5 || i == 2) throw Error(ErrorCode::InvalidState, "boom " + std::to_string(i));
      return {};
    });
  });
  EXPECT_NE(msg.find("trial 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("boom 2"), std::string::npos) << msg;
}

TEST(Report, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(std::stod(format_number(M_PI)), M_PI);
}

TEST(Report, EmptyEnsembleGivesHeaderOnlyCsv) {
  const std::string csv = format_csv({});
  EXPECT_EQ(csv, csv_header());
  EXPECT_EQ(csv, "scenario,trial,dim,quantity,value,bound,slack,eq_tag\n");
}

TEST(Report, AggregationUsesToleranceAndOverrides) {
  std::vector<Record> recs{{"bounds", 0, 2, "holder_p1", 1.0, 1.0, -5e-9, "Eq4"},
                           {"bounds", 1, 2, "holder_p1", 1.0, 1.0, 0.2, "Eq4"},
                           {"bounds", 0, 2, "fisher", 1.0, 1.0, -1e-6, "Eq2"}};
  const auto agg = aggregate(recs);
  ASSERT_EQ(agg.size(), 2u);
  const auto& holder = agg[0].quantity == "holder_p1" ? agg[0] : agg[1];
  const auto& fisher = agg[0].quantity == "fisher" ? agg[0] : agg[1];
  EXPECT_TRUE(holder.passed);
  EXPECT_EQ(holder.count, 2u);
  EXPECT_EQ(holder.min_slack, -5e-9);
  EXPECT_FALSE(fisher.passed);
  EXPECT_FALSE(all_passed(agg));
  EXPECT_TRUE(all_passed(aggregate(recs, {{"fisher", 1e-5}})));
  EXPECT_FALSE(all_passed(aggregate(recs, {{"holder_p1", 1e-9}})));
  recs[0].slack = std::nan("");
  EXPECT_FALSE(all_passed(aggregate(recs, {{"fisher", 1e-5}})));
}

TEST(Report, OneTrialGivesOneRowPerRecord) {
  RunConfig c = parse_config(R"({"scenario": "bounds", "seed": 1, "dims": [3], "ensemble": 1})");
  const RunReport r = run_scenario(c, 1);
  ASSERT_FALSE(r.records.empty());
  const std::string csv = format_csv(r.records);
  EXPECT_EQ(count_lines(csv), r.records.size() + 1);
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.trial, 0);
    EXPECT_EQ(rec.eq_tag, std::string(quantity_spec(rec.quantity).tag));
  }
}

TEST(Report, CsvAndJsonAgree) {
  RunConfig c = parse_config(R"({"scenario": "kd-verify", "seed": 2, "dims": [2, 3], "ensemble": 3,
                                 "search": {"trials": 1, "restarts": 2, "iterations": 50}})");
  const RunReport r = run_scenario(c, 1);
  const fs::path dir = fresh_dir("formats");
  emit_report(r, dir.string(), "a", "csv");
  emit_report(r, dir.string(), "a", "json");
  const std::string csv = read_file(dir / "a.csv");
  const nlohmann::json j = nlohmann::json::parse(read_file(dir / "a.json"));
  const auto& recs = j.at("records");
  ASSERT_EQ(recs.size() + 1, count_lines(csv));
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  for (const auto& rec : recs) {
    std::getline(lines, line);
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_EQ(cells[0], rec.at("scenario").get<std::string>());
    EXPECT_EQ(std::stoi(cells[1]), rec.at("trial").get<int>());
    EXPECT_EQ(cells[3], rec.at("quantity").get<std::string>());
    EXPECT_EQ(std::stod(cells[4]), rec.at("value").get<double>());
    EXPECT_EQ(std::stod(cells[6]), rec.at("slack").get<double>());
    EXPECT_EQ(cells[7], rec.at("eq_tag").get<std::string>());
  }
  EXPECT_EQ(j.at("passed").get<bool>(), r.passed);
  EXPECT_TRUE(fs::exists(dir / "a.meta.json"));
}

TEST(Report, WriteFailureIsIoError) {
  EXPECT_EQ(oracle::error_code_of([] { write_text("/proc/definitely/not/here.csv", "x"); }), ErrorCode::IoError);
}

TEST(RunScenario, BoundsDim2Ensemble100Passes) {
  const RunReport r = run_scenario(parse_config(R"({"scenario": "bounds", "seed": 1, "dim": 2, "ensemble": 100})"), 2);
  EXPECT_TRUE(r.passed);
  for (const auto& a : r.aggregates) {
    if (a.tag == "Eq4" || a.tag == "Eq6" || a.tag == "Eq8") EXPECT_GE(a.min_slack, -1e-8) << a.quantity;
  }
}

TEST(RunScenario, QubitComplementarityIdentity) {
  const RunReport r =
      run_scenario(parse_config(R"({"scenario": "qubit-complementarity", "seed": 5, "ensemble": 1000})"), 2);
  EXPECT_TRUE(r.passed);
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto& rec : r.records) {
    if (rec.quantity != "complementarity") continue;
    worst = std::max(worst, std::abs(rec.value - rec.bound));
    ++n;
  }
  EXPECT_GE(n, 1000u);
  EXPECT_LT(worst, 1e-10);
}

TEST(RunScenario, DeterministicAcrossWorkerCounts) {
  const RunConfig c = parse_config(R"({"scenario": "speed", "seed": 17, "dims": [2, 4], "ensemble": 12})");
  const std::string one = format_csv(run_scenario(c, 1).records);
  EXPECT_EQ(one, format_csv(run_scenario(c, 1).records));
  EXPECT_EQ(one, format_csv(run_scenario(c, 3).records));
}

TEST(RunScenario, EveryScenarioRunsSmall) {
  for (const auto& s : scenario_catalog()) {
    std::string doc = R"({"scenario": ")" + std::string(s.name) +
                      R"(", "seed": 4, "ensemble": 2, "steps": 100, "search": {"restarts": 2, "iterations": 100, "trials": 1}})";
    const RunReport r = run_scenario(parse_config(doc), 1);
    EXPECT_FALSE(r.records.empty()) << s.name;
    for (const auto& rec : r.records) EXPECT_TRUE(is_known_quantity(rec.quantity)) << rec.quantity;
  }
}

TEST(ResolveWorkers, FlagThenEnvThenOne) {
  ::unsetenv("QSL_WORKERS");
  EXPECT_EQ(resolve_workers(std::nullopt), 1);
  ::setenv("QSL_WORKERS", "3", 1);
  EXPECT_EQ(resolve_workers(std::nullopt), 3);
  EXPECT_EQ(resolve_workers(2), 2);
  ::unsetenv("QSL_WORKERS");
}

TEST(Verify, SummaryLineNamesCriterionAndVerdict) {
  const CriterionResult r = run_criterion(5);
  EXPECT_TRUE(r.passed);
  const std::string line = summary_line(r);
  EXPECT_NE(line.find("5"), std::string::npos);
  EXPECT_NE(line.find("PASS"), std::string::npos) << line;
  EXPECT_EQ(criterion_count(), 9);
}

TEST(QslBinary, ExitCodes) {
  const fs::path dir = fresh_dir("binary");
  std::ofstream(dir / "good.json") << R"({"scenario": "qubit-complementarity", "seed": 1, "ensemble": 5})";
  std::ofstream(dir / "bad.json") << R"({"scenario": "qubit-complementarity", "seed": 1, "foo": 1})";
  std::ofstream(dir / "strict.json")
      << R"({"scenario": "kd-verify", "seed": 1, "dims": [3], "ensemble": 2,
            "search": {"trials": 1, "restarts": 1, "iterations": 5}, "tolerances": {"kd_search_gap": 0}})";
  const std::string out = " --out " + (dir / "out").string();
  EXPECT_EQ(run_qsl("run " + (dir / "good.json").string() + out), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.csv"));
  EXPECT_EQ(run_qsl("run " + (dir / "good.json").string() + out + " --format json"), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.json"));
  EXPECT_EQ(run_qsl("run " + (dir / "bad.json").string() + out), 2);
  EXPECT_EQ(run_qsl("run " + (dir / "missing.json").string() + out), 2);
  EXPECT_EQ(run_qsl("run " + (dir / "strict.json").string() + out), 1);
  EXPECT_EQ(run_qsl("bogus-subcommand"), 2);
  EXPECT_EQ(run_qsl("scenarios"), 0);
}
