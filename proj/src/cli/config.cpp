#include "qsl/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qsl/cli/report.hpp"

namespace qsl::cli {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog{
      {"speed", "finite-difference speed vs commutator speed on random states, generators and POVMs"},
      {"bounds", "Hoelder (p = 1, 2, inf), Fisher, entropy and purification bounds on random ensembles"},
      {"kd-verify", "KD nonreality: exact eigenbasis route, trace-norm identity and stochastic-search oracle"},
      {"qubit-complementarity", "qubit optimal generator, l1 coherence and three-basis complementarity"},
      {"correlation-witness", "local-measurement speed witness and the correlation measure Q on bipartite states"},
      {"athermality", "thermofield double driven by a joint schedule; athermality and its minimum-time bound"},
      {"qsl-time", "minimum-time bound along sampled trajectories, with the Helstrom measurement check"},
  };
  return catalog;
}

bool is_known_scenario(std::string_view name) {
  const auto& c = scenario_catalog();
  return std::any_of(c.begin(), c.end(), [&](const ScenarioInfo& s) { return s.name == name; });
}

std::optional<HamiltonianSchedule> ProtocolSettings::schedule(double duration) const {
  if (family == "constant") return HamiltonianSchedule::constant(*hamiltonian, duration);
  if (family == "linear-ramp") return HamiltonianSchedule::linear_ramp(*start, *end, duration);
  if (family == "piecewise") return HamiltonianSchedule::piecewise(segments);
  return std::nullopt;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    std::ostringstream msg;
    msg << "config";
    const auto leaf = key.substr(key.rfind('.') == std::string::npos ? 0 : key.rfind('.') + 1);
    if (const int line = line_of_key(leaf); line > 0) msg << " line " << line;
    msg << ", key '" << key << "': " << why;
    throw Error(ErrorCode::ParseError, msg.str());
  }

  int line_of_offset(std::size_t offset) const {
    offset = std::min(offset, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
  }

  int line_of_key(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"");
    return pos == std::string_view::npos ? 0 : line_of_offset(pos);
  }

  void only_keys(const Json& obj, const std::string& prefix, std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(prefix, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        fail(prefix.empty() ? k : prefix + "." + k, "unknown key '" + k + "'");
      }
    }
  }

  long long integer(const Json& v, const std::string& key, long long lo, long long hi) const {
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < lo || x > hi) fail(key, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  double real(const Json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "expected a finite number");
    return x;
  }

  std::string string(const Json& v, const std::string& key) const {
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  ComplexMatrix matrix(const Json& v, const std::string& key) const {
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of rows");
    const auto rows = static_cast<Index>(v.size());
    Index cols = -1;
    ComplexMatrix m;
    for (Index i = 0; i < rows; ++i) {
      const Json& row = v[static_cast<std::size_t>(i)];
      if (!row.is_array() || row.empty()) fail(key, "row " + std::to_string(i) + " is not a non-empty array");
      if (cols < 0) {
        cols = static_cast<Index>(row.size());
        m.resize(rows, cols);
      } else if (static_cast<Index>(row.size()) != cols) {
        fail(key, "ragged rows");
      }
      for (Index j = 0; j < cols; ++j) {
        const Json& z = row[static_cast<std::size_t>(j)];
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
          fail(key, "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") is not a [re, im] pair");
        }
        m(i, j) = Complex(z[0].get<double>(), z[1].get<double>());
      }
    }
    if (rows != cols) fail(key, "matrix must be square");
    try {
      require_finite(m, key.c_str());
      require_hermitian(m, kHermiticityTol, key.c_str());
    } catch (const Error& e) {
      fail(key, e.what());
    }
    return m;
  }

 private:
  std::string_view text_;
};

Json matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

bool uses_protocol(std::string_view scenario) {
  return scenario == "speed" || scenario == "bounds" || scenario == "qsl-time" || scenario == "athermality";
}

void validate(const RunConfig& c, const Parser& p) {
  const bool thermal = c.scenario == "athermality";
  for (int d : c.dims) {
    const int total = thermal ? d * d : d;
    if (d < 2 || total > 16) {
      p.fail("dims", thermal ? "system dimension must be >= 2 with dim^2 <= 16" : "dimension must be in [2, 16]");
    }
  }
  if (c.scenario == "correlation-witness") {
    const int total = c.subsystems[0] * c.subsystems[1];
    if (c.subsystems[0] < 2 || c.subsystems[1] < 2 || total > 16) {
      p.fail("subsystems", "each factor must be >= 2 and the product <= 16");
    }
  }
  if (c.protocol.family != "random") {
    if (!uses_protocol(c.scenario)) p.fail("protocol.family", "scenario '" + c.scenario + "' only supports 'random'");
    if (c.dims.size() != 1) p.fail("dims", "a fixed protocol needs exactly one dimension");
    const Index want = thermal ? c.dims[0] * c.dims[0] : c.dims[0];
    auto check = [&](const ComplexMatrix& m, const std::string& key) {
      if (m.rows() != want) p.fail(key, "matrix dimension " + std::to_string(m.rows()) + ", expected " + std::to_string(want));
    };
    if (c.protocol.family == "constant") {
      if (!c.protocol.hamiltonian) p.fail("protocol.hamiltonian", "required for the constant family");
      check(*c.protocol.hamiltonian, "protocol.hamiltonian");
    } else if (c.protocol.family == "linear-ramp") {
      if (!c.protocol.start || !c.protocol.end) p.fail("protocol.start", "linear-ramp needs start and end");
      check(*c.protocol.start, "protocol.start");
      check(*c.protocol.end, "protocol.end");
    } else {
      if (c.protocol.segments.empty()) p.fail("protocol.segments", "piecewise needs at least one segment");
      for (const auto& s : c.protocol.segments) check(s.h, "protocol.segments");
    }
  }
  if (c.system_hamiltonian) {
    if (!thermal) p.fail("system_hamiltonian", "only used by the athermality scenario");
    if (c.dims.size() != 1 || c.system_hamiltonian->rows() != c.dims[0]) {
      p.fail("system_hamiltonian", "dimension must match the single system dimension");
    }
  }
  if (c.beta && !thermal) p.fail("beta", "only used by the athermality scenario");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  const Parser p(text);
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "config line " + std::to_string(p.line_of_offset(e.byte == 0 ? 0 : e.byte - 1)) +
                                           ": malformed JSON (" + e.what() + ")");
  }
  p.only_keys(doc, "", {"scenario", "seed", "dim", "dims", "subsystems", "ensemble", "steps", "duration", "search",
                        "output", "workers", "tolerances", "protocol", "beta", "system_hamiltonian"});

  RunConfig c;
  if (!doc.contains("scenario")) p.fail("scenario", "missing");
  c.scenario = p.string(doc["scenario"], "scenario");
  if (!is_known_scenario(c.scenario)) {
    throw Error(ErrorCode::UnknownScenario, "config line " + std::to_string(p.line_of_key("scenario")) +
                                                ": unknown scenario '" + c.scenario + "'");
  }
  if (!doc.contains("seed")) throw Error(ErrorCode::MissingSeed, "config: 'seed' is required (runs are never unseeded)");
  if (!doc["seed"].is_number_unsigned()) p.fail("seed", "expected a non-negative integer");
  c.seed = doc["seed"].get<std::uint64_t>();

  if (doc.contains("dim") && doc.contains("dims")) p.fail("dims", "give either 'dim' or 'dims'");
  if (doc.contains("dim")) c.dims = {static_cast<int>(p.integer(doc["dim"], "dim", 1, 16))};
  if (doc.contains("dims")) {
    if (!doc["dims"].is_array() || doc["dims"].empty()) p.fail("dims", "expected a non-empty array");
    c.dims.clear();
    for (const auto& d : doc["dims"]) c.dims.push_back(static_cast<int>(p.integer(d, "dims", 1, 16)));
  }
  if (doc.contains("subsystems")) {
    const Json& s = doc["subsystems"];
    if (!s.is_array() || s.size() != 2) p.fail("subsystems", "expected [dim_a, dim_b]");
    c.subsystems = {static_cast<int>(p.integer(s[0], "subsystems", 1, 16)), static_cast<int>(p.integer(s[1], "subsystems", 1, 16))};
  }
  if (doc.contains("ensemble")) c.ensemble = static_cast<int>(p.integer(doc["ensemble"], "ensemble", 0, 10'000'000));
  if (doc.contains("steps")) c.steps = static_cast<int>(p.integer(doc["steps"], "steps", 1, 10'000'000));
  if (doc.contains("duration")) {
    c.duration = p.real(doc["duration"], "duration");
    if (!(c.duration > 0.0)) p.fail("duration", "must be positive");
  }
  if (doc.contains("workers")) c.workers = static_cast<int>(p.integer(doc["workers"], "workers", 1, 1024));
  if (doc.contains("beta")) {
    c.beta = p.real(doc["beta"], "beta");
    if (*c.beta < 0.0) p.fail("beta", "inverse temperature must be >= 0");
  }
  if (doc.contains("system_hamiltonian")) c.system_hamiltonian = p.matrix(doc["system_hamiltonian"], "system_hamiltonian");

  if (doc.contains("search")) {
    const Json& s = doc["search"];
    p.only_keys(s, "search", {"restarts", "iterations", "initial_step", "final_step", "trials"});
    if (s.contains("restarts")) c.search.restarts = static_cast<int>(p.integer(s["restarts"], "search.restarts", 1, 100000));
    if (s.contains("iterations")) c.search.iterations = static_cast<int>(p.integer(s["iterations"], "search.iterations", 1, 10'000'000));
    if (s.contains("initial_step")) c.search.initial_step = p.real(s["initial_step"], "search.initial_step");
    if (s.contains("final_step")) c.search.final_step = p.real(s["final_step"], "search.final_step");
    if (s.contains("trials")) c.search.trials = static_cast<int>(p.integer(s["trials"], "search.trials", 0, 10'000'000));
    if (!(c.search.initial_step > 0.0) || !(c.search.final_step > 0.0)) p.fail("search", "step sizes must be positive");
  }
  if (doc.contains("output")) {
    const Json& o = doc["output"];
    p.only_keys(o, "output", {"dir", "basename", "format"});
    if (o.contains("dir")) c.output.dir = p.string(o["dir"], "output.dir");
    if (o.contains("basename")) c.output.basename = p.string(o["basename"], "output.basename");
    if (o.contains("format")) c.output.format = p.string(o["format"], "output.format");
    if (c.output.format != "csv" && c.output.format != "json") p.fail("output.format", "expected 'csv' or 'json'");
    if (c.output.basename.empty()) p.fail("output.basename", "must not be empty");
  }
  if (doc.contains("tolerances")) {
    const Json& t = doc["tolerances"];
    if (!t.is_object()) p.fail("tolerances", "expected an object keyed by quantity name");
    for (const auto& [k, v] : t.items()) {
      if (!is_known_quantity(k)) p.fail("tolerances." + k, "unknown quantity '" + k + "'");
      const double tol = p.real(v, "tolerances." + k);
      if (tol < 0.0) p.fail("tolerances." + k, "tolerance must be >= 0");
      c.tolerances[k] = tol;
    }
  }
  if (doc.contains("protocol")) {
    const Json& pr = doc["protocol"];
    p.only_keys(pr, "protocol", {"family", "hamiltonian", "start", "end", "segments"});
    if (pr.contains("family")) c.protocol.family = p.string(pr["family"], "protocol.family");
    const auto& fam = c.protocol.family;
    if (fam != "random" && fam != "constant" && fam != "linear-ramp" && fam != "piecewise") {
      p.fail("protocol.family", "expected random, constant, linear-ramp or piecewise");
    }
    if (pr.contains("hamiltonian")) c.protocol.hamiltonian = p.matrix(pr["hamiltonian"], "protocol.hamiltonian");
    if (pr.contains("start")) c.protocol.start = p.matrix(pr["start"], "protocol.start");
    if (pr.contains("end")) c.protocol.end = p.matrix(pr["end"], "protocol.end");
    if (pr.contains("segments")) {
      if (!pr["segments"].is_array()) p.fail("protocol.segments", "expected an array");
      for (const auto& seg : pr["segments"]) {
        p.only_keys(seg, "protocol.segments", {"hamiltonian", "duration"});
        if (!seg.contains("hamiltonian") || !seg.contains("duration")) p.fail("protocol.segments", "segment needs hamiltonian and duration");
        const double dur = p.real(seg["duration"], "protocol.segments.duration");
        if (!(dur > 0.0)) p.fail("protocol.segments.duration", "must be positive");
        c.protocol.segments.push_back({p.matrix(seg["hamiltonian"], "protocol.segments.hamiltonian"), dur});
      }
    }
  }
  validate(c, p);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  OrderedJson doc;
  doc["scenario"] = c.scenario;
  doc["seed"] = c.seed;
  doc["dims"] = c.dims;
  doc["subsystems"] = {c.subsystems[0], c.subsystems[1]};
  doc["ensemble"] = c.ensemble;
  doc["steps"] = c.steps;
  doc["duration"] = c.duration;
  doc["search"] = {{"restarts", c.search.restarts},
                   {"iterations", c.search.iterations},
                   {"initial_step", c.search.initial_step},
                   {"final_step", c.search.final_step},
                   {"trials", c.search.trials}};
  doc["output"] = {{"dir", c.output.dir}, {"basename", c.output.basename}, {"format", c.output.format}};
  if (c.workers) doc["workers"] = *c.workers;
  doc["tolerances"] = OrderedJson::object();
  for (const auto& [k, v] : c.tolerances) doc["tolerances"][k] = v;
  OrderedJson proto;
  proto["family"] = c.protocol.family;
  if (c.protocol.hamiltonian) proto["hamiltonian"] = matrix_json(*c.protocol.hamiltonian);
  if (c.protocol.start) proto["start"] = matrix_json(*c.protocol.start);
  if (c.protocol.end) proto["end"] = matrix_json(*c.protocol.end);
  if (!c.protocol.segments.empty()) {
    proto["segments"] = OrderedJson::array();
    for (const auto& s : c.protocol.segments) {
      OrderedJson seg;
      seg["hamiltonian"] = matrix_json(s.h);
      seg["duration"] = s.duration;
      proto["segments"].push_back(std::move(seg));
    }
  }
  doc["protocol"] = std::move(proto);
  if (c.beta) doc["beta"] = *c.beta;
  if (c.system_hamiltonian) doc["system_hamiltonian"] = matrix_json(*c.system_hamiltonian);
  return doc.dump(2);
}

}  // namespace qsl::cli
