#include "qsl/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "qsl/error.hpp"

namespace qsl::cli {

const std::vector<QuantitySpec>& quantity_catalog() {
  static const std::vector<QuantitySpec> catalog{
      {"speed_fd", "Eq1", 1e-6, "central-difference speed vs commutator speed, relative (absolute/1e-3 below v = 1e-3)"},
      {"speed_surprisal", "Eq2", 1e-6, "surprisal-weighted difference speed vs plain difference speed, same scaling"},
      {"holder_p1", "Eq4", 1e-8, "v <= ||H||_1 U^inf"},
      {"holder_p2", "Eq4", 1e-8, "v <= ||H||_2 U^2"},
      {"holder_pinf", "Eq6", 1e-8, "v <= ||H||_inf U^1"},
      {"holder_saturation", "Eq6", 1e-9, "v = ||H||_inf U for |y+>, sigma_z, X basis"},
      {"fisher", "Eq2", 1e-8, "v <= sqrt(F)/2"},
      {"entropy_bound", "Eq8", 1e-9, "U <= S"},
      {"entropy_equality", "Eq8", 1e-9, "U = S for pure states and rank-1 PVMs"},
      {"stddev", "EqA4", 1e-8, "v <= ||H_SE||_inf sum_k Delta_k"},
      {"stddev_entropy", "EqA5", 1e-8, "v <= ||H_SE||_inf S for projective measurements"},
      {"stddev_fd", "EqA2", 1e-6, "reduced-dynamics difference speed vs purification speed, relative"},
      {"projective_spread", "EqA5", 1e-10, "sum_k Delta_k = S for projective measurements"},
      {"pure_commutator_stddev", "EqA3", 1e-9, "||[M, psi psi]||_1 / 2 = Delta_M on the purification"},
      {"kd_route", "EqB2", 1e-10, "eigenbasis nonreality = ||[M, rho]||_1 / 2 summed over outcomes"},
      {"kd_feedback", "EqB2", 1e-10, "nonreality of the KD table in the optimal basis = exact supremum"},
      {"kd_marginal", "Eq7", 1e-9, "KD marginal over the basis = Born probabilities"},
      {"kd_search_upper", "EqB1", 1e-12, "stochastic search <= exact supremum"},
      {"kd_search_gap", "EqB1", 1e-3, "stochastic search reaches the exact supremum"},
      {"complementarity", "EqC6", 1e-10, "vX^2 + vY^2 + vZ^2 = 2|r|^2"},
      {"optimal_speed", "EqC4", 1e-9, "speed of the optimal generator = l1 coherence"},
      {"generator_argmax", "EqC3", 1e-12, "random Pauli generators never beat the optimal one"},
      {"witness_speed", "Eq10", 1e-8, "lifted local speed <= ||H||_inf U_Pi"},
      {"q_nonnegative", "Eq12", 1e-9, "Q >= 0"},
      {"q_closed_form", "Eq13", 1e-3, "searched Q = closed form on pure states"},
      {"q_zero", "Eq12", 1e-6, "Q = 0 on product and classical-quantum states"},
      {"q_local_unitary", "Eq12", 2e-3, "Q invariant under local unitaries"},
      {"qsl_time", "Eq14", 1e-6, "tau >= minimum-time bound"},
      {"qsl_time_analytic", "Eq14", 1e-3, "bound = sqrt2/2 on the sigma_z, |+>, X-basis run over [0, pi/4]"},
      {"helstrom_numerator", "Eq14", 1e-9, "Helstrom variational distance = ||rho(tau) - rho(0)||_1"},
      {"athermality_bound", "Eq17", 1e-6, "tau >= A(tau) / sqrt(<||H||^2> <S^2>)"},
      {"athermality_uncertainty_form", "Eq14", 1e-6, "tau >= same run through the U-based time bound"},
      {"athermality_form_order", "Eq17", 1e-9, "S-based bound <= U-based bound"},
      {"uncertainty_entropy_pointwise", "Eq8", 1e-9, "max over the grid of U - S <= 0"},
      {"gibbs_initial", "Eq16", 1e-9, "initial local populations = Gibbs weights"},
      {"reverse_bound", "Eq17", 1e-6, "tau >= bound for the time-reversed run"},
  };
  return catalog;
}

const QuantitySpec& quantity_spec(std::string_view name) {
  for (const auto& q : quantity_catalog()) {
    if (q.name == name) return q;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown report quantity '" + std::string(name) + "'");
}

bool is_known_quantity(std::string_view name) {
  return std::any_of(quantity_catalog().begin(), quantity_catalog().end(),
                     [&](const QuantitySpec& q) { return q.name == name; });
}

std::vector<Aggregate> aggregate(const std::vector<Record>& records, const std::map<std::string, double>& overrides) {
  std::vector<Aggregate> out;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Aggregate& a) { return a.quantity == r.quantity; });
    if (it == out.end()) {
      const auto& spec = quantity_spec(r.quantity);
      const auto ov = overrides.find(r.quantity);
      out.push_back(Aggregate{r.quantity, std::string(spec.tag), ov != overrides.end() ? ov->second : spec.tolerance, 0,
                              std::numeric_limits<double>::infinity(), true});
      it = std::prev(out.end());
    }
    ++it->count;
    // NaN slack fails.
    if (!(r.slack >= it->min_slack)) it->min_slack = r.slack;
    if (!(r.slack >= -it->tolerance)) it->passed = false;
  }
  return out;
}

bool all_passed(const std::vector<Aggregate>& aggregates) {
  return std::all_of(aggregates.begin(), aggregates.end(), [](const Aggregate& a) { return a.passed; });
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string json_number(double x) { return std::isfinite(x) ? format_number(x) : "null"; }

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string csv_header() { return "scenario,trial,dim,quantity,value,bound,slack,eq_tag\n"; }

std::string format_csv(const std::vector<Record>& records) {
  std::string out = csv_header();
  for (const auto& r : records) {
    out += r.scenario + ',' + std::to_string(r.trial) + ',' + std::to_string(r.dim) + ',' + r.quantity + ',' +
           format_number(r.value) + ',' + format_number(r.bound) + ',' + format_number(r.slack) + ',' + r.eq_tag + '\n';
  }
  return out;
}

std::string format_json(const std::string& config_json, const std::vector<Record>& records,
                        const std::vector<Aggregate>& aggregates) {
  std::string out = "{\n  \"config\": " + config_json + ",\n  \"records\": [";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out += (i ? ",\n    " : "\n    ");
    out += "{\"scenario\": " + json_string(r.scenario) + ", \"trial\": " + std::to_string(r.trial) +
           ", \"dim\": " + std::to_string(r.dim) + ", \"quantity\": " + json_string(r.quantity) +
           ", \"value\": " + json_number(r.value) + ", \"bound\": " + json_number(r.bound) +
           ", \"slack\": " + json_number(r.slack) + ", \"eq_tag\": " + json_string(r.eq_tag) + "}";
  }
  out += records.empty() ? "],\n  \"aggregates\": [" : "\n  ],\n  \"aggregates\": [";
  for (std::size_t i = 0; i < aggregates.size(); ++i) {
    const auto& a = aggregates[i];
    out += (i ? ",\n    " : "\n    ");
    out += "{\"quantity\": " + json_string(a.quantity) + ", \"eq_tag\": " + json_string(a.tag) +
           ", \"tolerance\": " + json_number(a.tolerance) + ", \"count\": " + std::to_string(a.count) +
           ", \"min_slack\": " + json_number(a.min_slack) + ", \"passed\": " + (a.passed ? "true" : "false") + "}";
  }
  out += aggregates.empty() ? "],\n" : "\n  ],\n";
  out += std::string("  \"passed\": ") + (all_passed(aggregates) ? "true" : "false") + "\n}\n";
  return out;
}

std::string format_grid_csv(const std::vector<GridRow>& rows) {
  std::string out = "trial,dim,t,athermality,entropy,energy_norm,bound_so_far\n";
  for (const auto& g : rows) {
    out += std::to_string(g.trial) + ',' + std::to_string(g.dim) + ',' + format_number(g.time) + ',' +
           format_number(g.athermality) + ',' + format_number(g.entropy) + ',' + format_number(g.energy) + ',' +
           format_number(g.bound_so_far) + '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

}  // namespace qsl::cli
