#include "qsl/cli/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <numbers>
#include <random>

#include "qsl/athermality.hpp"
#include "qsl/correlation.hpp"
#include "qsl/kdq.hpp"
#include "qsl/qubit.hpp"
#include "qsl/speedlimit.hpp"

namespace qsl::cli {

namespace {

constexpr double kFdEpsilon = 1e-5;
constexpr double kRelativeFloor = 1e-3;

Record inequality_record(std::string_view label, int trial, int dim, std::string_view quantity, double value, double bound) {
  const auto& spec = quantity_spec(quantity);
  return Record{std::string(label), trial, dim, std::string(quantity), value, bound, bound - value, std::string(spec.tag)};
}

Record identity_record(std::string_view label, int trial, int dim, std::string_view quantity, double value, double expected) {
  const auto& spec = quantity_spec(quantity);
  return Record{std::string(label), trial, dim, std::string(quantity), value, expected, -std::abs(value - expected),
                std::string(spec.tag)};
}

/// Identity whose slack is measured relative to the reference (absolute below kRelativeFloor).
Record relative_identity(std::string_view label, int trial, int dim, std::string_view quantity, double value,
                         double reference) {
  Record r = identity_record(label, trial, dim, quantity, value, reference);
  r.slack /= std::max(std::abs(reference), kRelativeFloor);
  return r;
}

DensityMatrix random_state(Index d, Rng& rng) {
  std::uniform_int_distribution<Index> rank(1, d);
  return random_density_matrix(d, rank(rng), rng);
}

/// Rank-1 PVM, coarse-grained PVM or general POVM, picked at random.
MeasurementSet random_measurement(Index d, Rng& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  switch (kind(rng)) {
    case 0:
      return random_rank1_pvm(d, rng);
    case 1: {
      const ComplexMatrix u = haar_random_unitary(d, rng);
      std::uniform_int_distribution<Index> cut(1, d - 1);
      const Index c = cut(rng);
      ComplexMatrix p0 = u.leftCols(c) * u.leftCols(c).adjoint();
      ComplexMatrix p1 = identity(d) - p0;
      return MeasurementSet({p0, p1}, MeasurementKind::Pvm);
    }
    default: {
      std::uniform_int_distribution<int> n(2, static_cast<int>(d) + 2);
      return random_povm(d, n(rng), rng);
    }
  }
}

ComplexMatrix generator_at(const std::optional<HamiltonianSchedule>& protocol, double t, Index d, Rng& rng) {
  return protocol ? protocol->evaluate(t) : random_hermitian(d, rng);
}

DensityMatrix random_qubit_state(int trial, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BlochVector b;
  double n2 = 0.0;
  for (double& c : b.r) {
    c = gauss(rng);
    n2 += c * c;
  }
  // Even trials on the sphere (pure), odd trials uniform in the ball.
  const double radius = trial % 2 == 0 ? 1.0 : std::cbrt(unit(rng));
  for (double& c : b.r) c *= radius / std::sqrt(n2);
  return state_from_bloch(b);
}

}  // namespace

std::uint64_t stream_id(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t trial_seed(std::uint64_t master, std::string_view stream, int dim, int trial) {
  return derive_seed(master, stream_id(stream) + static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(trial));
}

TrialOutput speed_trial(std::string_view label, std::uint64_t seed, int trial, int dim,
                        const std::optional<HamiltonianSchedule>& protocol, double duration) {
  Rng rng(seed);
  const Index d = dim;
  const DensityMatrix rho = random_state(d, rng);
  const MeasurementSet meas = random_measurement(d, rng);
  const HamiltonianSchedule schedule = protocol ? *protocol : HamiltonianSchedule::constant(random_hermitian(d, rng), duration);
  // Two steps: the single interior point sits at the middle of the run.
  const Trajectory traj = evolve_trajectory(rho, schedule, 2, meas);
  const double exact = probability_speed_exact(traj.states[1], traj.hamiltonians[1], meas);
  const FiniteDifferenceSpeed fd = probability_speed_fd(traj, 1, kFdEpsilon);
  TrialOutput out;
  out.records.push_back(relative_identity(label, trial, dim, "speed_fd", fd.plain, exact));
  out.records.push_back(relative_identity(label, trial, dim, "speed_surprisal", fd.surprisal, fd.plain));
  return out;
}

TrialOutput holder_trial(std::string_view label, std::uint64_t seed, int trial, int dim,
                         const std::optional<HamiltonianSchedule>& protocol) {
  Rng rng(seed);
  const Index d = dim;
  const DensityMatrix rho = random_state(d, rng);
  const MeasurementSet meas = random_measurement(d, rng);
  std::uniform_real_distribution<double> when(0.0, 1.0);
  const double t = protocol ? when(rng) * protocol->duration() : 0.0;
  const ComplexMatrix h = generator_at(protocol, t, d, rng);
  TrialOutput out;
  const std::pair<NormOrder, const char*> orders[] = {
      {NormOrder::finite(1), "holder_p1"}, {NormOrder::finite(2), "holder_p2"}, {NormOrder::infinity(), "holder_pinf"}};
  for (const auto& [p, name] : orders) {
    const SpeedReport r = holder_bound(rho, h, meas, p);
    out.records.push_back(inequality_record(label, trial, dim, name, r.speed, r.checks.front().bound));
  }
  const SpeedReport f = fisher_speed_bound(rho, h, meas);
  out.records.push_back(inequality_record(label, trial, dim, "fisher", f.speed, f.checks.front().bound));
  return out;
}

TrialOutput entropy_trial(std::string_view label, std::uint64_t seed, int trial, int dim, bool with_pure) {
  Rng rng(seed);
  const Index d = dim;
  const DensityMatrix rho = random_state(d, rng);
  const MeasurementSet meas = random_measurement(d, rng);
  TrialOutput out;
  out.records.push_back(inequality_record(label, trial, dim, "entropy_bound", quantum_uncertainty(rho, meas),
                                   entropy_measure(born_probabilities(rho, meas))));
  if (with_pure) {
    const DensityMatrix pure = random_pure_state(d, rng).density();
    const MeasurementSet basis = random_rank1_pvm(d, rng);
    out.records.push_back(identity_record(label, trial, dim, "entropy_equality", quantum_uncertainty(pure, basis),
                                   entropy_measure(born_probabilities(pure, basis))));
  }
  return out;
}

TrialOutput stddev_trial(std::string_view label, std::uint64_t seed, int trial, int dim) {
  Rng rng(seed);
  const Index d = dim;
  const DensityMatrix rho = random_state(d, rng);
  const MeasurementSet meas = trial % 2 == 0 ? random_rank1_pvm(d, rng) : random_measurement(d, rng);
  const ComplexMatrix joint = random_hermitian(d * d, rng);
  const SpeedReport r = stddev_bound(rho, meas, joint);
  TrialOutput out;
  for (const auto& c : r.checks) {
    if (c.name == "stddev" || c.name == "stddev_entropy") {
      out.records.push_back(inequality_record(label, trial, dim, c.name, c.value, c.bound));
    } else {
      out.records.push_back(identity_record(label, trial, dim, c.name, c.value, c.bound));
    }
  }
  out.records.push_back(relative_identity(label, trial, dim, "stddev_fd", r.reduced_speed_fd, r.speed));
  return out;
}

TrialOutput kd_trial(std::string_view label, std::uint64_t seed, int trial, int dim,
                     const std::optional<SearchBudget>& search) {
  Rng rng(seed);
  const Index d = dim;
  const DensityMatrix rho = random_state(d, rng);
  const MeasurementSet meas = random_measurement(d, rng);
  TrialOutput out;

  double trace_norms = 0.0;
  for (const auto& m : meas.elements()) trace_norms += schatten_norm(commutator(m, rho.matrix()), NormOrder::finite(1));
  out.records.push_back(identity_record(label, trial, dim, "kd_route", uncertainty_from_kd(rho, meas), 0.5 * trace_norms));

  const NonrealityOptimum best = max_nonreality_exact(rho, meas[0]);
  const KDTable table = kd_table(rho, meas, best.basis);
  out.records.push_back(identity_record(label, trial, dim, "kd_feedback", nonreality(table, 0), best.value));

  const Probabilities marginal = table.marginal();
  const Probabilities born = born_probabilities(rho, meas);
  double gap = 0.0;
  for (std::size_t k = 0; k < born.size(); ++k) gap = std::max(gap, std::abs(marginal[k] - born[k]));
  out.records.push_back(identity_record(label, trial, dim, "kd_marginal", gap, 0.0));

  if (search) {
    const NonrealityOptimum found = max_nonreality_search(rho, meas[0], rng, *search);
    out.records.push_back(inequality_record(label, trial, dim, "kd_search_upper", found.value, best.value));
    out.records.push_back(identity_record(label, trial, dim, "kd_search_gap", found.value, best.value));
  }
  return out;
}

TrialOutput qubit_trial(std::string_view label, std::uint64_t seed, int trial) {
  Rng rng(seed);
  const DensityMatrix rho = random_qubit_state(trial, rng);
  const ComplexMatrix u = haar_random_unitary(2, rng);
  const QubitBasis basis(u.col(0), u.col(1));
  TrialOutput out;

  const Complementarity c = mub_complementarity(rho);
  out.records.push_back(identity_record(label, trial, 2, "complementarity", c.sum(), c.twice_r2));

  const OptimalGenerator g = optimal_generator(rho, basis);
  out.records.push_back(identity_record(label, trial, 2, "optimal_speed", g.achieved_speed, l1_coherence(rho, basis)));

  const MeasurementSet pvm = basis.pvm();
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best_random = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = gauss(rng), y = gauss(rng), z = gauss(rng);
    const double n = std::sqrt(x * x + y * y + z * z);
    const ComplexMatrix h = (x * pauli_x() + y * pauli_y() + z * pauli_z()) / n;
    best_random = std::max(best_random, probability_speed_exact(rho, h, pvm));
  }
  out.records.push_back(inequality_record(label, trial, 2, "generator_argmax", best_random, g.achieved_speed));
  return out;
}

TrialOutput correlation_trial(std::string_view label, std::uint64_t seed, int trial, BipartiteDims dims, bool pure,
                              const SearchBudget& budget) {
  Rng rng(seed);
  const Index n = dims.total();
  const int dim = static_cast<int>(n);
  const DensityMatrix rho = pure ? random_pure_state(n, rng).density() : random_density_matrix(n, 2, rng);
  const BipartiteState state(rho, dims);
  TrialOutput out;

  const MeasurementSet local = MeasurementSet::computational(dims.a);
  const ComplexMatrix h = random_hermitian(n, rng);
  const double speed = probability_speed_exact(rho, h, local.lifted(dims.b));
  const double witness = schatten_norm(h, NormOrder::infinity()) * local_uncertainty(state, local);
  out.records.push_back(inequality_record(label, trial, dim, "witness_speed", speed, witness));

  const CorrelationReport q = correlation_Q(state, rng, budget);
  out.records.push_back(inequality_record(label, trial, dim, "q_nonnegative", 0.0, q.value));
  if (q.closed_form) out.records.push_back(identity_record(label, trial, dim, "q_closed_form", q.value, *q.closed_form));
  return out;
}

TrialOutput athermality_trial(std::string_view label, std::uint64_t seed, int trial, int dim,
                              const AthermalityTrialSettings& settings) {
  Rng rng(seed);
  const Index d = dim;
  std::uniform_real_distribution<double> beta_dist(0.0, 3.0);
  const double beta = settings.beta ? *settings.beta : beta_dist(rng);
  const ComplexMatrix h_s = settings.system_hamiltonian ? *settings.system_hamiltonian : random_hermitian(d, rng);
  HamiltonianSchedule schedule = [&] {
    if (settings.joint_schedule) return *settings.joint_schedule;
    const ComplexMatrix h_e = random_hermitian(d, rng);
    const ComplexMatrix uncoupled = kron(h_s, identity(d)) + kron(identity(d), h_e);
    const ComplexMatrix coupling = random_hermitian(d * d, rng);
    return HamiltonianSchedule::linear_ramp(uncoupled, uncoupled + coupling, settings.duration);
  }();

  const AthermalityExperiment exp{h_s, beta, schedule, settings.steps, seed};
  const AthermalityReport r = run_athermality_experiment(exp);
  const double tau = r.times.back() - r.times.front();
  TrialOutput out;
  out.records.push_back(identity_record(label, trial, dim, "gibbs_initial", r.gibbs_gap, 0.0));
  out.records.push_back(inequality_record(label, trial, dim, "athermality_bound", r.bound, tau));
  out.records.push_back(inequality_record(label, trial, dim, "athermality_uncertainty_form", r.uncertainty_form.bound, tau));
  out.records.push_back(inequality_record(label, trial, dim, "athermality_form_order", r.bound, r.uncertainty_form.bound));
  out.records.push_back(inequality_record(label, trial, dim, "uncertainty_entropy_pointwise", r.max_uncertainty_excess, 0.0));

  // Drive back from the final state with the time-reversed schedule.
  const MeasurementSet lifted = MeasurementSet::from_basis(gibbs_ensemble(h_s, beta).spectrum.eigenvectors).lifted(d);
  const Trajectory back = evolve_trajectory(*r.final_state, schedule.reversed(), settings.steps, lifted);
  const ReverseThermalizationReport rev = reverse_thermalization_bound(back, r.gibbs_weights, 1e-6);
  out.records.push_back(inequality_record(label, trial, dim, "reverse_bound", rev.bound.bound, rev.bound.duration));

  if (settings.keep_grid) {
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      out.grid.push_back(GridRow{trial, dim, r.times[i], r.athermality[i], r.entropy[i], r.energy[i], r.bound_so_far[i]});
    }
  }
  return out;
}

TrialOutput qsl_time_trial(std::string_view label, std::uint64_t seed, int trial, int dim,
                           const std::optional<HamiltonianSchedule>& protocol, double duration, int steps) {
  Rng rng(seed);
  const Index d = dim;
  const DensityMatrix rho = random_state(d, rng);
  const MeasurementSet meas = random_measurement(d, rng);
  const HamiltonianSchedule schedule = protocol ? *protocol : HamiltonianSchedule::constant(random_hermitian(d, rng), duration);
  const Trajectory traj = evolve_trajectory(rho, schedule, steps, meas);
  TrialOutput out;
  const TimeBoundReport tb = qsl_time_bound(traj);
  out.records.push_back(inequality_record(label, trial, dim, "qsl_time", tb.bound, tb.duration));

  const DensityMatrix& first = traj.states.front();
  const DensityMatrix& last = traj.states.back();
  const Trajectory helstrom = traj.with_measurement(helstrom_povm(first, last));
  const TimeBoundReport th = qsl_time_bound(helstrom);
  out.records.push_back(inequality_record(label, trial, dim, "qsl_time", th.bound, th.duration));
  out.records.push_back(identity_record(label, trial, dim, "helstrom_numerator", th.variational_distance,
                                 schatten_norm(last.matrix() - first.matrix(), NormOrder::finite(1))));
  return out;
}

namespace {

void append(std::vector<TrialOutput>&& parts, RunReport& report) {
  for (auto& p : parts) {
    for (auto& r : p.records) report.records.push_back(std::move(r));
    for (auto& g : p.grid) report.grid.push_back(g);
  }
}

}  // namespace

RunReport run_scenario(const RunConfig& c, int workers) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = c;
  const std::string& s = c.scenario;
  const auto protocol = c.protocol.schedule(c.duration);
  const SearchBudget budget{c.search.restarts, c.search.iterations, c.search.initial_step, c.search.final_step};

  if (s == "correlation-witness") {
    const BipartiteDims dims{c.subsystems[0], c.subsystems[1]};
    const int dim = static_cast<int>(dims.total());
    append(run_indexed(c.ensemble, workers,
                       [&](int k) {
                         return correlation_trial(s, trial_seed(c.seed, s, dim, k), k, dims, k % 2 == 0, budget);
                       }),
           report);
  } else if (s == "qubit-complementarity") {
    append(run_indexed(c.ensemble, workers, [&](int k) { return qubit_trial(s, trial_seed(c.seed, s, 2, k), k); }),
           report);
  } else {
    for (int dim : c.dims) {
      auto trial = [&](int k) -> TrialOutput {
        const std::uint64_t seed = trial_seed(c.seed, s, dim, k);
        if (s == "speed") return speed_trial(s, seed, k, dim, protocol, c.duration);
        if (s == "bounds") {
          TrialOutput out = holder_trial(s, derive_seed(seed, 1, 0), k, dim, protocol);
          for (auto& r : entropy_trial(s, derive_seed(seed, 2, 0), k, dim, true).records) out.records.push_back(std::move(r));
          for (auto& r : stddev_trial(s, derive_seed(seed, 3, 0), k, dim).records) out.records.push_back(std::move(r));
          return out;
        }
        if (s == "kd-verify") {
          const bool search = k < c.search.trials;
          return kd_trial(s, seed, k, dim, search ? std::optional<SearchBudget>(budget) : std::nullopt);
        }
        if (s == "athermality") {
          AthermalityTrialSettings a;
          a.beta = c.beta;
          a.system_hamiltonian = c.system_hamiltonian;
          a.joint_schedule = protocol;
          a.duration = c.duration;
          a.steps = c.steps;
          return athermality_trial(s, seed, k, dim, a);
        }
        return qsl_time_trial(s, seed, k, dim, protocol, c.duration, c.steps);
      };
      append(run_indexed(c.ensemble, workers, trial), report);
    }
  }
  report.aggregates = aggregate(report.records, c.tolerances);
  report.passed = all_passed(report.aggregates);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<std::string> emit_report(const RunReport& report, const std::string& dir, const std::string& basename,
                                     const std::string& format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output directory '" + dir + "': " + ec.message());
  const std::filesystem::path base = std::filesystem::path(dir) / basename;
  std::vector<std::string> written;

  const std::string config_json = serialize_config(report.config);
  const std::string main_path = base.string() + (format == "json" ? ".json" : ".csv");
  write_text(main_path, format == "json" ? format_json(config_json, report.records, report.aggregates)
                                         : format_csv(report.records));
  written.push_back(main_path);

  if (!report.grid.empty()) {
    const std::string grid_path = base.string() + ".grid.csv";
    write_text(grid_path, format_grid_csv(report.grid));
    written.push_back(grid_path);
  }

  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  const std::string meta = std::string("{\n  \"timestamp\": \"") + stamp + "\",\n  \"wall_seconds\": " +
                           format_number(report.wall_seconds) + ",\n  \"records\": " +
                           std::to_string(report.records.size()) + ",\n  \"passed\": " +
                           (report.passed ? "true" : "false") + "\n}\n";
  const std::string meta_path = base.string() + ".meta.json";
  write_text(meta_path, meta);
  written.push_back(meta_path);
  return written;
}

int resolve_workers(std::optional<int> explicit_workers) {
  if (explicit_workers) return std::max(1, *explicit_workers);
  if (const char* env = std::getenv("QSL_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

}  // namespace qsl::cli
