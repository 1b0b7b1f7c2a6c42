#include "qsl/cli/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "qsl/cli/scenarios.hpp"
#include "qsl/correlation.hpp"
#include "qsl/qubit.hpp"
#include "qsl/speedlimit.hpp"

namespace qsl::cli {

namespace {

Record make_identity(std::string_view label, int trial, int dim, std::string_view quantity, double value,
                     double expected) {
  return Record{std::string(label), trial, dim, std::string(quantity), value, expected, -std::abs(value - expected),
                std::string(quantity_spec(quantity).tag)};
}

Record make_inequality(std::string_view label, int trial, int dim, std::string_view quantity, double value,
                       double bound) {
  return Record{std::string(label), trial, dim, std::string(quantity), value, bound, bound - value,
                std::string(quantity_spec(quantity).tag)};
}

void absorb(std::vector<TrialOutput>&& parts, std::vector<Record>& records) {
  for (auto& p : parts) {
    for (auto& r : p.records) records.push_back(std::move(r));
  }
}

ComplexVector basis_vector(Index d, Index k) {
  ComplexVector v = ComplexVector::Zero(d);
  v(k) = 1.0;
  return v;
}

ComplexVector plus_state() {
  ComplexVector v(2);
  v << std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0;
  return v;
}

// ---------------------------------------------------------------- criteria

void c1(std::uint64_t seed, int workers, std::vector<Record>& out) {
  for (int d = 2; d <= 6; ++d) {
    absorb(run_indexed(100, workers,
                       [&](int k) { return speed_trial("C1", trial_seed(seed, "C1", d, k), k, d, std::nullopt, 1.0); }),
           out);
  }
}

void c2(std::uint64_t seed, int workers, std::vector<Record>& out) {
  for (int d = 2; d <= 6; ++d) {
    absorb(run_indexed(500, workers,
                       [&](int k) { return holder_trial("C2", trial_seed(seed, "C2", d, k), k, d, std::nullopt); }),
           out);
  }
  // |y+>, sigma_z, X basis: the p = inf bound is attained with v = 1.
  ComplexVector y(2);
  y << std::numbers::sqrt2 / 2.0, Complex(0.0, std::numbers::sqrt2 / 2.0);
  const DensityMatrix rho = DensityMatrix::pure(y);
  const SpeedReport r = holder_bound(rho, pauli_z(), QubitBasis::x().pvm(), NormOrder::infinity());
  out.push_back(make_identity("C2", 500, 2, "holder_saturation", r.speed, r.checks.front().bound));
  out.push_back(make_identity("C2", 500, 2, "holder_saturation", r.speed, 1.0));
}

void c3(std::uint64_t seed, int workers, std::vector<Record>& out) {
  const SearchBudget budget{};
  for (int d = 2; d <= 5; ++d) {
    absorb(run_indexed(200, workers,
                       [&](int k) {
                         const bool search = d <= 4 && k < 20;
                         return kd_trial("C3", trial_seed(seed, "C3", d, k), k, d,
                                         search ? std::optional<SearchBudget>(budget) : std::nullopt);
                       }),
           out);
  }
}

void c4(std::uint64_t seed, int workers, std::vector<Record>& out) {
  absorb(run_indexed(1000, workers,
                     [&](int k) {
                       const int d = 2 + k % 5;
                       return entropy_trial("C4", trial_seed(seed, "C4", d, k), k, d, k < 200);
                     }),
         out);
}

void c5(std::uint64_t seed, int workers, std::vector<Record>& out) {
  absorb(run_indexed(1000, workers, [&](int k) { return qubit_trial("C5", trial_seed(seed, "C5", 2, k), k); }), out);
  const Complementarity mixed = mub_complementarity(DensityMatrix::maximally_mixed(2));
  out.push_back(make_identity("C5", 1000, 2, "complementarity", mixed.sum(), 0.0));
  const Complementarity pole = mub_complementarity(DensityMatrix::pure(basis_vector(2, 0)));
  out.push_back(make_identity("C5", 1001, 2, "complementarity", pole.sum(), 2.0));
}

void c6(std::uint64_t seed, int workers, std::vector<Record>& out) {
  const double tau = std::numbers::pi / 4.0;
  const Trajectory traj = evolve_trajectory(DensityMatrix::pure(plus_state()), HamiltonianSchedule::constant(pauli_z(), tau),
                                            1000, QubitBasis::x().pvm());
  const TimeBoundReport r = qsl_time_bound(traj);
  out.push_back(make_identity("C6", 0, 2, "qsl_time_analytic", r.bound, std::numbers::sqrt2 / 2.0));
  out.push_back(make_inequality("C6", 0, 2, "qsl_time", r.bound, r.duration));
  for (int d = 2; d <= 4; ++d) {
    absorb(run_indexed(50, workers,
                       [&](int k) {
                         return qsl_time_trial("C6", trial_seed(seed, "C6", d, k), k + 1, d, std::nullopt, 1.0, 1000);
                       }),
           out);
  }
}

void c7(std::uint64_t seed, int workers, std::vector<Record>& out) {
  const SearchBudget budget = kCorrelationBudget;
  Rng rng(trial_seed(seed, "C7-anchors", 4, 0));
  const BipartiteDims two{2, 2};

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = std::numbers::sqrt2 / 2.0;
  const CorrelationReport q_bell = correlation_Q(BipartiteState(DensityMatrix::pure(bell), two), rng, budget);
  out.push_back(make_identity("C7", 0, 4, "q_closed_form", q_bell.value, 1.0));

  const ComplexVector a = random_pure_state(2, rng).amplitudes();
  const ComplexVector b = random_pure_state(2, rng).amplitudes();
  ComplexVector product(4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) product(i * 2 + j) = a(i) * b(j);
  const CorrelationReport q_product = correlation_Q(BipartiteState(DensityMatrix::pure(product), two), rng, budget);
  out.push_back(make_identity("C7", 1, 4, "q_zero", q_product.value, 0.0));

  const DensityMatrix mixed_product = DensityMatrix::from_matrix(
      kron(random_density_matrix(2, 2, rng).matrix(), random_density_matrix(3, 3, rng).matrix()));
  const CorrelationReport q_mixed_product = correlation_Q(BipartiteState(mixed_product, {2, 3}), rng, budget);
  out.push_back(make_identity("C7", 2, 6, "q_zero", q_mixed_product.value, 0.0));

  const std::vector<double> probs{1.0 / 3.0, 2.0 / 3.0};
  const std::vector<DensityMatrix> sigmas{DensityMatrix::pure(basis_vector(2, 0)), DensityMatrix::pure(plus_state())};
  const BipartiteState cq = classical_quantum_state(probs, MeasurementSet::computational(2), sigmas);
  out.push_back(make_identity("C7", 3, 4, "q_zero", correlation_Q(cq, rng, budget).value, 0.0));

  const MeasurementSet rotated = random_rank1_pvm(2, rng);
  const std::vector<DensityMatrix> sigmas3{random_density_matrix(3, 2, rng), random_density_matrix(3, 3, rng)};
  const BipartiteState cq3 = classical_quantum_state(probs, rotated, sigmas3);
  out.push_back(make_identity("C7", 4, 6, "q_zero", correlation_Q(cq3, rng, budget).value, 0.0));

  for (const BipartiteDims dims : {BipartiteDims{2, 2}, BipartiteDims{2, 3}}) {
    const int d = static_cast<int>(dims.total());
    absorb(run_indexed(50, workers,
                       [&](int k) {
                         return correlation_trial("C7", trial_seed(seed, "C7", d, k), k + 10, dims, true, budget);
                       }),
           out);
  }

  // Local-unitary invariance on mixed states.
  for (const BipartiteDims dims : {BipartiteDims{2, 2}, BipartiteDims{2, 3}}) {
    const int d = static_cast<int>(dims.total());
    absorb(run_indexed(5, workers,
                       [&](int k) {
                         Rng local(trial_seed(seed, "C7-lu", d, k));
                         const DensityMatrix rho = random_density_matrix(dims.total(), 2, local);
                         const ComplexMatrix u = kron(haar_random_unitary(dims.a, local), haar_random_unitary(dims.b, local));
                         const double q0 = correlation_Q(BipartiteState(rho, dims), local, budget).value;
                         const double q1 = correlation_Q(BipartiteState(rho.conjugated(u), dims), local, budget).value;
                         TrialOutput t;
                         t.records.push_back(make_identity("C7", k + 100, d, "q_local_unitary", q1, q0));
                         return t;
                       }),
           out);
  }
}

void c8(std::uint64_t seed, int workers, std::vector<Record>& out) {
  for (int d = 2; d <= 3; ++d) {
    absorb(run_indexed(25, workers,
                       [&](int k) {
                         AthermalityTrialSettings s;
                         s.keep_grid = false;
                         return athermality_trial("C8", trial_seed(seed, "C8", d, k), k, d, s);
                       }),
           out);
  }
  // Fixed anchor: H_S = diag(0, 1), beta = 1, joint drive sigma_x (x) sigma_x for tau = 1.
  AthermalityTrialSettings anchor;
  anchor.keep_grid = false;
  anchor.beta = 1.0;
  ComplexMatrix h_s = ComplexMatrix::Zero(2, 2);
  h_s(1, 1) = 1.0;
  anchor.system_hamiltonian = h_s;
  anchor.joint_schedule = HamiltonianSchedule::constant(kron(pauli_x(), pauli_x()), 1.0);
  for (auto& r : athermality_trial("C8", trial_seed(seed, "C8-anchor", 2, 0), 25, 2, anchor).records) {
    out.push_back(std::move(r));
  }
}

void c9(std::uint64_t seed, int workers, std::vector<Record>& out) {
  for (int d = 2; d <= 3; ++d) {
    absorb(run_indexed(100, workers, [&](int k) { return stddev_trial("C9", trial_seed(seed, "C9", d, k), k, d); }),
           out);
  }
}

struct CriterionDef {
  const char* title;
  double time_limit;
  void (*run)(std::uint64_t, int, std::vector<Record>&);
};

const CriterionDef kCriteria[] = {
    {"definition vs commutator speed", 30.0, c1},
    {"Hoelder bounds and saturation", 30.0, c2},
    {"KD nonreality identity and search oracle", 120.0, c3},
    {"entropy bound and pure-state equality", 60.0, c4},
    {"qubit closed forms and complementarity", 10.0, c5},
    {"minimum-time bound", 120.0, c6},
    {"correlation measure", 300.0, c7},
    {"athermality time bound", 180.0, c8},
    {"purification bound for generic dynamics", 60.0, c9},
};

}  // namespace

int criterion_count() { return static_cast<int>(std::size(kCriteria)); }

CriterionResult run_criterion(int id, std::uint64_t seed, int workers) {
  if (id < 1 || id > criterion_count()) throw Error(ErrorCode::InvalidArgument, "no criterion " + std::to_string(id));
  const CriterionDef& def = kCriteria[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = def.title;
  r.time_limit = def.time_limit;
  const auto start = std::chrono::steady_clock::now();
  def.run(seed, workers, r.records);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.aggregates = aggregate(r.records);
  r.passed = !r.records.empty() && all_passed(r.aggregates) && r.seconds < r.time_limit;
  return r;
}

std::string summary_line(const CriterionResult& r) {
  double min_slack = std::numeric_limits<double>::infinity();
  for (const auto& a : r.aggregates) min_slack = std::min(min_slack, a.min_slack);
  char buf[256];
  std::snprintf(buf, sizeof buf, "C%d %s %s (%zu records, min slack %.3g, %.1f s of %.0f s)", r.id,
                r.passed ? "PASS" : "FAIL", r.title.c_str(), r.records.size(), min_slack, r.seconds, r.time_limit);
  std::string line = buf;
  for (const auto& a : r.aggregates) {
    if (!a.passed) line += "\n    violated: " + a.quantity + " min slack " + format_number(a.min_slack) + " < -" + format_number(a.tolerance);
  }
  return line;
}

}  // namespace qsl::cli
