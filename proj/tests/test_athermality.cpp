#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qsl/athermality.hpp"

using namespace qsl;

namespace {

ComplexMatrix diag2(double a, double b) { return oracle::matrix2(a, 0.0, 0.0, b); }

AthermalityExperiment xx_experiment() {
  AthermalityExperiment exp{diag2(0.0, 1.0), 1.0,
                            HamiltonianSchedule::constant(kron(pauli_x(), pauli_x()), 1.0), 1000, 0};
  return exp;
}

std::vector<double> random_distribution(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = u(rng));
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace

TEST(Athermality, Examples) {
  const std::vector<double> p{0.7, 0.2, 0.1};
  EXPECT_EQ(athermality(p, p), 0.0);
  EXPECT_NEAR(athermality(std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.5}), 0.5, 1e-15);
  EXPECT_NEAR(athermality(p, std::vector<double>{0.5, 0.3, 0.2}), 0.2, 1e-15);
  EXPECT_EQ(oracle::error_code_of([&] { athermality(p, std::vector<double>{0.5, 0.5}); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(oracle::error_code_of([] { athermality(std::vector<double>{0.5, 0.6}, std::vector<double>{0.5, 0.5}); }),
            ErrorCode::NotNormalized);
}

TEST(Athermality, IsAMetricOnSampledTriples) {
  Rng rng(211);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 4);
    const auto p = random_distribution(n, rng), q = random_distribution(n, rng), r = random_distribution(n, rng);
    EXPECT_EQ(athermality(p, q), athermality(q, p));
    EXPECT_GT(athermality(p, q), 0.0);
    EXPECT_LE(athermality(p, q), 1.0);
    EXPECT_LE(athermality(p, r), athermality(p, q) + athermality(q, r) + 1e-15);
  }
}

TEST(AthermalityExperiment, UncoupledScheduleStaysThermal) {
  Rng rng(3);
  const ComplexMatrix hs = random_hermitian(3, rng), he = random_hermitian(3, rng);
  const AthermalityExperiment exp{hs, 0.8,
                                  HamiltonianSchedule::constant(kron(hs, identity(3)) + kron(identity(3), he), 1.0),
                                  200, 0};
  const AthermalityReport r = run_athermality_experiment(exp);
  for (double a : r.athermality) EXPECT_LT(a, 1e-12);
  EXPECT_LT(r.bound, 1e-9);
  EXPECT_GE(r.slack, 0.0);
}

TEST(AthermalityExperiment, InitialPopulationsAreGibbsWeights) {
  const AthermalityReport r = run_athermality_experiment(xx_experiment());
  const double w0 = 1.0 / (1.0 + std::exp(-1.0));
  // gibbs_ensemble lists energies descending.
  ASSERT_EQ(r.gibbs_weights.size(), 2u);
  EXPECT_NEAR(r.gibbs_weights[0], 1.0 - w0, 1e-12);
  EXPECT_NEAR(r.gibbs_weights[1], w0, 1e-12);
  EXPECT_LT(r.gibbs_gap, 1e-9);
  EXPECT_LT(r.athermality.front(), 1e-9);
}

TEST(AthermalityExperiment, CoupledQubitsRespectTheBound) {
  const AthermalityReport r = run_athermality_experiment(xx_experiment());
  EXPECT_GT(r.final_athermality, 0.0);
  EXPECT_GE(r.slack, -1e-6);
  EXPECT_NEAR(r.times.back(), 1.0, 1e-15);
  EXPECT_EQ(r.times.size(), 1001u);
  // Athermality bound is the weaker of the two forms, both below tau.
  EXPECT_LE(r.bound, r.uncertainty_form.bound + 1e-9);
  EXPECT_LE(r.uncertainty_form.bound, r.uncertainty_form.duration + 1e-6);
  EXPECT_NEAR(r.uncertainty_form.variational_distance, 2.0 * r.final_athermality, 1e-12);
  EXPECT_LE(r.max_uncertainty_excess, 1e-9);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    EXPECT_LE(r.uncertainty[i], r.entropy[i] + 1e-9);
    EXPECT_LE(r.bound_so_far[i], r.times[i] + 1e-6);
    EXPECT_NEAR(r.energy[i], 1.0, 1e-12);
  }
  EXPECT_NEAR(r.bound_so_far.back(), r.bound, 1e-12);
  ASSERT_TRUE(r.final_state.has_value());
}

TEST(AthermalityExperiment, RandomSweepRespectsTheBound) {
  Rng rng(223);
  std::uniform_real_distribution<double> beta(0.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    const Index d = i % 2 ? 3 : 2;
    const ComplexMatrix hs = random_hermitian(d, rng);
    const ComplexMatrix uncoupled = kron(hs, identity(d)) + kron(identity(d), random_hermitian(d, rng));
    const AthermalityExperiment exp{
        hs, beta(rng), HamiltonianSchedule::linear_ramp(uncoupled, uncoupled + random_hermitian(d * d, rng), 1.0), 300,
        static_cast<std::uint64_t>(i)};
    const AthermalityReport r = run_athermality_experiment(exp);
    EXPECT_GE(r.slack, -1e-6);
    EXPECT_LE(r.bound, r.uncertainty_form.bound + 1e-9);
    EXPECT_LE(r.max_uncertainty_excess, 1e-9);
    EXPECT_LT(r.gibbs_gap, 1e-9);
  }
}

TEST(AthermalityExperiment, RejectsMismatchedSchedule) {
  AthermalityExperiment exp = xx_experiment();
  exp.joint_schedule = HamiltonianSchedule::constant(pauli_x(), 1.0);
  EXPECT_EQ(oracle::error_code_of([&] { run_athermality_experiment(exp); }), ErrorCode::DimensionMismatch);
}

TEST(ReverseThermalization, ThermalStartWithStationaryDrive) {
  const ComplexMatrix hs = diag2(0.0, 1.0);
  const GibbsEnsemble g = gibbs_ensemble(hs, 1.0);
  const MeasurementSet local = MeasurementSet::from_basis(g.spectrum.eigenvectors);
  const Trajectory traj = evolve_trajectory(thermal_state(hs, 1.0), HamiltonianSchedule::constant(hs, 1.0), 100, local);
  const ReverseThermalizationReport r = reverse_thermalization_bound(traj, g.weights);
  EXPECT_NEAR(r.bound.bound, 0.0, 1e-12);
  EXPECT_TRUE(r.reached);
  EXPECT_NEAR(r.initial_athermality, 0.0, 1e-12);
}

TEST(ReverseThermalization, ReversedRunGivesTheForwardBound) {
  const AthermalityExperiment exp = xx_experiment();
  const AthermalityReport fwd = run_athermality_experiment(exp);
  const GibbsEnsemble g = gibbs_ensemble(exp.system_hamiltonian, exp.beta);
  const MeasurementSet lifted = MeasurementSet::from_basis(g.spectrum.eigenvectors).lifted(2);
  const Trajectory back = evolve_trajectory(*fwd.final_state, exp.joint_schedule.reversed(), exp.steps, lifted);
  const ReverseThermalizationReport r = reverse_thermalization_bound(back, g.weights);
  EXPECT_NEAR(r.bound.bound, fwd.bound, 1e-9);
  EXPECT_NEAR(r.initial_athermality, fwd.final_athermality, 1e-12);
  EXPECT_TRUE(r.reached);
  EXPECT_GE(r.bound.slack, -1e-6);
}

TEST(ReverseThermalization, RandomDrivenRunsRespectTheBound) {
  Rng rng(227);
  const ComplexMatrix hs = random_hermitian(2, rng);
  const GibbsEnsemble g = gibbs_ensemble(hs, 0.9);
  const MeasurementSet lifted = MeasurementSet::from_basis(g.spectrum.eigenvectors).lifted(2);
  for (int i = 0; i < 10; ++i) {
    const Trajectory traj = evolve_trajectory(random_density_matrix(4, 4, rng),
                                              HamiltonianSchedule::constant(random_hermitian(4, rng), 0.7), 200, lifted);
    const ReverseThermalizationReport r = reverse_thermalization_bound(traj, g.weights);
    EXPECT_GE(r.bound.slack, -1e-6);
    EXPECT_EQ(r.reached, r.distance_to_target <= 1e-9);
  }
  const Trajectory traj = evolve_trajectory(DensityMatrix::maximally_mixed(4),
                                            HamiltonianSchedule::constant(identity(4), 0.1), 2, lifted);
  EXPECT_EQ(oracle::error_code_of([&] { reverse_thermalization_bound(traj, std::vector<double>{1.0}); }),
            ErrorCode::LengthMismatch);
}
