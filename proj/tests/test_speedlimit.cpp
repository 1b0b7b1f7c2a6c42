#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qsl/speedlimit.hpp"

using namespace qsl;

namespace {

const double kPi = std::numbers::pi;
const double kS = std::sqrt(0.5);

DensityMatrix plus_state() { return DensityMatrix::pure(oracle::ket({kS, kS})); }
DensityMatrix y_plus_state() { return DensityMatrix::pure(oracle::ket({kS, kI * kS})); }

MeasurementSet x_basis() {
  ComplexMatrix b(2, 2);
  b << kS, kS, kS, -kS;
  return MeasurementSet::from_basis(b);
}

Trajectory rabi(double duration, int steps) {
  return evolve_trajectory(plus_state(), HamiltonianSchedule::constant(pauli_z(), duration), steps, x_basis());
}

/// Derivatives by differentiating Born probabilities of the Taylor-propagated state.
std::vector<double> oracle_derivatives(const DensityMatrix& rho, const ComplexMatrix& h, const MeasurementSet& meas) {
  std::vector<double> out;
  for (const auto& m : meas.elements()) {
    auto p = [&](double t) {
      const ComplexMatrix u = oracle::expm_minus_i(h, t);
      return (m * u * rho.matrix() * u.adjoint()).trace().real();
    };
    out.push_back(oracle::derivative(p, 0.0, 1e-4));
  }
  return out;
}

double find_check(const SpeedReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c.slack;
  ADD_FAILURE() << "missing check " << name;
  return 0.0;
}

}  // namespace

TEST(ProbabilityDerivatives, MatchBornRuleOracle) {
  Rng rng(91);
  for (Index d = 2; d <= 5; ++d) {
    const DensityMatrix rho = random_density_matrix(d, d, rng);
    const ComplexMatrix h = random_hermitian(d, rng);
    const MeasurementSet meas = random_povm(d, 3, rng);
    const auto exact = probability_derivatives(rho, h, meas);
    const auto ref = oracle_derivatives(rho, h, meas);
    double sum = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k) {
      EXPECT_NEAR(exact[k], ref[k], 1e-7);
      sum += exact[k];
    }
    EXPECT_NEAR(sum, 0.0, 1e-12);
  }
}

TEST(ProbabilitySpeedExact, Examples) {
  Rng rng(1);
  const ComplexMatrix h = random_hermitian(3, rng);
  EXPECT_NEAR(probability_speed_exact(thermal_state(h, 1.0), h, random_povm(3, 3, rng)), 0.0, 1e-12);
  EXPECT_NEAR(probability_speed_exact(plus_state(), pauli_z(), x_basis()), 0.0, 1e-15);
  const Trajectory traj = rabi(kPi / 8.0, 1);
  EXPECT_NEAR(probability_speed_exact(traj.states.back(), pauli_z(), x_basis()), std::sin(kPi / 4.0), 1e-9);
}

TEST(ProbabilitySpeedFd, Examples) {
  Rng rng(2);
  const ComplexMatrix h = random_hermitian(3, rng);
  const Trajectory still =
      evolve_trajectory(thermal_state(h, 0.5), HamiltonianSchedule::constant(h, 1.0), 4, random_povm(3, 3, rng));
  EXPECT_NEAR(probability_speed_fd(still, 2, 1e-5).plain, 0.0, 1e-10);

  const Trajectory traj = rabi(kPi / 4.0, 2);  // interior point at pi/8
  const FiniteDifferenceSpeed fd = probability_speed_fd(traj, 1, 1e-5);
  EXPECT_NEAR(fd.plain, 0.7071067811865476, 1e-6);
  EXPECT_NEAR(fd.surprisal, fd.plain, 1e-8);
  EXPECT_EQ(oracle::error_code_of([&] { probability_speed_fd(traj, 0, 1e-5); }), ErrorCode::BoundaryPoint);
  EXPECT_EQ(oracle::error_code_of([&] { probability_speed_fd(traj, 2, 1e-5); }), ErrorCode::BoundaryPoint);
}

TEST(ProbabilitySpeedFd, AgreesWithExactRouteOnRandomConfigs) {
  Rng rng(93);
  for (Index d = 2; d <= 6; ++d) {
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix h = random_hermitian(d, rng);
      const Trajectory traj = evolve_trajectory(random_density_matrix(d, d, rng), HamiltonianSchedule::constant(h, 0.4),
                                                2, random_povm(d, 3, rng));
      const double exact = probability_speed_exact(traj.states[1], h, traj.measurement);
      const double fd = probability_speed_fd(traj, 1, 1e-5).plain;
      const double scale = exact < 1e-3 ? 1.0 : exact;
      EXPECT_LT(std::abs(fd - exact) / scale, 1e-6);
    }
  }
}

TEST(QuantumUncertainty, Examples) {
  const DensityMatrix diag = DensityMatrix::from_matrix(oracle::matrix2(0.2, 0.0, 0.0, 0.8));
  for (const NormOrder q : {NormOrder::finite(1), NormOrder::finite(2), NormOrder::infinity()}) {
    EXPECT_EQ(quantum_uncertainty(diag, MeasurementSet::computational(2), q), 0.0);
  }
  EXPECT_NEAR(quantum_uncertainty(plus_state(), MeasurementSet::computational(2)), 1.0, 1e-14);
  EXPECT_NEAR(quantum_uncertainty(plus_state(), MeasurementSet::computational(2), NormOrder::finite(2)), kS, 1e-14);
}

TEST(QuantumUncertainty, MatchesSvdOracle) {
  Rng rng(95);
  for (Index d = 2; d <= 5; ++d) {
    const DensityMatrix rho = random_density_matrix(d, d, rng);
    const MeasurementSet meas = random_povm(d, 4, rng);
    double ref = 0.0;
    for (const auto& m : meas.elements()) ref += 0.5 * oracle::trace_norm(m * rho.matrix() - rho.matrix() * m);
    EXPECT_NEAR(quantum_uncertainty(rho, meas), ref, 1e-10);
  }
}

TEST(QuantumUncertainty, ZeroExactlyWhenEveryCommutatorVanishes) {
  Rng rng(97);
  for (Index d = 2; d <= 5; ++d) {
    const ComplexMatrix u = haar_random_unitary(d, rng);
    const MeasurementSet meas = MeasurementSet::from_basis(u);
    RealVector w = RealVector::Random(d).cwiseAbs();
    w /= w.sum();
    const DensityMatrix commuting = DensityMatrix::from_matrix(u * w.cast<Complex>().asDiagonal() * u.adjoint());
    EXPECT_LT(quantum_uncertainty(commuting, meas), 1e-10);
    const DensityMatrix generic = random_density_matrix(d, d, rng);
    double largest = 0.0;
    for (const auto& m : meas.elements()) largest = std::max(largest, oracle::max_abs(commutator(m, generic.matrix())));
    ASSERT_GT(largest, 1e-10);
    EXPECT_GT(quantum_uncertainty(generic, meas), 1e-10);
  }
}

TEST(HolderBound, StationaryCase) {
  Rng rng(3);
  const ComplexMatrix h = random_hermitian(3, rng);
  const SpeedReport r = holder_bound(thermal_state(h, 2.0), h, random_povm(3, 3, rng), NormOrder::finite(2));
  EXPECT_NEAR(r.speed, 0.0, 1e-12);
  EXPECT_GE(r.min_slack(), 0.0);
}

TEST(HolderBound, SaturatedByYPlusUnderSigmaZ) {
  const SpeedReport r = holder_bound(y_plus_state(), pauli_z(), x_basis(), NormOrder::infinity());
  EXPECT_NEAR(r.speed, 1.0, 1e-14);
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_EQ(r.checks[0].tag, "Eq6");
  EXPECT_NEAR(r.checks[0].bound, 1.0, 1e-14);
  EXPECT_LT(std::abs(r.checks[0].slack), 1e-9);
  // The same state is reached at t = pi/4 of the sigma_z trajectory from |+>.
  const Trajectory traj = rabi(kPi / 4.0, 1);
  EXPECT_LT(oracle::max_abs(traj.states.back().matrix() - y_plus_state().matrix()), 1e-14);
}

TEST(HolderBound, HoldsOnRandomEnsembles) {
  Rng rng(99);
  for (Index d = 2; d <= 5; ++d) {
    for (int trial = 0; trial < 100; ++trial) {
      const DensityMatrix rho = random_density_matrix(d, 1 + trial % d, rng);
      const ComplexMatrix h = random_hermitian(d, rng);
      const MeasurementSet meas = trial % 2 ? random_povm(d, 3, rng) : random_rank1_pvm(d, rng);
      for (const NormOrder p : {NormOrder::finite(1), NormOrder::finite(2), NormOrder::infinity()}) {
        const SpeedReport r = holder_bound(rho, h, meas, p);
        EXPECT_GE(r.min_slack(), -1e-8);
        EXPECT_EQ(r.checks[0].tag, p.is_infinite() ? "Eq6" : "Eq4");
      }
    }
  }
  EXPECT_EQ(oracle::error_code_of(
                [] { holder_bound(plus_state(), pauli_z(), x_basis(), NormOrder::finite(3)); }),
            ErrorCode::InvalidOrder);
}

TEST(EntropyMeasure, Examples) {
  EXPECT_EQ(entropy_measure(std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_NEAR(entropy_measure(std::vector<double>{0.5, 0.5}), 1.0, 1e-15);
  EXPECT_NEAR(entropy_measure(std::vector<double>{0.25, 0.75}), std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_EQ(oracle::error_code_of([] { entropy_measure(std::vector<double>{0.5, 0.6}); }), ErrorCode::NotNormalized);
  EXPECT_EQ(oracle::error_code_of([] { entropy_measure(std::vector<double>{1.2, -0.2}); }), ErrorCode::NotNormalized);
}

TEST(EntropyMeasure, UniformIsMaximal) {
  Rng rng(101);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t n = 2; n <= 6; ++n) {
    const double top = entropy_measure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    EXPECT_NEAR(top, static_cast<double>(n) * std::sqrt((1.0 / n) * (1.0 - 1.0 / n)), 1e-14);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> p(n);
      double total = 0.0;
      for (auto& x : p) total += (x = unif(rng));
      for (auto& x : p) x /= total;
      EXPECT_GE(top + 1e-15, entropy_measure(p));
    }
  }
}

TEST(EntropyBound, UncertaintyNeverExceedsEntropy) {
  Rng rng(103);
  for (int trial = 0; trial < 300; ++trial) {
    const Index d = 2 + trial % 5;
    const DensityMatrix rho = random_density_matrix(d, 1 + trial % d, rng);
    const MeasurementSet meas = trial % 3 ? random_povm(d, 2 + trial % 4, rng) : random_rank1_pvm(d, rng);
    EXPECT_LE(quantum_uncertainty(rho, meas), entropy_measure(born_probabilities(rho, meas)) + 1e-9);
  }
}

TEST(EntropyBound, EqualityForPureStatesAndRankOnePvms) {
  Rng rng(107);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 5;
    const DensityMatrix rho = random_pure_state(d, rng).density();
    const MeasurementSet meas = random_rank1_pvm(d, rng);
    EXPECT_NEAR(quantum_uncertainty(rho, meas), entropy_measure(born_probabilities(rho, meas)), 1e-9);
  }
}

TEST(FisherSpeedBound, Examples) {
  Rng rng(4);
  const ComplexMatrix h = random_hermitian(2, rng);
  const SpeedReport still = fisher_speed_bound(thermal_state(h, 1.0), h, MeasurementSet::computational(2));
  EXPECT_NEAR(still.fisher, 0.0, 1e-12);
  EXPECT_NEAR(still.speed, 0.0, 1e-12);

  for (double t : {0.1, 0.3, 0.6, 1.2}) {
    const Trajectory traj = rabi(t, 1);
    const SpeedReport r = fisher_speed_bound(traj.states.back(), pauli_z(), x_basis());
    EXPECT_NEAR(r.fisher, 4.0, 1e-9);
    EXPECT_NEAR(r.speed, std::abs(std::sin(2.0 * t)), 1e-12);
    EXPECT_NEAR(r.checks[0].bound, 1.0, 1e-9);
    EXPECT_GE(r.min_slack(), -1e-12);
    EXPECT_FALSE(r.degenerate_probability);
  }
  // A zero-probability outcome is dropped and flagged.
  const SpeedReport edge = fisher_speed_bound(plus_state(), pauli_z(), x_basis());
  EXPECT_TRUE(edge.degenerate_probability);
}

TEST(FisherSpeedBound, HoldsOnRandomEnsembles) {
  Rng rng(109);
  for (Index d = 2; d <= 5; ++d) {
    for (int trial = 0; trial < 50; ++trial) {
      const SpeedReport r =
          fisher_speed_bound(random_density_matrix(d, d, rng), random_hermitian(d, rng), random_povm(d, 3, rng));
      EXPECT_GE(r.min_slack(), -1e-8);
    }
  }
}

TEST(StandardDeviation, Projector) {
  // Delta^2 of a projector is p(1 - p).
  const double delta = standard_deviation(plus_state(), MeasurementSet::computational(2)[0]);
  EXPECT_NEAR(delta, 0.5, 1e-15);
}

TEST(StddevBound, LocalGeneratorReducesToHolderCase) {
  Rng rng(111);
  for (Index d = 2; d <= 3; ++d) {
    const DensityMatrix rho = random_density_matrix(d, d, rng);
    const ComplexMatrix hs = random_hermitian(d, rng);
    const MeasurementSet meas = random_povm(d, 3, rng);
    const SpeedReport r = stddev_bound(rho, meas, kron(hs, identity(d)));
    EXPECT_NEAR(r.speed, probability_speed_exact(rho, hs, meas), 1e-12);
    EXPECT_NEAR(r.energy_cost, schatten_norm(hs, NormOrder::infinity()), 1e-12);
    EXPECT_NEAR(r.reduced_speed_fd, r.speed, 1e-6 * std::max(1.0, r.speed));
    // Joint uncertainty equals the system one because the ancilla is traced out by M (x) I.
    EXPECT_LE(r.speed, r.energy_cost * r.uncertainty + 1e-10);
    EXPECT_GE(r.min_slack(), -1e-8);
  }
}

TEST(StddevBound, ProjectiveSpreadEqualsEntropy) {
  Rng rng(113);
  for (Index d = 2; d <= 4; ++d) {
    const DensityMatrix rho = random_density_matrix(d, d, rng);
    const MeasurementSet meas = random_rank1_pvm(d, rng);
    double spread = 0.0;
    for (const auto& m : meas.elements()) spread += standard_deviation(rho, m);
    EXPECT_NEAR(spread, entropy_measure(born_probabilities(rho, meas)), 1e-10);
    const SpeedReport r = stddev_bound(rho, meas, random_hermitian(d * d, rng));
    EXPECT_GE(find_check(r, "projective_spread"), -1e-10);
    EXPECT_GE(find_check(r, "pure_commutator_stddev"), -1e-9);
  }
}

TEST(StddevBound, RandomJointGeneratorSeed4) {
  Rng rng(4);
  const DensityMatrix rho = random_density_matrix(2, 2, rng);
  for (int trial = 0; trial < 50; ++trial) {
    const MeasurementSet meas = trial % 2 ? random_povm(2, 3, rng) : random_rank1_pvm(2, rng);
    const SpeedReport r = stddev_bound(rho, meas, random_hermitian(4, rng));
    EXPECT_GE(find_check(r, "stddev"), -1e-8);
    EXPECT_NEAR(r.reduced_speed_fd, r.speed, 1e-6 * std::max(1.0, r.speed));
  }
  EXPECT_EQ(oracle::error_code_of([&] { stddev_bound(rho, MeasurementSet::computational(2), identity(3)); }),
            ErrorCode::DimensionMismatch);
}

TEST(TrapezoidMean, LinearIsExact) {
  const std::vector<double> t{0.0, 0.5, 2.0};
  const std::vector<double> v{1.0, 2.0, 5.0};
  EXPECT_NEAR(trapezoid_mean(t, v), 3.0, 1e-15);
  EXPECT_EQ(oracle::error_code_of([] { trapezoid_mean(std::vector<double>{0.0}, std::vector<double>{1.0}); }),
            ErrorCode::EmptyTrajectory);
}

TEST(QslTimeBound, StationaryTrajectory) {
  Rng rng(5);
  const ComplexMatrix h = random_hermitian(3, rng);
  const TimeBoundReport r = qsl_time_bound(
      evolve_trajectory(thermal_state(h, 1.0), HamiltonianSchedule::constant(h, 1.0), 50, random_povm(3, 3, rng)));
  EXPECT_NEAR(r.variational_distance, 0.0, 1e-9);
  EXPECT_LT(r.bound, 1e-6);
  EXPECT_GE(r.slack, 0.0);
}

TEST(QslTimeBound, AnalyticRabiCase) {
  const double tau = kPi / 4.0;
  const TimeBoundReport r = qsl_time_bound(rabi(tau, 1000));
  EXPECT_NEAR(r.mean_uncertainty_sq, 0.5 - std::sin(4.0 * tau) / (8.0 * tau), 1e-6);
  EXPECT_NEAR(r.bound, kS, 1e-3);
  EXPECT_LE(r.bound, tau);
  EXPECT_NEAR(r.duration, tau, 1e-15);
}

TEST(QslTimeBound, RandomConstantTrajectories) {
  Rng rng(115);
  for (Index d = 2; d <= 4; ++d) {
    for (int trial = 0; trial < 10; ++trial) {
      const Trajectory traj =
          evolve_trajectory(random_density_matrix(d, d, rng),
                            HamiltonianSchedule::constant(random_hermitian(d, rng), 1.0), 400, random_povm(d, 3, rng));
      EXPECT_GE(qsl_time_bound(traj).slack, -1e-6);
    }
  }
}

TEST(QslTimeBound, ConvergesUnderGridRefinement) {
  Rng rng(117);
  for (Index d = 2; d <= 3; ++d) {
    const DensityMatrix rho = random_density_matrix(d, d, rng);
    const auto schedule = HamiltonianSchedule::linear_ramp(random_hermitian(d, rng), random_hermitian(d, rng), 1.0);
    const MeasurementSet meas = random_povm(d, 3, rng);
    const double coarse = qsl_time_bound(evolve_trajectory(rho, schedule, 500, meas)).bound;
    const double fine = qsl_time_bound(evolve_trajectory(rho, schedule, 1000, meas)).bound;
    EXPECT_LT(std::abs(coarse - fine), 1e-4);
  }
  EXPECT_EQ(oracle::error_code_of([] {
              Trajectory t = rabi(1.0, 1);
              t.times.resize(1);
              qsl_time_bound(t);
            }),
            ErrorCode::EmptyTrajectory);
}

TEST(HelstromPovm, Examples) {
  const DensityMatrix zero = DensityMatrix::pure(oracle::ket({1.0, 0.0}));
  const DensityMatrix one = DensityMatrix::pure(oracle::ket({0.0, 1.0}));
  const MeasurementSet m = helstrom_povm(zero, one);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_TRUE(m.is_projective());
  const auto p0 = born_probabilities(zero, m), p1 = born_probabilities(one, m);
  EXPECT_NEAR(std::abs(p0[0] - p1[0]) + std::abs(p0[1] - p1[1]), 2.0, 1e-14);

  const MeasurementSet same = helstrom_povm(zero, zero);
  EXPECT_LT(oracle::max_abs(same[0] - identity(2)), 1e-12);

  Rng rng(6);
  const DensityMatrix a = random_density_matrix(4, 4, rng), b = random_density_matrix(4, 4, rng);
  const MeasurementSet h = helstrom_povm(a, b);
  const auto pa = born_probabilities(a, h), pb = born_probabilities(b, h);
  double dist = 0.0;
  for (std::size_t k = 0; k < pa.size(); ++k) dist += std::abs(pb[k] - pa[k]);
  EXPECT_NEAR(dist, oracle::eigenvalues(b.matrix() - a.matrix()).cwiseAbs().sum(), 1e-9);
}

TEST(HelstromPovm, NumeratorEqualsTraceDistanceAlongTrajectory) {
  Rng rng(119);
  for (Index d = 2; d <= 4; ++d) {
    const Trajectory traj = evolve_trajectory(random_density_matrix(d, d, rng),
                                              HamiltonianSchedule::constant(random_hermitian(d, rng), 0.8), 200,
                                              MeasurementSet::computational(d));
    const double trace_dist = oracle::trace_norm(traj.states.back().matrix() - traj.states.front().matrix());
    EXPECT_LE(qsl_time_bound(traj).variational_distance, trace_dist + 1e-9);
    const Trajectory best = traj.with_measurement(helstrom_povm(traj.states.front(), traj.states.back()));
    const TimeBoundReport r = qsl_time_bound(best);
    EXPECT_NEAR(r.variational_distance, trace_dist, 1e-9);
    EXPECT_GE(r.slack, -1e-6);
  }
}
