#pragma once

// Speed of measurement probabilities v = (1/2) sum_k |dP_k/dt| and the bounds
// that constrain it: Hoelder (energy x quantum uncertainty), the nonadditive
// entropy, classical Fisher information, the purification bound for generic
// dynamics, and the minimum-time bound along a trajectory.

#include <span>
#include <string>
#include <vector>

#include "qsl/quantum.hpp"

namespace qsl {

/// One evaluated inequality value <= bound (or an identity with bound = rhs).
struct BoundCheck {
  std::string name;
  std::string tag;  // anchor tag emitted in reports, e.g. "Eq6"
  double value;
  double bound;
  double slack;     // bound - value for inequalities, -|value - bound| for identities
};

struct SpeedReport {
  double time = 0.0;
  double speed = 0.0;
  std::vector<double> derivatives;  // signed dP_k/dt
  double energy_cost = 0.0;         // ||H||_p of the generator used
  double uncertainty = 0.0;         // U^q
  double entropy = 0.0;             // S(P)
  double fisher = 0.0;              // F_t
  bool degenerate_probability = false;
  double reduced_speed_fd = 0.0;    // stddev_bound only: central difference of the reduced dynamics
  std::vector<BoundCheck> checks;

  double min_slack() const;
};

struct TimeBoundReport {
  double duration = 0.0;
  double variational_distance = 0.0;  // sum_k |P_k(tau) - P_k(0)|
  double mean_energy_sq = 0.0;        // <||H||_inf^2>
  double mean_uncertainty_sq = 0.0;   // <U^2>
  double bound = 0.0;
  double slack = 0.0;                 // tau - bound
};

/// dP_k/dt = i tr{H [M_k, rho]}.
std::vector<double> probability_derivatives(const DensityMatrix& state, const ComplexMatrix& h,
                                            const MeasurementSet& meas);
double probability_speed_exact(const DensityMatrix& state, const ComplexMatrix& h, const MeasurementSet& meas);

struct FiniteDifferenceSpeed {
  double plain;      // (1/2) sum_k |P_k(t+e) - P_k(t-e)| / 2e
  double surprisal;  // (1/2) sum_k |dI_k/dt| P_k(t), I = -log P
};

/// Central difference around an interior grid point, re-evolving the grid
/// state by +-epsilon with the schedule's midpoint generator.
FiniteDifferenceSpeed probability_speed_fd(const Trajectory& traj, std::size_t index, double epsilon);

/// (1/2) sum_k ||[M_k, rho]||_q.
double quantum_uncertainty(const DensityMatrix& state, const MeasurementSet& meas, NormOrder q = NormOrder::finite(1));

/// v <= ||H||_p U^q with q the Hoelder conjugate of p in {1, 2, inf}.
SpeedReport holder_bound(const DensityMatrix& state, const ComplexMatrix& h, const MeasurementSet& meas, NormOrder p);

/// sum_k sqrt(P_k (1 - P_k)).
double entropy_measure(std::span<const double> probs);

/// v <= sqrt(F_t)/2; probabilities below 1e-12 are dropped and flagged.
SpeedReport fisher_speed_bound(const DensityMatrix& state, const ComplexMatrix& h, const MeasurementSet& meas);

/// v <= ||H_SE||_inf sum_k Delta_{M_k}(rho) for dynamics generated on a
/// purification (ancilla dimension = system dimension).
SpeedReport stddev_bound(const DensityMatrix& state, const MeasurementSet& meas, const ComplexMatrix& joint_generator);

/// Quantum standard deviation sqrt(tr{M^2 rho} - tr{M rho}^2).
double standard_deviation(const DensityMatrix& state, const ComplexMatrix& op);

/// tau >= sum_k |dP_k| / (2 sqrt(<||H||_inf^2> <U^2>)), averages by the trapezoid rule.
TimeBoundReport qsl_time_bound(const Trajectory& traj);

/// Two-element PVM {P_+, P_-} on the nonnegative / negative spectrum of rho1 - rho0.
MeasurementSet helstrom_povm(const DensityMatrix& rho0, const DensityMatrix& rho1);

/// (1/tau) integral of samples over a grid, trapezoid rule.
double trapezoid_mean(std::span<const double> times, std::span<const double> values);

}  // namespace qsl
