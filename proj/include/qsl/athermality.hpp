#pragma once

// Athermality of measured populations relative to Gibbs weights, and the
// system-ancilla protocol that drives a thermofield double with a global
// unitary and bounds the time needed to build up a given athermality.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qsl/quantum.hpp"
#include "qsl/speedlimit.hpp"

namespace qsl {

/// (1/2) sum_k |p_k - q_k|.
double athermality(std::span<const double> probs, std::span<const double> eq_probs);

struct AthermalityExperiment {
  ComplexMatrix system_hamiltonian;
  double beta = 1.0;
  HamiltonianSchedule joint_schedule;  // on system (x) ancilla, ancilla dimension = system dimension
  int steps = 1000;
  std::uint64_t seed = 0;              // provenance of randomly drawn experiments; the run itself is deterministic
};

struct AthermalityReport {
  std::vector<double> times;
  std::vector<double> athermality;    // A(t)
  std::vector<double> entropy;        // S of the local populations
  std::vector<double> uncertainty;    // U of the joint state for the lifted eigen-PVM
  std::vector<double> energy;         // ||H_SE(t)||_inf
  std::vector<double> bound_so_far;   // A(t) / sqrt(<||H||^2>_[0,t] <S^2>_[0,t])
  Probabilities gibbs_weights;
  double final_athermality = 0.0;
  double mean_energy_sq = 0.0;
  double mean_entropy_sq = 0.0;
  double bound = 0.0;                 // A(tau) / sqrt(<||H||^2> <S^2>)
  double slack = 0.0;                 // tau - bound
  TimeBoundReport uncertainty_form;   // same run through qsl_time_bound, bound >= `bound`
  double max_uncertainty_excess = 0.0;  // max_t (U - S), nonpositive up to round-off
  double gibbs_gap = 0.0;             // max_k |P_k(0) - Gibbs weight k|
  std::optional<DensityMatrix> final_state;  // joint state at tau
};

AthermalityReport run_athermality_experiment(const AthermalityExperiment& exp);

struct ReverseThermalizationReport {
  TimeBoundReport bound;       // mean_uncertainty_sq holds <S^2> here
  double initial_athermality;  // distance of P(0) from the target
  double distance_to_target;   // athermality of P(tau) from the target
  bool reached;                // distance_to_target <= tolerance
};

/// Minimum time to move the populations of `traj.measurement` onto `eq_probs`.
/// The numerator is the realized endpoint difference, so the bound is valid
/// even when the target is missed; `reached` reports whether it was hit.
ReverseThermalizationReport reverse_thermalization_bound(const Trajectory& traj, std::span<const double> eq_probs,
                                                         double tolerance = 1e-9);

}  // namespace qsl
