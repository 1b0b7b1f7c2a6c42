#include "qsl/athermality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qsl {

namespace {

void require_distribution(std::span<const double> p, const char* what) {
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < -kNegativityClip || x > 1.0 + kNegativityClip) {
      throw Error(ErrorCode::NotNormalized, std::string(what) + ": entry outside [0, 1]");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kStateTol) {
    throw Error(ErrorCode::NotNormalized, std::string(what) + ": probabilities sum to " + std::to_string(sum));
  }
}

double ratio_or_zero(double num, double denom_sq) {
  const double denom = std::sqrt(denom_sq);
  return denom > 0.0 ? num / denom : 0.0;
}

}  // namespace

double athermality(std::span<const double> probs, std::span<const double> eq_probs) {
  if (probs.size() != eq_probs.size()) throw Error(ErrorCode::LengthMismatch, "athermality: vectors differ in length");
  require_distribution(probs, "athermality");
  require_distribution(eq_probs, "athermality");
  double total = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) total += std::abs(probs[k] - eq_probs[k]);
  return std::min(1.0, 0.5 * total);
}

AthermalityReport run_athermality_experiment(const AthermalityExperiment& exp) {
  require_square(exp.system_hamiltonian, "run_athermality_experiment");
  const Index d = exp.system_hamiltonian.rows();
  if (exp.joint_schedule.dim() != d * d) {
    throw Error(ErrorCode::DimensionMismatch, "run_athermality_experiment: joint schedule must act on system (x) ancilla");
  }
  const GibbsEnsemble gibbs = gibbs_ensemble(exp.system_hamiltonian, exp.beta);
  const MeasurementSet local = MeasurementSet::from_basis(gibbs.spectrum.eigenvectors);
  const MeasurementSet lifted = local.lifted(d);
  const DensityMatrix initial = thermofield_double(exp.system_hamiltonian, exp.beta).density();
  const Trajectory traj = evolve_trajectory(initial, exp.joint_schedule, exp.steps, lifted);

  AthermalityReport r;
  r.gibbs_weights = gibbs.weights;
  r.times = traj.times;
  const std::size_t n = traj.size();
  std::vector<double> energy_sq(n), entropy_sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Probabilities& p = traj.probabilities[i];
    r.athermality.push_back(athermality(p, gibbs.weights));
    r.entropy.push_back(entropy_measure(p));
    r.uncertainty.push_back(quantum_uncertainty(traj.states[i], lifted));
    r.energy.push_back(schatten_norm(traj.hamiltonians[i], NormOrder::infinity()));
    energy_sq[i] = r.energy.back() * r.energy.back();
    entropy_sq[i] = r.entropy.back() * r.entropy.back();
    r.max_uncertainty_excess = i == 0 ? r.uncertainty[0] - r.entropy[0]
                                      : std::max(r.max_uncertainty_excess, r.uncertainty[i] - r.entropy[i]);
  }

  // Running bound: cumulative trapezoid integrals of ||H||^2 and S^2.
  double int_e = 0.0, int_s = 0.0;
  r.bound_so_far.push_back(0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = r.times[i] - r.times[i - 1];
    int_e += 0.5 * (energy_sq[i] + energy_sq[i - 1]) * dt;
    int_s += 0.5 * (entropy_sq[i] + entropy_sq[i - 1]) * dt;
    const double span = r.times[i] - r.times.front();
    r.bound_so_far.push_back(ratio_or_zero(r.athermality[i], (int_e / span) * (int_s / span)));
  }

  for (std::size_t k = 0; k < gibbs.weights.size(); ++k) {
    r.gibbs_gap = std::max(r.gibbs_gap, std::abs(traj.probabilities.front()[k] - gibbs.weights[k]));
  }
  r.final_athermality = r.athermality.back();
  r.mean_energy_sq = trapezoid_mean(r.times, energy_sq);
  r.mean_entropy_sq = trapezoid_mean(r.times, entropy_sq);
  r.bound = ratio_or_zero(r.final_athermality, r.mean_energy_sq * r.mean_entropy_sq);
  r.slack = traj.duration() - r.bound;
  r.uncertainty_form = qsl_time_bound(traj);
  r.final_state = traj.states.back();
  return r;
}

ReverseThermalizationReport reverse_thermalization_bound(const Trajectory& traj, std::span<const double> eq_probs,
                                                         double tolerance) {
  if (traj.size() < 2) throw Error(ErrorCode::EmptyTrajectory, "reverse_thermalization_bound: need at least two grid points");
  const Probabilities& first = traj.probabilities.front();
  const Probabilities& last = traj.probabilities.back();
  if (eq_probs.size() != first.size()) throw Error(ErrorCode::LengthMismatch, "reverse_thermalization_bound: target length differs");

  std::vector<double> energy_sq(traj.size()), entropy_sq(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double e = schatten_norm(traj.hamiltonians[i], NormOrder::infinity());
    const double s = entropy_measure(traj.probabilities[i]);
    energy_sq[i] = e * e;
    entropy_sq[i] = s * s;
  }
  ReverseThermalizationReport out{};
  out.initial_athermality = athermality(first, eq_probs);
  out.distance_to_target = athermality(last, eq_probs);
  out.reached = out.distance_to_target <= tolerance;

  TimeBoundReport& b = out.bound;
  b.duration = traj.duration();
  for (std::size_t k = 0; k < first.size(); ++k) b.variational_distance += std::abs(last[k] - first[k]);
  b.mean_energy_sq = trapezoid_mean(traj.times, energy_sq);
  b.mean_uncertainty_sq = trapezoid_mean(traj.times, entropy_sq);
  b.bound = ratio_or_zero(0.5 * b.variational_distance, b.mean_energy_sq * b.mean_uncertainty_sq);
  b.slack = b.duration - b.bound;
  return out;
}

}  // namespace qsl
