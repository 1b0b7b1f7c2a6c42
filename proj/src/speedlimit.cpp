#include "qsl/speedlimit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsl {

namespace {

constexpr double kFisherFloor = 1e-12;

void require_compatible(const DensityMatrix& state, const ComplexMatrix& h, const MeasurementSet& meas,
                        const char* what) {
  require_square(h, what);
  if (h.rows() != state.dim() || meas.dim() != state.dim()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": state, generator and measurement dimensions differ");
  }
  require_hermitian(h, kHermiticityTol, what);
}

BoundCheck inequality(std::string name, std::string tag, double value, double bound) {
  return BoundCheck{std::move(name), std::move(tag), value, bound, bound - value};
}

BoundCheck identity_check(std::string name, std::string tag, double lhs, double rhs) {
  return BoundCheck{std::move(name), std::move(tag), lhs, rhs, -std::abs(lhs - rhs)};
}

double half_abs_sum(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += std::abs(x);
  return 0.5 * total;
}

Probabilities shifted_probabilities(const DensityMatrix& state, const ComplexMatrix& step, const MeasurementSet& meas) {
  return born_probabilities(state.conjugated(step), meas);
}

}  // namespace

double SpeedReport::min_slack() const {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) out = std::min(out, c.slack);
  return out;
}

std::vector<double> probability_derivatives(const DensityMatrix& state, const ComplexMatrix& h,
                                            const MeasurementSet& meas) {
  require_compatible(state, h, meas, "probability_derivatives");
  std::vector<double> out;
  out.reserve(meas.size());
  for (const auto& m : meas.elements()) {
    // i tr{H [M, rho]} is real for Hermitian H, M, rho.
    const Complex tr = (h * commutator(m, state.matrix())).trace();
    out.push_back((kI * tr).real());
  }
  return out;
}

double probability_speed_exact(const DensityMatrix& state, const ComplexMatrix& h, const MeasurementSet& meas) {
  return half_abs_sum(probability_derivatives(state, h, meas));
}

FiniteDifferenceSpeed probability_speed_fd(const Trajectory& traj, std::size_t index, double epsilon) {
  if (traj.size() < 3 || index == 0 || index + 1 >= traj.size()) {
    throw Error(ErrorCode::BoundaryPoint, "probability_speed_fd: index " + std::to_string(index) +
                                              " is not an interior grid point");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "probability_speed_fd: epsilon must be positive");
  }
  const double t = traj.times[index];
  const DensityMatrix& rho = traj.states[index];
  const ComplexMatrix forward = unitary_step(traj.schedule.evaluate(t + 0.5 * epsilon), epsilon);
  const ComplexMatrix backward = unitary_step(traj.schedule.evaluate(t - 0.5 * epsilon), -epsilon);
  const Probabilities plus = shifted_probabilities(rho, forward, traj.measurement);
  const Probabilities minus = shifted_probabilities(rho, backward, traj.measurement);
  const Probabilities& here = traj.probabilities[index];

  double plain = 0.0;
  double surprisal = 0.0;
  for (std::size_t k = 0; k < here.size(); ++k) {
    plain += std::abs(plus[k] - minus[k]) / (2.0 * epsilon);
    if (here[k] > kFisherFloor && plus[k] > 0.0 && minus[k] > 0.0) {
      const double d_surprisal = (-std::log(plus[k]) + std::log(minus[k])) / (2.0 * epsilon);
      surprisal += std::abs(d_surprisal) * here[k];
    }
  }
  return FiniteDifferenceSpeed{0.5 * plain, 0.5 * surprisal};
}

double quantum_uncertainty(const DensityMatrix& state, const MeasurementSet& meas, NormOrder q) {
  if (meas.dim() != state.dim()) throw Error(ErrorCode::DimensionMismatch, "quantum_uncertainty: dimensions differ");
  double total = 0.0;
  // [M, rho] is skew-Hermitian for Hermitian M and rho.
  for (const auto& m : meas.elements()) total += skew_hermitian_schatten_norm(commutator(m, state.matrix()), q);
  return 0.5 * total;
}

SpeedReport holder_bound(const DensityMatrix& state, const ComplexMatrix& h, const MeasurementSet& meas, NormOrder p) {
  const NormOrder q = p.conjugate();
  SpeedReport r;
  r.derivatives = probability_derivatives(state, h, meas);
  r.speed = half_abs_sum(r.derivatives);
  r.energy_cost = schatten_norm(h, p);
  r.uncertainty = quantum_uncertainty(state, meas, q);
  const char* tag = p.is_infinite() ? "Eq6" : "Eq4";
  r.checks.push_back(inequality("holder_p" + p.to_string(), tag, r.speed, r.energy_cost * r.uncertainty));
  return r;
}

double entropy_measure(std::span<const double> probs) {
  double sum = 0.0;
  for (double x : probs) {
    if (!std::isfinite(x) || x < -kNegativityClip || x > 1.0 + kNegativityClip) {
      throw Error(ErrorCode::NotNormalized, "entropy_measure: entry outside [0, 1]");
    }
    sum += x;
  }
  if (probs.empty() || std::abs(sum - 1.0) > kStateTol) {
    throw Error(ErrorCode::NotNormalized, "entropy_measure: probabilities sum to " + std::to_string(sum));
  }
  double total = 0.0;
  for (double x : probs) {
    const double c = std::clamp(x, 0.0, 1.0);
    total += std::sqrt(c * (1.0 - c));
  }
  return total;
}

SpeedReport fisher_speed_bound(const DensityMatrix& state, const ComplexMatrix& h, const MeasurementSet& meas) {
  SpeedReport r;
  r.derivatives = probability_derivatives(state, h, meas);
  r.speed = half_abs_sum(r.derivatives);
  const Probabilities probs = born_probabilities(state, meas);
  double fisher = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] < kFisherFloor) {
      r.degenerate_probability = true;
      continue;
    }
    fisher += r.derivatives[k] * r.derivatives[k] / probs[k];
  }
  r.fisher = fisher;
  r.entropy = entropy_measure(probs);
  r.checks.push_back(inequality("fisher", "Eq2", r.speed, 0.5 * std::sqrt(fisher)));
  return r;
}

double standard_deviation(const DensityMatrix& state, const ComplexMatrix& op) {
  if (op.rows() != state.dim()) throw Error(ErrorCode::DimensionMismatch, "standard_deviation: dimensions differ");
  const double mean = (op * state.matrix()).trace().real();
  const double second = (op * op * state.matrix()).trace().real();
  return std::sqrt(std::max(0.0, second - mean * mean));
}

SpeedReport stddev_bound(const DensityMatrix& state, const MeasurementSet& meas, const ComplexMatrix& joint_generator) {
  const Index d = state.dim();
  require_square(joint_generator, "stddev_bound");
  if (meas.dim() != d || joint_generator.rows() != d * d) {
    throw Error(ErrorCode::DimensionMismatch, "stddev_bound: joint generator must act on system (x) ancilla of equal dimension");
  }
  require_hermitian(joint_generator, kHermiticityTol, "stddev_bound");

  const PureState psi = purify(state);
  const DensityMatrix joint = psi.density();
  const MeasurementSet lifted = meas.lifted(d);

  SpeedReport r;
  r.derivatives = probability_derivatives(joint, joint_generator, lifted);
  r.speed = half_abs_sum(r.derivatives);
  r.energy_cost = schatten_norm(joint_generator, NormOrder::infinity());

  // Reduced dynamics checked independently by a short central step of the joint unitary.
  constexpr double eps = 1e-5;
  const DensityMatrix plus = partial_trace(joint.conjugated(unitary_step(joint_generator, eps)), {d, d}, Subsystem::A);
  const DensityMatrix minus = partial_trace(joint.conjugated(unitary_step(joint_generator, -eps)), {d, d}, Subsystem::A);
  const Probabilities pp = born_probabilities(plus, meas);
  const Probabilities pm = born_probabilities(minus, meas);
  double fd = 0.0;
  for (std::size_t k = 0; k < pp.size(); ++k) fd += std::abs(pp[k] - pm[k]) / (2.0 * eps);
  r.reduced_speed_fd = 0.5 * fd;

  double spread = 0.0;
  double identity_gap = 0.0;
  for (std::size_t k = 0; k < meas.size(); ++k) {
    const double delta = standard_deviation(state, meas[k]);
    spread += delta;
    const double half_norm = 0.5 * schatten_norm(commutator(lifted[k], joint.matrix()), NormOrder::finite(1));
    identity_gap = std::max(identity_gap, std::abs(half_norm - delta));
  }
  r.uncertainty = quantum_uncertainty(joint, lifted);
  const Probabilities probs = born_probabilities(state, meas);
  r.entropy = entropy_measure(probs);

  r.checks.push_back(inequality("stddev", "EqA4", r.speed, r.energy_cost * spread));
  r.checks.push_back(identity_check("pure_commutator_stddev", "EqA3", identity_gap, 0.0));
  if (meas.is_projective()) {
    r.checks.push_back(inequality("stddev_entropy", "EqA5", r.speed, r.energy_cost * r.entropy));
    r.checks.push_back(identity_check("projective_spread", "EqA5", spread, r.entropy));
  }
  return r;
}

double trapezoid_mean(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw Error(ErrorCode::LengthMismatch, "trapezoid_mean: lengths differ");
  if (times.size() < 2) throw Error(ErrorCode::EmptyTrajectory, "trapezoid_mean: need at least two samples");
  const double span = times.back() - times.front();
  if (!(span > 0.0)) return values.front();
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) integral += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
  return integral / span;
}

TimeBoundReport qsl_time_bound(const Trajectory& traj) {
  if (traj.size() < 2) throw Error(ErrorCode::EmptyTrajectory, "qsl_time_bound: trajectory needs at least two grid points");
  std::vector<double> energy_sq(traj.size());
  std::vector<double> uncertainty_sq(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double e = schatten_norm(traj.hamiltonians[i], NormOrder::infinity());
    const double u = quantum_uncertainty(traj.states[i], traj.measurement);
    energy_sq[i] = e * e;
    uncertainty_sq[i] = u * u;
  }
  TimeBoundReport r;
  r.duration = traj.duration();
  const Probabilities& p0 = traj.probabilities.front();
  const Probabilities& p1 = traj.probabilities.back();
  for (std::size_t k = 0; k < p0.size(); ++k) r.variational_distance += std::abs(p1[k] - p0[k]);
  r.mean_energy_sq = trapezoid_mean(traj.times, energy_sq);
  r.mean_uncertainty_sq = trapezoid_mean(traj.times, uncertainty_sq);
  const double denom = 2.0 * std::sqrt(r.mean_energy_sq * r.mean_uncertainty_sq);
  r.bound = denom > 0.0 ? r.variational_distance / denom : 0.0;
  r.slack = r.duration - r.bound;
  return r;
}

MeasurementSet helstrom_povm(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dim() != rho1.dim()) throw Error(ErrorCode::DimensionMismatch, "helstrom_povm: dimensions differ");
  const Index d = rho0.dim();
  const EigenSystem es = hermitian_eigensystem(rho1.matrix() - rho0.matrix());
  ComplexMatrix positive = ComplexMatrix::Zero(d, d);
  for (Index j = 0; j < d; ++j) {
    if (es.eigenvalues(j) >= -kPsdClipTol) positive += projector(es.eigenvectors.col(j));
  }
  ComplexMatrix negative = identity(d) - positive;
  return MeasurementSet({positive, negative}, MeasurementKind::Pvm);
}

}  // namespace qsl
