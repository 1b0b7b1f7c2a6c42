#include "qsl/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace qsl {

// ---------------------------------------------------------------- states

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& m) {
  require_hermitian(m, kStateTol, "DensityMatrix");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > kStateTol) {
    throw Error(ErrorCode::InvalidState, "trace must be 1, got " + std::to_string(trace));
  }
  const EigenSystem es = hermitian_eigensystem(h);
  const double lowest = es.eigenvalues(es.eigenvalues.size() - 1);
  if (lowest < -kNegativityClip) {
    throw Error(ErrorCode::InvalidState, "negative eigenvalue " + std::to_string(lowest));
  }
  if (lowest < 0.0) {
    h = spectral_function(es, [](double x) { return std::max(x, 0.0); });
    h = 0.5 * (h + h.adjoint());
  }
  h /= h.trace().real();
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!psi.allFinite() || std::abs(norm - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidState, "pure state must be normalized, |psi| = " + std::to_string(norm));
  }
  ComplexMatrix rho = psi * psi.adjoint();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

DensityMatrix DensityMatrix::conjugated(const ComplexMatrix& u) const {
  require_same_shape(u, rho_, "DensityMatrix::conjugated");
  ComplexMatrix out = u * rho_ * u.adjoint();
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

PureState PureState::from_amplitudes(const ComplexVector& amplitudes) {
  const double norm = amplitudes.norm();
  if (amplitudes.size() == 0 || !amplitudes.allFinite() || std::abs(norm - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidState, "pure state must be normalized, |psi| = " + std::to_string(norm));
  }
  return PureState(amplitudes);
}

// ---------------------------------------------------------------- measurements

std::string_view to_string(MeasurementKind kind) noexcept {
  switch (kind) {
    case MeasurementKind::Povm: return "povm";
    case MeasurementKind::Pvm: return "pvm";
    case MeasurementKind::Rank1Pvm: return "rank1_pvm";
  }
  return "povm";
}

namespace {

bool satisfies_pvm(const std::vector<ComplexMatrix>& elements) {
  for (std::size_t k = 0; k < elements.size(); ++k) {
    for (std::size_t j = 0; j < elements.size(); ++j) {
      ComplexMatrix prod = elements[k] * elements[j];
      if (k == j) prod -= elements[k];
      if (max_abs(prod) > kStateTol) return false;
    }
  }
  return true;
}

bool all_rank1(const std::vector<ComplexMatrix>& elements) {
  for (const auto& m : elements) {
    const RealVector ev = hermitian_eigenvalues(m);
    if (ev.size() > 1 && ev(1) >= kStateTol) return false;
    if (std::abs(ev(0) - 1.0) > kStateTol) return false;
  }
  return true;
}

MeasurementKind classify(const std::vector<ComplexMatrix>& elements) {
  if (!satisfies_pvm(elements)) return MeasurementKind::Povm;
  return all_rank1(elements) ? MeasurementKind::Rank1Pvm : MeasurementKind::Pvm;
}

}  // namespace

MeasurementSet::MeasurementSet(std::vector<ComplexMatrix> elements, MeasurementKind kind)
    : elements_(std::move(elements)), kind_(kind) {
  if (elements_.empty()) throw Error(ErrorCode::InvalidMeasurement, "measurement needs at least one element");
  const Index d = elements_.front().rows();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (auto& m : elements_) {
    require_hermitian(m, kStateTol, "MeasurementSet element");
    if (m.rows() != d) throw Error(ErrorCode::DimensionMismatch, "measurement elements differ in dimension");
    m = 0.5 * (m + m.adjoint());
    const RealVector ev = hermitian_eigenvalues(m);
    if (ev(ev.size() - 1) < -kPsdClipTol) {
      throw Error(ErrorCode::InvalidMeasurement, "element is not PSD, eigenvalue " + std::to_string(ev(ev.size() - 1)));
    }
    total += m;
  }
  if (max_abs(total - identity(d)) > kStateTol) {
    throw Error(ErrorCode::InvalidMeasurement, "elements do not sum to identity");
  }
  if (kind_ != MeasurementKind::Povm && !satisfies_pvm(elements_)) {
    throw Error(ErrorCode::InvalidMeasurement, "elements are not orthogonal projectors");
  }
  if (kind_ == MeasurementKind::Rank1Pvm && !all_rank1(elements_)) {
    throw Error(ErrorCode::NotRank1PVM, "projectors are not rank one");
  }
}

MeasurementSet MeasurementSet::from_basis(const ComplexMatrix& basis) {
  require_square(basis, "MeasurementSet::from_basis");
  if (unitarity_defect(basis) > kUnitarityTol * 10) {
    throw Error(ErrorCode::InvalidMeasurement, "basis columns are not orthonormal");
  }
  std::vector<ComplexMatrix> elements;
  elements.reserve(static_cast<std::size_t>(basis.cols()));
  for (Index j = 0; j < basis.cols(); ++j) elements.push_back(projector(basis.col(j)));
  return MeasurementSet(std::move(elements), MeasurementKind::Rank1Pvm);
}

MeasurementSet MeasurementSet::computational(Index dim) { return from_basis(identity(dim)); }

MeasurementSet MeasurementSet::lifted(Index ancilla_dim) const {
  std::vector<ComplexMatrix> out;
  out.reserve(elements_.size());
  const ComplexMatrix id = identity(ancilla_dim);
  for (const auto& m : elements_) out.push_back(kron(m, id));
  MeasurementKind kind = kind_;
  if (kind == MeasurementKind::Rank1Pvm && ancilla_dim > 1) kind = MeasurementKind::Pvm;
  return MeasurementSet(std::move(out), kind);
}

// ---------------------------------------------------------------- schedules

namespace {

void check_generator(const ComplexMatrix& h, Index dim, const char* what) {
  require_hermitian(h, kHermiticityTol, what);
  if (h.rows() != dim) throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": generator dimension");
}

void check_duration(double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw Error(ErrorCode::InvalidArgument, "schedule duration must be positive");
  }
}

}  // namespace

HamiltonianSchedule HamiltonianSchedule::constant(ComplexMatrix h, double duration) {
  check_duration(duration);
  const Index dim = h.rows();
  check_generator(h, dim, "HamiltonianSchedule::constant");
  return HamiltonianSchedule(Constant{std::move(h)}, duration, dim);
}

HamiltonianSchedule HamiltonianSchedule::linear_ramp(ComplexMatrix h0, ComplexMatrix h1, double duration) {
  check_duration(duration);
  const Index dim = h0.rows();
  check_generator(h0, dim, "HamiltonianSchedule::linear_ramp");
  check_generator(h1, dim, "HamiltonianSchedule::linear_ramp");
  return HamiltonianSchedule(LinearRamp{std::move(h0), std::move(h1)}, duration, dim);
}

HamiltonianSchedule HamiltonianSchedule::piecewise(std::vector<Segment> segments) {
  if (segments.empty()) throw Error(ErrorCode::InvalidArgument, "piecewise schedule needs a segment");
  const Index dim = segments.front().h.rows();
  double total = 0.0;
  for (const auto& seg : segments) {
    check_duration(seg.duration);
    check_generator(seg.h, dim, "HamiltonianSchedule::piecewise");
    total += seg.duration;
  }
  return HamiltonianSchedule(Piecewise{std::move(segments)}, total, dim);
}

ComplexMatrix HamiltonianSchedule::evaluate(double t) const {
  t = std::clamp(t, 0.0, duration_);
  if (const auto* c = std::get_if<Constant>(&protocol_)) return c->h;
  if (const auto* r = std::get_if<LinearRamp>(&protocol_)) {
    const double s = t / duration_;
    return (1.0 - s) * r->h0 + s * r->h1;
  }
  const auto& segs = std::get<Piecewise>(protocol_).segments;
  double start = 0.0;
  for (const auto& seg : segs) {
    if (t < start + seg.duration) return seg.h;
    start += seg.duration;
  }
  return segs.back().h;
}

std::string_view HamiltonianSchedule::family() const noexcept {
  switch (protocol_.index()) {
    case 0: return "constant";
    case 1: return "linear-ramp";
    default: return "piecewise";
  }
}

bool HamiltonianSchedule::is_constant() const noexcept { return std::holds_alternative<Constant>(protocol_); }

HamiltonianSchedule HamiltonianSchedule::reversed() const {
  if (const auto* c = std::get_if<Constant>(&protocol_)) {
    return HamiltonianSchedule(Constant{-c->h}, duration_, dim_);
  }
  if (const auto* r = std::get_if<LinearRamp>(&protocol_)) {
    return HamiltonianSchedule(LinearRamp{-r->h1, -r->h0}, duration_, dim_);
  }
  auto segs = std::get<Piecewise>(protocol_).segments;
  std::reverse(segs.begin(), segs.end());
  for (auto& seg : segs) seg.h = -seg.h;
  return HamiltonianSchedule(Piecewise{std::move(segs)}, duration_, dim_);
}

// ---------------------------------------------------------------- dynamics

Probabilities born_probabilities(const DensityMatrix& state, const MeasurementSet& meas) {
  if (meas.dim() != state.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "born_probabilities: state and measurement dimensions differ");
  }
  const ComplexMatrix rho_t = state.matrix().transpose();
  Probabilities p;
  p.reserve(meas.size());
  double total = 0.0;
  for (const auto& m : meas.elements()) {
    const double raw = m.cwiseProduct(rho_t).sum().real();
    total += raw;
    p.push_back(std::clamp(raw, 0.0, 1.0));
  }
  if (std::abs(total - 1.0) > kStateTol) {
    throw Error(ErrorCode::InvalidState, "Born probabilities sum to " + std::to_string(total));
  }
  return p;
}

Trajectory Trajectory::with_measurement(MeasurementSet meas) const {
  Trajectory out{times, propagators, states, {}, hamiltonians, schedule, std::move(meas)};
  out.probabilities.reserve(states.size());
  for (const auto& s : out.states) out.probabilities.push_back(born_probabilities(s, out.measurement));
  return out;
}

Trajectory evolve_trajectory(const DensityMatrix& initial, const HamiltonianSchedule& schedule, int steps,
                             const MeasurementSet& meas) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "evolve_trajectory: steps must be >= 1");
  if (schedule.dim() != initial.dim() || meas.dim() != initial.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "evolve_trajectory: state, schedule and measurement dimensions differ");
  }
  const Index d = initial.dim();
  const double tau = schedule.duration();
  const double dt = tau / steps;
  const auto n = static_cast<std::size_t>(steps) + 1;

  Trajectory traj{{}, {}, {}, {}, {}, schedule, meas};
  traj.times.reserve(n);
  traj.propagators.reserve(n);
  traj.states.reserve(n);
  traj.probabilities.reserve(n);
  traj.hamiltonians.reserve(n);

  // Constant generators: U(t) = V e^{-i diag t} V^dagger directly, which equals the ordered product.
  std::optional<EigenSystem> fixed;
  if (schedule.is_constant()) fixed = hermitian_eigensystem(schedule.evaluate(0.0));

  ComplexMatrix u = identity(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (i + 1 == n) ? tau : static_cast<double>(i) * dt;
    if (i > 0) {
      if (fixed) {
        ComplexMatrix scaled = fixed->eigenvectors;
        for (Index j = 0; j < d; ++j) scaled.col(j) *= std::exp(-kI * (fixed->eigenvalues(j) * t));
        u = scaled * fixed->eigenvectors.adjoint();
      } else {
        const double t_prev = static_cast<double>(i - 1) * dt;
        u = unitary_step(schedule.evaluate(t_prev + 0.5 * dt), dt) * u;
      }
    }
    traj.times.push_back(t);
    traj.propagators.push_back(u);
    traj.states.push_back(i == 0 ? initial : initial.conjugated(u));
    traj.probabilities.push_back(born_probabilities(traj.states.back(), meas));
    traj.hamiltonians.push_back(schedule.evaluate(t));
  }
  return traj;
}

// ---------------------------------------------------------------- purification, reductions

namespace {

ComplexVector kron_vec(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexVector doubled_state(const EigenSystem& es, const std::vector<double>& weights) {
  const Index d = es.eigenvalues.size();
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (Index k = 0; k < d; ++k) {
    const double w = weights[static_cast<std::size_t>(k)];
    if (w <= 0.0) continue;
    psi += std::sqrt(w) * kron_vec(es.eigenvectors.col(k), es.eigenvectors.col(k).conjugate());
  }
  return psi / psi.norm();
}

}  // namespace

PureState purify(const DensityMatrix& state) {
  const EigenSystem es = hermitian_eigensystem(state.matrix());
  std::vector<double> weights(static_cast<std::size_t>(es.eigenvalues.size()));
  for (Index k = 0; k < es.eigenvalues.size(); ++k) weights[static_cast<std::size_t>(k)] = std::max(0.0, es.eigenvalues(k));
  return PureState::from_amplitudes(doubled_state(es, weights));
}

DensityMatrix partial_trace(const DensityMatrix& state, BipartiteDims dims, Subsystem keep) {
  if (dims.a < 1 || dims.b < 1 || dims.total() != state.dim()) {
    throw Error(ErrorCode::BadFactorization, "partial_trace: " + std::to_string(dims.a) + "x" +
                                                 std::to_string(dims.b) + " does not factor dimension " +
                                                 std::to_string(state.dim()));
  }
  const ComplexMatrix& rho = state.matrix();
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dims.a, dims.a);
    for (Index a = 0; a < dims.a; ++a)
      for (Index a2 = 0; a2 < dims.a; ++a2)
        for (Index b = 0; b < dims.b; ++b) out(a, a2) += rho(a * dims.b + b, a2 * dims.b + b);
    return DensityMatrix::from_matrix(out);
  }
  ComplexMatrix out = ComplexMatrix::Zero(dims.b, dims.b);
  for (Index b = 0; b < dims.b; ++b)
    for (Index b2 = 0; b2 < dims.b; ++b2)
      for (Index a = 0; a < dims.a; ++a) out(b, b2) += rho(a * dims.b + b, a * dims.b + b2);
  return DensityMatrix::from_matrix(out);
}

// ---------------------------------------------------------------- thermal

GibbsEnsemble gibbs_ensemble(const ComplexMatrix& h, double beta) {
  if (!(beta >= 0.0)) throw Error(ErrorCode::NegativeBeta, "inverse temperature must be >= 0");
  EigenSystem es = hermitian_eigensystem(h);
  const Index d = es.eigenvalues.size();
  const double ground = es.eigenvalues(d - 1);
  Probabilities w(static_cast<std::size_t>(d));
  double z = 0.0;
  for (Index k = 0; k < d; ++k) {
    const double x = std::isinf(beta) ? (es.eigenvalues(k) == ground ? 1.0 : 0.0)
                                      : std::exp(-beta * (es.eigenvalues(k) - ground));
    w[static_cast<std::size_t>(k)] = x;
    z += x;
  }
  for (auto& x : w) x /= z;
  return GibbsEnsemble{std::move(es), std::move(w)};
}

DensityMatrix thermal_state(const ComplexMatrix& h, double beta) {
  const GibbsEnsemble g = gibbs_ensemble(h, beta);
  ComplexMatrix scaled = g.spectrum.eigenvectors;
  for (Index k = 0; k < scaled.cols(); ++k) scaled.col(k) *= g.weights[static_cast<std::size_t>(k)];
  return DensityMatrix::from_matrix(scaled * g.spectrum.eigenvectors.adjoint());
}

PureState thermofield_double(const ComplexMatrix& h, double beta) {
  const GibbsEnsemble g = gibbs_ensemble(h, beta);
  return PureState::from_amplitudes(doubled_state(g.spectrum, g.weights));
}

// ---------------------------------------------------------------- random ensembles

PureState random_pure_state(Index dim, Rng& rng) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "random_pure_state: dim must be >= 1");
  ComplexVector v = complex_gaussian(dim, 1, rng).col(0);
  return PureState::from_amplitudes(v / v.norm());
}

DensityMatrix random_density_matrix(Index dim, Index rank, Rng& rng) {
  if (rank < 1 || rank > dim) {
    throw Error(ErrorCode::BadRank, "rank " + std::to_string(rank) + " outside [1, " + std::to_string(dim) + "]");
  }
  const ComplexMatrix g = complex_gaussian(dim, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::from_matrix(rho);
}

MeasurementSet povm_from_effects(std::span<const ComplexMatrix> effects) {
  if (effects.empty()) throw Error(ErrorCode::InvalidMeasurement, "no effects supplied");
  const Index d = effects.front().rows();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (const auto& a : effects) {
    require_hermitian(a, kHermiticityTol, "povm_from_effects");
    if (a.rows() != d) throw Error(ErrorCode::DimensionMismatch, "povm_from_effects: effect dimensions differ");
    total += a;
  }
  const EigenSystem es = hermitian_eigensystem(total);
  const double top = es.eigenvalues(0);
  const double bottom = es.eigenvalues(d - 1);
  if (!(top > 0.0) || bottom <= 1e-12 * top) {
    throw Error(ErrorCode::SingularNormalizer, "sum of effects is not invertible");
  }
  const ComplexMatrix inv_sqrt = spectral_function(es, [](double x) { return 1.0 / std::sqrt(x); });
  std::vector<ComplexMatrix> elements;
  elements.reserve(effects.size());
  for (const auto& a : effects) {
    ComplexMatrix m = inv_sqrt * a * inv_sqrt;
    elements.push_back(0.5 * (m + m.adjoint()));
  }
  const MeasurementKind kind = classify(elements);
  return MeasurementSet(std::move(elements), kind);
}

MeasurementSet random_povm(Index dim, int n_elements, Rng& rng) {
  if (n_elements < 2) throw Error(ErrorCode::InvalidArgument, "random_povm: need at least two elements");
  std::vector<ComplexMatrix> effects;
  effects.reserve(static_cast<std::size_t>(n_elements));
  for (int k = 0; k < n_elements; ++k) {
    const ComplexMatrix g = complex_gaussian(dim, dim, rng);
    effects.push_back(g * g.adjoint());
  }
  return povm_from_effects(effects);
}

MeasurementSet random_rank1_pvm(Index dim, Rng& rng) { return MeasurementSet::from_basis(haar_random_unitary(dim, rng)); }

// ---------------------------------------------------------------- channels

DensityMatrix apply_channel_B(const DensityMatrix& state, BipartiteDims dims, std::span<const ComplexMatrix> kraus) {
  if (dims.total() != state.dim()) throw Error(ErrorCode::BadFactorization, "apply_channel_B: bad factorization");
  if (kraus.empty()) throw Error(ErrorCode::NotTracePreserving, "apply_channel_B: no Kraus operators");
  ComplexMatrix completeness = ComplexMatrix::Zero(dims.b, dims.b);
  for (const auto& k : kraus) {
    if (k.rows() != dims.b || k.cols() != dims.b) {
      throw Error(ErrorCode::DimensionMismatch, "apply_channel_B: Kraus operator must act on B");
    }
    completeness += k.adjoint() * k;
  }
  if (max_abs(completeness - identity(dims.b)) > kStateTol) {
    throw Error(ErrorCode::NotTracePreserving, "sum K^dagger K differs from identity");
  }
  const ComplexMatrix id_a = identity(dims.a);
  ComplexMatrix out = ComplexMatrix::Zero(state.dim(), state.dim());
  for (const auto& k : kraus) {
    const ComplexMatrix lifted = kron(id_a, k);
    out += lifted * state.matrix() * lifted.adjoint();
  }
  return DensityMatrix::from_matrix(out);
}

std::vector<ComplexMatrix> dephasing_kraus(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "dephasing strength must lie in [0,1]");
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return {std::sqrt(1.0 - p) * identity(2), std::sqrt(p) * p0, std::sqrt(p) * p1};
}

std::vector<ComplexMatrix> depolarizing_kraus(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "depolarizing strength must lie in [0,1]");
  const double q = std::sqrt(p / 4.0);
  return {std::sqrt(1.0 - 0.75 * p) * identity(2), q * pauli_x(), q * pauli_y(), q * pauli_z()};
}

}  // namespace qsl
