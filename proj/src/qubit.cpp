#include "qsl/qubit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qsl/speedlimit.hpp"

namespace qsl {

namespace {

constexpr double kBasisTol = 1e-10;
constexpr double kBallTol = 1e-9;

void require_qubit(const DensityMatrix& state, const char* what) {
  if (state.dim() != 2) {
    throw Error(ErrorCode::NotQubit, std::string(what) + ": dimension " + std::to_string(state.dim()) + " is not 2");
  }
}

ComplexVector vec2(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

QubitBasis::QubitBasis(ComplexVector k0, ComplexVector k1) : k0_(std::move(k0)), k1_(std::move(k1)) {
  if (k0_.size() != 2 || k1_.size() != 2) throw Error(ErrorCode::NotQubit, "QubitBasis: vectors must have two entries");
  if (std::abs(k0_.norm() - 1.0) > kBasisTol || std::abs(k1_.norm() - 1.0) > kBasisTol ||
      std::abs(k0_.dot(k1_)) > kBasisTol) {
    throw Error(ErrorCode::InvalidMeasurement, "QubitBasis: vectors are not orthonormal");
  }
}

QubitBasis QubitBasis::x() {
  const double s = std::numbers::sqrt2 / 2.0;
  return QubitBasis(vec2(s, s), vec2(s, -s));
}

QubitBasis QubitBasis::y() {
  const double s = std::numbers::sqrt2 / 2.0;
  return QubitBasis(vec2(s, kI * s), vec2(s, -kI * s));
}

QubitBasis QubitBasis::z() { return QubitBasis(vec2(1.0, 0.0), vec2(0.0, 1.0)); }

ComplexMatrix QubitBasis::unitary() const {
  ComplexMatrix u(2, 2);
  u.col(0) = k0_;
  u.col(1) = k1_;
  return u;
}

MeasurementSet QubitBasis::pvm() const { return MeasurementSet::from_basis(unitary()); }

BlochVector bloch_vector(const DensityMatrix& state) {
  require_qubit(state, "bloch_vector");
  const ComplexMatrix& rho = state.matrix();
  BlochVector b;
  b.r[0] = (rho * pauli_x()).trace().real();
  b.r[1] = (rho * pauli_y()).trace().real();
  b.r[2] = (rho * pauli_z()).trace().real();
  return b;
}

DensityMatrix state_from_bloch(const BlochVector& b) {
  for (double c : b.r) {
    if (!std::isfinite(c)) throw Error(ErrorCode::NonFinite, "state_from_bloch: non-finite component");
  }
  if (b.norm() > 1.0 + kBallTol) {
    throw Error(ErrorCode::OutsideBall, "state_from_bloch: |r| = " + std::to_string(b.norm()) + " exceeds 1");
  }
  // Round-off just outside the unit sphere is pulled back onto it.
  const double scale = b.norm() > 1.0 ? 1.0 / b.norm() : 1.0;
  const ComplexMatrix rho =
      0.5 * (identity(2) + scale * (b.r[0] * pauli_x() + b.r[1] * pauli_y() + b.r[2] * pauli_z()));
  return DensityMatrix::from_matrix(rho);
}

double l1_coherence(const DensityMatrix& state, const QubitBasis& basis) {
  require_qubit(state, "l1_coherence");
  const Complex off = basis.k0().dot(state.matrix() * basis.k1());
  return 2.0 * std::abs(off);
}

OptimalGenerator optimal_generator(const DensityMatrix& state, const QubitBasis& basis) {
  require_qubit(state, "optimal_generator");
  const Complex off = basis.k0().dot(state.matrix() * basis.k1());
  const double alpha = std::numbers::pi / 2.0;
  const double beta = std::abs(off) > 0.0 ? std::numbers::pi / 2.0 - std::arg(off) : std::numbers::pi / 2.0;

  // n.sigma in the basis frame, then rotated into computational coordinates.
  const ComplexMatrix local = std::sin(alpha) * std::cos(beta) * pauli_x() + std::sin(alpha) * std::sin(beta) * pauli_y() +
                              std::cos(alpha) * pauli_z();
  const ComplexMatrix u = basis.unitary();
  ComplexMatrix h = u * local * u.adjoint();
  h = 0.5 * (h + h.adjoint()).eval();
  const double speed = probability_speed_exact(state, h, basis.pvm());
  return OptimalGenerator{std::move(h), alpha, beta, speed};
}

Complementarity mub_complementarity(const DensityMatrix& state) {
  require_qubit(state, "mub_complementarity");
  const double vx = l1_coherence(state, QubitBasis::x());
  const double vy = l1_coherence(state, QubitBasis::y());
  const double vz = l1_coherence(state, QubitBasis::z());
  const double r = bloch_vector(state).norm();
  return Complementarity{vx * vx, vy * vy, vz * vz, 2.0 * r * r};
}

}  // namespace qsl
