#pragma once

// Single-qubit closed forms: Bloch parametrization, l1 coherence in a basis,
// the Pauli generator that maximizes the probability speed, and the
// complementarity of the speeds in the three mutually unbiased bases.

#include <array>

#include "qsl/quantum.hpp"

namespace qsl {

struct BlochVector {
  std::array<double, 3> r{0.0, 0.0, 0.0};

  double norm() const;
};

/// Orthonormal qubit basis {|k0>, |k1>}.
class QubitBasis {
 public:
  QubitBasis(ComplexVector k0, ComplexVector k1);

  /// |x+-> = (|0> +- |1>)/sqrt2, |y+-> = (|0> +- i|1>)/sqrt2, |z+> = |0>.
  static QubitBasis x();
  static QubitBasis y();
  static QubitBasis z();

  const ComplexVector& k0() const noexcept { return k0_; }
  const ComplexVector& k1() const noexcept { return k1_; }
  /// Columns k0, k1.
  ComplexMatrix unitary() const;
  MeasurementSet pvm() const;

 private:
  ComplexVector k0_;
  ComplexVector k1_;
};

BlochVector bloch_vector(const DensityMatrix& state);
DensityMatrix state_from_bloch(const BlochVector& r);

/// 2 |<k0| rho |k1>|.
double l1_coherence(const DensityMatrix& state, const QubitBasis& basis);

struct OptimalGenerator {
  ComplexMatrix h;        // n.sigma expressed in the computational basis, eigenvalues +-1
  double alpha;           // polar angle of n relative to the basis frame
  double beta;            // azimuthal angle, pi/2 - arg<k0|rho|k1>
  double achieved_speed;  // probability_speed_exact with the basis PVM
};

/// In the basis frame the optimum is H = cos(beta) X + sin(beta) Y. Zero
/// coherence leaves the phase undefined; beta = pi/2 is returned then.
OptimalGenerator optimal_generator(const DensityMatrix& state, const QubitBasis& basis);

struct Complementarity {
  double vx2;
  double vy2;
  double vz2;
  double twice_r2;

  double sum() const { return vx2 + vy2 + vz2; }
};

Complementarity mub_complementarity(const DensityMatrix& state);

}  // namespace qsl
