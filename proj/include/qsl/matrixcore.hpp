#pragma once

// Dense complex-matrix primitives: Hermitian eigensystems (cyclic complex
// Jacobi), singular values, Schatten norms, commutators, exact short-time
// propagators and Haar-random unitaries. Dimensions are small (d <= 64),
// so everything favours accuracy over asymptotic speed.

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "qsl/error.hpp"

namespace qsl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

inline constexpr Complex kI{0.0, 1.0};

inline constexpr double kHermiticityTol = 1e-9;
inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kPsdClipTol = 1e-12;

/// Order p of a Schatten norm, p in [1, inf].
class NormOrder {
 public:
  static NormOrder finite(double p);
  static NormOrder infinity() noexcept;
  /// Accepts "1", "2", "inf"/"infinity" or any decimal >= 1.
  static NormOrder parse(const std::string& text);

  bool is_infinite() const noexcept;
  double value() const noexcept { return p_; }

  /// Hoelder conjugate. Only the pairs (1,inf), (2,2), (inf,1) are exposed.
  NormOrder conjugate() const;

  std::string to_string() const;

  friend bool operator==(NormOrder, NormOrder) = default;

 private:
  explicit NormOrder(double p) : p_(p) {}
  double p_;
};

struct EigenSystem {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors; // columns, orthonormal
};

// Validation helpers.
void require_square(const ComplexMatrix& a, const char* what);
void require_finite(const ComplexMatrix& a, const char* what);
void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what);
void require_hermitian(const ComplexMatrix& a, double tol, const char* what);

double max_abs(const ComplexMatrix& a);
double hermiticity_defect(const ComplexMatrix& a);
double unitarity_defect(const ComplexMatrix& u);

EigenSystem hermitian_eigensystem(const ComplexMatrix& a, double hermiticity_tol = kHermiticityTol);
/// Same solver without accumulating eigenvectors.
RealVector hermitian_eigenvalues(const ComplexMatrix& a, double hermiticity_tol = kHermiticityTol);

/// V f(diag) V^dagger for a real function of the spectrum.
template <class F>
ComplexMatrix spectral_function(const EigenSystem& es, F&& f) {
  const Index n = es.eigenvalues.size();
  ComplexMatrix scaled = es.eigenvectors;
  for (Index j = 0; j < n; ++j) scaled.col(j) *= f(es.eigenvalues(j));
  return scaled * es.eigenvectors.adjoint();
}

RealVector singular_values(const ComplexMatrix& a);
double schatten_norm(const ComplexMatrix& a, NormOrder p);
/// Schatten norms of a skew-Hermitian (hence normal) operator from the spectrum
/// of -iC: a d x d problem instead of the 2d x 2d dilation.
double skew_hermitian_schatten_norm(const ComplexMatrix& c, NormOrder p);
double skew_hermitian_trace_norm(const ComplexMatrix& c);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// exp(-i H dt) from the eigendecomposition of H.
ComplexMatrix unitary_step(const ComplexMatrix& h, double dt, double hermiticity_tol = kHermiticityTol);

ComplexMatrix haar_random_unitary(Index dim, Rng& rng);

// Constructors for common operators.
ComplexMatrix identity(Index dim);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix projector(const ComplexVector& v);

/// i.i.d. complex Gaussian entries with E|z|^2 = 1.
ComplexMatrix complex_gaussian(Index rows, Index cols, Rng& rng);
/// GUE sample (G + G^dagger)/2.
ComplexMatrix random_hermitian(Index dim, Rng& rng);

/// Counter-based seed derivation (splitmix64 finalizer over master, stream, counter).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t counter) noexcept;

}  // namespace qsl
