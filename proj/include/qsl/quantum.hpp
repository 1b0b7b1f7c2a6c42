#pragma once

// Physical data model: density matrices, measurements, Hamiltonian schedules,
// trajectories, purification, thermal states and channels on a subsystem.
//
// Bipartite convention: composite index = a * dim_b + b (A-major), i.e. the
// operator on A is the left Kronecker factor.

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsl/matrixcore.hpp"

namespace qsl {

using Probabilities = std::vector<double>;

inline constexpr double kStateTol = 1e-9;
inline constexpr double kNegativityClip = 1e-10;

/// Unit-trace positive-semidefinite Hermitian operator.
class DensityMatrix {
 public:
  /// Validates Hermiticity and unit trace (within kStateTol). Eigenvalues in
  /// [-kNegativityClip, 0) are clipped to zero and the trace renormalized;
  /// more negative eigenvalues are rejected.
  static DensityMatrix from_matrix(const ComplexMatrix& m);
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(Index dim);

  Index dim() const noexcept { return rho_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return rho_; }
  double purity() const;

  /// U rho U^dagger. Unitary conjugation keeps the state valid, so no re-validation.
  DensityMatrix conjugated(const ComplexMatrix& u) const;

 private:
  explicit DensityMatrix(ComplexMatrix m) : rho_(std::move(m)) {}
  ComplexMatrix rho_;
};

/// Normalized state vector.
class PureState {
 public:
  static PureState from_amplitudes(const ComplexVector& amplitudes);

  Index dim() const noexcept { return psi_.size(); }
  const ComplexVector& amplitudes() const noexcept { return psi_; }
  DensityMatrix density() const { return DensityMatrix::pure(psi_); }

 private:
  explicit PureState(ComplexVector psi) : psi_(std::move(psi)) {}
  ComplexVector psi_;
};

enum class MeasurementKind { Povm, Pvm, Rank1Pvm };

std::string_view to_string(MeasurementKind kind) noexcept;

/// Ordered POVM {M_k}. The kind flag is checked on construction.
class MeasurementSet {
 public:
  MeasurementSet(std::vector<ComplexMatrix> elements, MeasurementKind kind);

  /// Rank-1 PVM built from the columns of a unitary.
  static MeasurementSet from_basis(const ComplexMatrix& basis);
  static MeasurementSet computational(Index dim);

  Index dim() const noexcept { return elements_.front().rows(); }
  std::size_t size() const noexcept { return elements_.size(); }
  MeasurementKind kind() const noexcept { return kind_; }
  bool is_projective() const noexcept { return kind_ != MeasurementKind::Povm; }
  const std::vector<ComplexMatrix>& elements() const noexcept { return elements_; }
  const ComplexMatrix& operator[](std::size_t k) const { return elements_.at(k); }

  /// {M_k (x) I_ancilla}. A rank-1 PVM lifts to a PVM.
  MeasurementSet lifted(Index ancilla_dim) const;

 private:
  std::vector<ComplexMatrix> elements_;
  MeasurementKind kind_;
};

/// Time-dependent Hermitian generator H[gamma(t)] on [0, duration] (hbar = 1).
class HamiltonianSchedule {
 public:
  struct Segment {
    ComplexMatrix h;
    double duration;
  };

  static HamiltonianSchedule constant(ComplexMatrix h, double duration);
  /// H(t) = (1 - t/duration) h0 + (t/duration) h1.
  static HamiltonianSchedule linear_ramp(ComplexMatrix h0, ComplexMatrix h1, double duration);
  static HamiltonianSchedule piecewise(std::vector<Segment> segments);

  /// Evaluated at t clamped to [0, duration]; piecewise schedules are right-continuous.
  ComplexMatrix evaluate(double t) const;
  double duration() const noexcept { return duration_; }
  Index dim() const noexcept { return dim_; }
  std::string_view family() const noexcept;
  bool is_constant() const noexcept;

  /// Time-reversed drive: H_rev(t) = -H(duration - t), undoing the evolution.
  HamiltonianSchedule reversed() const;

 private:
  struct Constant {
    ComplexMatrix h;
  };
  struct LinearRamp {
    ComplexMatrix h0, h1;
  };
  struct Piecewise {
    std::vector<Segment> segments;
  };
  using Protocol = std::variant<Constant, LinearRamp, Piecewise>;

  HamiltonianSchedule(Protocol protocol, double duration, Index dim)
      : protocol_(std::move(protocol)), duration_(duration), dim_(dim) {}

  Protocol protocol_;
  double duration_;
  Index dim_;
};

/// Sampled unitary evolution with Born probabilities of an attached measurement.
struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> propagators;
  std::vector<DensityMatrix> states;
  std::vector<Probabilities> probabilities;
  std::vector<ComplexMatrix> hamiltonians;  // H(t_i) on the grid
  HamiltonianSchedule schedule;
  MeasurementSet measurement;

  std::size_t size() const noexcept { return times.size(); }
  double duration() const noexcept { return times.empty() ? 0.0 : times.back() - times.front(); }

  /// Same dynamics, probabilities recomputed for another measurement.
  Trajectory with_measurement(MeasurementSet meas) const;
};

struct BipartiteDims {
  Index a;
  Index b;
  Index total() const noexcept { return a * b; }
};

enum class Subsystem { A, B };

Probabilities born_probabilities(const DensityMatrix& state, const MeasurementSet& meas);

/// Ordered product of midpoint factors exp(-i H(t_i + dt/2) dt); exact for constant H.
Trajectory evolve_trajectory(const DensityMatrix& initial, const HamiltonianSchedule& schedule, int steps,
                             const MeasurementSet& meas);

/// sum_k sqrt(lambda_k) |v_k> (x) |conj v_k>, ancilla dimension = system dimension.
PureState purify(const DensityMatrix& state);

DensityMatrix partial_trace(const DensityMatrix& state, BipartiteDims dims, Subsystem keep);

struct GibbsEnsemble {
  EigenSystem spectrum;     // eigenbasis of H, energies descending
  Probabilities weights;    // e^{-beta E_k}/Z aligned with spectrum columns
};

GibbsEnsemble gibbs_ensemble(const ComplexMatrix& h, double beta);
DensityMatrix thermal_state(const ComplexMatrix& h, double beta);
/// sum_k sqrt(w_k) |E_k> (x) |conj E_k>; tr_ancilla gives thermal_state(h, beta).
PureState thermofield_double(const ComplexMatrix& h, double beta);

PureState random_pure_state(Index dim, Rng& rng);
/// Hilbert-Schmidt-induced state: G G^dagger / tr with G a dim x rank complex Gaussian.
DensityMatrix random_density_matrix(Index dim, Index rank, Rng& rng);
/// M_k = S^{-1/2} A_k S^{-1/2}, S = sum_k A_k.
MeasurementSet povm_from_effects(std::span<const ComplexMatrix> effects);
MeasurementSet random_povm(Index dim, int n_elements, Rng& rng);
MeasurementSet random_rank1_pvm(Index dim, Rng& rng);

/// sum_j (I_A (x) K_j) rho (I_A (x) K_j)^dagger.
DensityMatrix apply_channel_B(const DensityMatrix& state, BipartiteDims dims, std::span<const ComplexMatrix> kraus);

/// Qubit dephasing rho -> (1-p) rho + p diag(rho): off-diagonals scale by 1 - p.
std::vector<ComplexMatrix> dephasing_kraus(double p);
/// Qubit depolarizing rho -> (1-p) rho + p I/2.
std::vector<ComplexMatrix> depolarizing_kraus(double p);

}  // namespace qsl
