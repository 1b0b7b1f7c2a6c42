#pragma once

// Local quantum uncertainty of a bipartite state under rank-1 PVMs on A and
// its infimum Q_A, a witness of quantum correlations that reduces to an
// entanglement monotone on pure states.

#include <optional>
#include <span>
#include <vector>

#include "qsl/kdq.hpp"
#include "qsl/quantum.hpp"

namespace qsl {

class BipartiteState {
 public:
  BipartiteState(DensityMatrix state, BipartiteDims dims);

  const DensityMatrix& state() const noexcept { return state_; }
  BipartiteDims dims() const noexcept { return dims_; }

 private:
  DensityMatrix state_;
  BipartiteDims dims_;
};

struct CorrelationReport {
  double value;
  MeasurementSet optimal_pvm;              // best local rank-1 PVM on A found
  std::vector<double> best_per_restart;
  std::optional<double> closed_form;       // set when the joint state is pure
};

/// Cooling runs far below the kdq default: the minima of the local
/// uncertainty are kinks, so the final step size bounds the attainable gap.
inline constexpr SearchBudget kCorrelationBudget{20, 800, 0.3, 1e-8};

/// sum_k ||[Pi_k (x) I_B, rho_AB]||_1 / 2.
double local_uncertainty(const BipartiteState& state, const MeasurementSet& local_pvm);

/// Best-found infimum of local_uncertainty over rank-1 PVMs on A.
CorrelationReport correlation_Q(const BipartiteState& state, Rng& rng, const SearchBudget& budget = kCorrelationBudget);

/// sum_i sqrt(lambda_i - lambda_i^2) over the spectrum of rho_A.
double pure_state_Q(const PureState& psi, BipartiteDims dims);

/// sum_k p_k Pi_k (x) sigma_k.
BipartiteState classical_quantum_state(std::span<const double> probs, const MeasurementSet& local_pvm,
                                       std::span<const DensityMatrix> sigmas);

}  // namespace qsl
