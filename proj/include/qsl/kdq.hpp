#pragma once

// Kirkwood-Dirac quasiprobabilities Pr(mu, k | rho) = tr{Pi_mu M_k rho} and
// their nonreality. The supremum of the nonreality over rank-1 PVMs is
// available two ways: exactly, through the eigenbasis of the normal operator
// [M_k, rho], and by a seeded stochastic search over bases that never looks
// at the commutator spectrum.

#include <vector>

#include "qsl/quantum.hpp"

namespace qsl {

class KDTable {
 public:
  KDTable(DensityMatrix state, MeasurementSet meas, MeasurementSet basis, ComplexMatrix values);

  /// Rows index the rank-1 basis (mu), columns index the POVM outcome (k).
  const ComplexMatrix& values() const noexcept { return values_; }
  Complex operator()(Index mu, Index k) const { return values_(mu, k); }
  Complex total() const { return values_.sum(); }
  /// Sum over mu, equal to the Born probabilities of the POVM.
  Probabilities marginal() const;

  const DensityMatrix& state() const noexcept { return state_; }
  const MeasurementSet& measurement() const noexcept { return meas_; }
  const MeasurementSet& basis() const noexcept { return basis_; }

 private:
  DensityMatrix state_;
  MeasurementSet meas_;
  MeasurementSet basis_;
  ComplexMatrix values_;
};

KDTable kd_table(const DensityMatrix& state, const MeasurementSet& meas, const MeasurementSet& basis);

/// sum_mu |Im Pr(mu, k)|.
double nonreality(const KDTable& table, Index k);

struct NonrealityOptimum {
  double value;
  MeasurementSet basis;  // rank-1 PVM attaining (or best found for) the value
};

NonrealityOptimum max_nonreality_exact(const DensityMatrix& state, const ComplexMatrix& element);

/// Restart budget and cooling schedule for the basis searches.
struct SearchBudget {
  int restarts = 20;
  int iterations = 500;
  double initial_step = 0.3;
  double final_step = 1e-3;
};

struct SearchResult {
  double value;
  ComplexMatrix basis;                    // columns of the best basis found
  std::vector<double> best_per_restart;
};

/// Accept-if-better random search over unitaries. Restart r starts from a
/// Haar sample and perturbs by exp(i s G), G a unit-Frobenius GUE direction,
/// with s cooled geometrically from initial_step to final_step. Restart seeds
/// are derived from one draw of `rng`; merge takes the max value, ties to the
/// lowest restart index.
template <class Objective>
SearchResult unitary_search(Index dim, Objective&& objective, Rng& rng, const SearchBudget& budget, bool maximize);

NonrealityOptimum max_nonreality_search(const DensityMatrix& state, const ComplexMatrix& element, Rng& rng,
                                        const SearchBudget& budget = {});

/// sum_k sup_{Pi} sum_mu |Im Pr(mu, k)| through the exact route.
double uncertainty_from_kd(const DensityMatrix& state, const MeasurementSet& meas);

}  // namespace qsl

#include "qsl/detail/unitary_search.hpp"
