#include "qsl/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qsl {

namespace {

constexpr double kPureTol = 1e-9;

double lifted_uncertainty(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& lifted) {
  double total = 0.0;
  for (const auto& m : lifted) total += skew_hermitian_trace_norm(commutator(m, rho));
  return 0.5 * total;
}

}  // namespace

BipartiteState::BipartiteState(DensityMatrix state, BipartiteDims dims) : state_(std::move(state)), dims_(dims) {
  if (dims_.a < 1 || dims_.b < 1 || dims_.total() != state_.dim()) {
    throw Error(ErrorCode::BadFactorization, "BipartiteState: " + std::to_string(dims_.a) + "x" +
                                                 std::to_string(dims_.b) + " does not factor dimension " +
                                                 std::to_string(state_.dim()));
  }
}

double local_uncertainty(const BipartiteState& state, const MeasurementSet& local_pvm) {
  if (local_pvm.dim() != state.dims().a) throw Error(ErrorCode::DimensionMismatch, "local_uncertainty: PVM is not on A");
  if (local_pvm.kind() != MeasurementKind::Rank1Pvm) {
    throw Error(ErrorCode::NotRank1PVM, "local_uncertainty: local measurement must be a rank-1 PVM");
  }
  return lifted_uncertainty(state.state().matrix(), local_pvm.lifted(state.dims().b).elements());
}

CorrelationReport correlation_Q(const BipartiteState& state, Rng& rng, const SearchBudget& budget) {
  const BipartiteDims dims = state.dims();
  const ComplexMatrix& rho = state.state().matrix();
  const ComplexMatrix id_b = identity(dims.b);
  std::vector<ComplexMatrix> lifted(static_cast<std::size_t>(dims.a));
  auto objective = [&](const ComplexMatrix& u) {
    for (Index k = 0; k < dims.a; ++k) lifted[static_cast<std::size_t>(k)] = kron(projector(u.col(k)), id_b);
    return lifted_uncertainty(rho, lifted);
  };
  SearchResult found = unitary_search(dims.a, objective, rng, budget, /*maximize=*/false);

  CorrelationReport report{std::max(0.0, found.value), MeasurementSet::from_basis(found.basis),
                           std::move(found.best_per_restart), std::nullopt};
  if (state.state().purity() > 1.0 - kPureTol) {
    const EigenSystem es = hermitian_eigensystem(rho);
    report.closed_form = pure_state_Q(PureState::from_amplitudes(es.eigenvectors.col(0)), dims);
  }
  return report;
}

double pure_state_Q(const PureState& psi, BipartiteDims dims) {
  if (dims.a < 1 || dims.b < 1 || dims.total() != psi.dim()) {
    throw Error(ErrorCode::BadFactorization, "pure_state_Q: dimensions do not factor the state");
  }
  const DensityMatrix reduced = partial_trace(psi.density(), dims, Subsystem::A);
  const RealVector lambda = hermitian_eigenvalues(reduced.matrix());
  double total = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) {
    const double l = lambda(i);
    total += std::sqrt(std::max(0.0, l - l * l));
  }
  return total;
}

BipartiteState classical_quantum_state(std::span<const double> probs, const MeasurementSet& local_pvm,
                                       std::span<const DensityMatrix> sigmas) {
  if (probs.size() != local_pvm.size() || sigmas.size() != probs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "classical_quantum_state: probabilities, PVM and sigmas differ in count");
  }
  if (local_pvm.kind() != MeasurementKind::Rank1Pvm) {
    throw Error(ErrorCode::NotRank1PVM, "classical_quantum_state: local measurement must be a rank-1 PVM");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= -kNegativityClip) || p > 1.0 + kNegativityClip) {
      throw Error(ErrorCode::NotNormalized, "classical_quantum_state: probability outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStateTol) throw Error(ErrorCode::NotNormalized, "classical_quantum_state: probabilities do not sum to 1");
  const Index db = sigmas.front().dim();
  for (const auto& s : sigmas) {
    if (s.dim() != db) throw Error(ErrorCode::DimensionMismatch, "classical_quantum_state: sigmas differ in dimension");
  }
  const Index da = local_pvm.dim();
  ComplexMatrix rho = ComplexMatrix::Zero(da * db, da * db);
  for (std::size_t k = 0; k < probs.size(); ++k) rho += std::max(0.0, probs[k]) * kron(local_pvm[k], sigmas[k].matrix());
  return BipartiteState(DensityMatrix::from_matrix(rho), {da, db});
}

}  // namespace qsl
