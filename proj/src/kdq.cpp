#include "qsl/kdq.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qsl {

KDTable::KDTable(DensityMatrix state, MeasurementSet meas, MeasurementSet basis, ComplexMatrix values)
    : state_(std::move(state)), meas_(std::move(meas)), basis_(std::move(basis)), values_(std::move(values)) {}

Probabilities KDTable::marginal() const {
  Probabilities p(static_cast<std::size_t>(values_.cols()));
  for (Index k = 0; k < values_.cols(); ++k) p[static_cast<std::size_t>(k)] = values_.col(k).sum().real();
  return p;
}

KDTable kd_table(const DensityMatrix& state, const MeasurementSet& meas, const MeasurementSet& basis) {
  if (meas.dim() != state.dim() || basis.dim() != state.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "kd_table: state, measurement and basis dimensions differ");
  }
  if (basis.kind() != MeasurementKind::Rank1Pvm) {
    throw Error(ErrorCode::NotRank1PVM, "kd_table: reference basis must be a rank-1 PVM");
  }
  const auto n_mu = static_cast<Index>(basis.size());
  const auto n_k = static_cast<Index>(meas.size());
  ComplexMatrix values(n_mu, n_k);
  for (Index k = 0; k < n_k; ++k) {
    // tr{Pi_mu M_k rho} = sum_ij (Pi_mu)_ij (M_k rho)_ji
    const ComplexMatrix m_rho_t = (meas[static_cast<std::size_t>(k)] * state.matrix()).transpose();
    for (Index mu = 0; mu < n_mu; ++mu) values(mu, k) = basis[static_cast<std::size_t>(mu)].cwiseProduct(m_rho_t).sum();
  }
  return KDTable(state, meas, basis, std::move(values));
}

double nonreality(const KDTable& table, Index k) {
  if (k < 0 || k >= table.values().cols()) {
    throw Error(ErrorCode::IndexOutOfRange, "nonreality: outcome index " + std::to_string(k) + " out of range");
  }
  return table.values().col(k).imag().cwiseAbs().sum();
}

NonrealityOptimum max_nonreality_exact(const DensityMatrix& state, const ComplexMatrix& element) {
  require_hermitian(element, kHermiticityTol, "max_nonreality_exact");
  if (element.rows() != state.dim()) throw Error(ErrorCode::DimensionMismatch, "max_nonreality_exact: dimensions differ");
  // Im tr{Pi M rho} = tr{Pi (-i/2)[M, rho]}; in the eigenbasis of the Hermitian
  // operator -i[M, rho] the sum of |diagonal| reaches the trace norm.
  const ComplexMatrix k_op = -kI * commutator(element, state.matrix());
  const EigenSystem es = hermitian_eigensystem(k_op, std::numeric_limits<double>::infinity());
  const double value = 0.5 * es.eigenvalues.cwiseAbs().sum();
  return NonrealityOptimum{value, MeasurementSet::from_basis(es.eigenvectors)};
}

NonrealityOptimum max_nonreality_search(const DensityMatrix& state, const ComplexMatrix& element, Rng& rng,
                                        const SearchBudget& budget) {
  require_hermitian(element, kHermiticityTol, "max_nonreality_search");
  if (element.rows() != state.dim()) throw Error(ErrorCode::DimensionMismatch, "max_nonreality_search: dimensions differ");
  const ComplexMatrix m_rho = element * state.matrix();
  auto objective = [&](const ComplexMatrix& u) {
    double total = 0.0;
    for (Index mu = 0; mu < u.cols(); ++mu) {
      const Complex kd = u.col(mu).adjoint() * m_rho * u.col(mu);
      total += std::abs(kd.imag());
    }
    return total;
  };
  SearchResult found = unitary_search(state.dim(), objective, rng, budget, /*maximize=*/true);
  return NonrealityOptimum{found.value, MeasurementSet::from_basis(found.basis)};
}

double uncertainty_from_kd(const DensityMatrix& state, const MeasurementSet& meas) {
  if (meas.dim() != state.dim()) throw Error(ErrorCode::DimensionMismatch, "uncertainty_from_kd: dimensions differ");
  double total = 0.0;
  for (const auto& m : meas.elements()) total += max_nonreality_exact(state, m).value;
  return total;
}

}  // namespace qsl
