#pragma once

#include <cmath>
#include <limits>

#include "qsl/kdq.hpp"

namespace qsl {

namespace detail {

inline ComplexMatrix random_rotation(Index dim, double step, Rng& rng) {
  ComplexMatrix g = random_hermitian(dim, rng);
  const double norm = g.norm();
  if (norm > 0.0) g /= norm;
  return unitary_step(g, -step);  // exp(+i step G)
}

}  // namespace detail

template <class Objective>
SearchResult unitary_search(Index dim, Objective&& objective, Rng& rng, const SearchBudget& budget, bool maximize) {
  if (budget.restarts < 1 || budget.iterations < 1) {
    throw Error(ErrorCode::InvalidArgument, "search budget needs restarts >= 1 and iterations >= 1");
  }
  const double sign = maximize ? 1.0 : -1.0;
  const std::uint64_t base = rng();

  SearchResult out{-std::numeric_limits<double>::infinity() * sign, ComplexMatrix(), {}};
  out.best_per_restart.reserve(static_cast<std::size_t>(budget.restarts));
  for (int r = 0; r < budget.restarts; ++r) {
    Rng local(derive_seed(base, 0x5EA2C4ULL, static_cast<std::uint64_t>(r)));
    ComplexMatrix u = haar_random_unitary(dim, local);
    double best = objective(u);
    const double ratio = budget.iterations > 1
                             ? std::pow(budget.final_step / budget.initial_step, 1.0 / (budget.iterations - 1))
                             : 1.0;
    double step = budget.initial_step;
    for (int it = 0; it < budget.iterations; ++it, step *= ratio) {
      ComplexMatrix trial = detail::random_rotation(dim, step, local) * u;
      const double value = objective(trial);
      if (sign * value > sign * best) {
        best = value;
        u = std::move(trial);
      }
    }
    out.best_per_restart.push_back(best);
    if (r == 0 || sign * best > sign * out.value) {
      out.value = best;
      out.basis = u;
    }
  }
  return out;
}

}  // namespace qsl
