#pragma once

#include "evid/jet.hpp"
#include "evid/poly.hpp"
#include "evid/scalar.hpp"

#include <span>
#include <utility>
#include <vector>

namespace evid {

/// One-form sum_l g_l du^l given by its nonzero coefficients.
template <typename F> using OneForm = std::vector<std::pair<std::size_t, F>>;

/// Integrates a closed one-form over the variables `vars`, treating every
/// other variable as a parameter. The result F satisfies dF/du^l = g_l for
/// l in vars and vanishes when all of vars are set to zero. Closedness
/// (d_k g_l = d_l g_k for k, l in vars) is checked first; a failure raises
/// NotClosed with the pair (k, l) and the residual d_k g_l - d_l g_k.
Poly homotopy_integrate(const OneForm<Poly>& omega, std::span<const std::size_t> vars);

/// Same on the polynomial backend of ScalarFn.
ScalarFn homotopy_integrate(const OneForm<ScalarFn>& omega, std::span<const std::size_t> vars);

/// Jet version centred at the jet base point: F vanishes on the slice where
/// the listed coordinates equal their base values. The result has order one
/// higher than the lowest input order. The closedness check is skipped when
/// `closed_tol` is negative; otherwise coefficients of the closedness defect
/// larger than closed_tol raise NotClosed.
template <typename T>
Jet<T> homotopy_integrate(const OneForm<Jet<T>>& omega, std::span<const std::size_t> vars, double closed_tol = -1.0);

}  // namespace evid
