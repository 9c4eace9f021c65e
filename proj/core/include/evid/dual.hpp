#pragma once

#include "evid/block_algebra.hpp"
#include "evid/calculus.hpp"
#include "evid/ei_solver.hpp"

#include <vector>

namespace evid {

/// Per block alpha, the components a_{2(a)}, ..., a_{m_a(a)} of the generator
/// v2 = sum a_{i(a)} d_{i(a)}; a[alpha-1][i-2] is a_{i(alpha)}.
using GeneratorComponents = std::vector<std::vector<ScalarFn>>;

struct DualFrame {
    BlockShape shape;
    VectorField e;
    VectorField einv;
    GeneratorComponents a;
    /// v[i-1] = v_i, with v_1 = E and v_{i+1} = Einv o v_i o v_2.
    std::vector<VectorField> v;
    /// alpha = Einv o v_2, so that v_i = E o alpha^{i-1}.
    VectorField generator;

    /// a_{i(alpha)} for i >= 2; zero for i = 1.
    ScalarFn a_at(std::size_t alpha, std::size_t i) const;
    /// v_{i(alpha)}: block-alpha part of v_i (zero when i > m_alpha).
    VectorField block_field(std::size_t alpha, std::size_t i) const;
    /// The frame in flat order: v_{1(1)}, ..., v_{m_1(1)}, v_{1(2)}, ...
    std::vector<VectorField> flat_fields() const;
};

/// v_2 assembled from the generator components, zero first entry per block.
VectorField generator_field(const BlockShape& shape, const GeneratorComponents& a, const Backend& backend);

/// Raises NotInvertible when E is not invertible on the backend and
/// ZeroGenerator when some a_{2(a)} vanishes (identically, or at the jet base
/// point). Blocks of size 1 take no generator components.
DualFrame build_frame(const VectorField& e, const GeneratorComponents& a);

/// v_{i(a)} * v_{j(b)} - delta_{ab} v_{(i+j-1)(a)} [i+j <= m_a + 1]; entries
/// tagged (alpha, i, beta, j, component).
Residual frame_product_check(const DualFrame& frame);

/// v_j^{j(a)} - (a_{2(a)})^{j-1} / (E^{1(a)})^{j-2}; entries tagged (alpha, j).
Residual vjj_check(const DualFrame& frame);

/// Groups "ffsim", "ffhat" (alpha, j, J) for j >= 3; "explicit" compares each
/// v_{i+1} with the triple-sum expansion in E^{-1}; "support" checks that
/// v_j^{J(a)} depends on u^{1(a)}..u^{(J-j+2)(a)} only; "vjj" as vjj_check.
Residual recursion_check(const DualFrame& frame);

/// Group "Q": E^1 d_1 a_2 + E^2 d_2 a_2 - a_2 d_2 E^2 per block.
Residual q_residual(const VectorField& e, const GeneratorComponents& a);

/// Groups "weak_ei" (atlas recursion for v_2), "Q", and "commutator" ([v_1, v_2]).
Residual v2_conditions(const DualFrame& frame);

/// [v_{i(a)}, v_{j(b)}] for all pairs in flat order; entries tagged (p, q, component).
Residual commutator_check(const DualFrame& frame);

/// [v_i, v_j] - (j - i) alpha^{i+j-3} o [v_1, v_2] for i < j; entries tagged (i, j, component).
Residual corollary_check(const DualFrame& frame);

enum class ConstructionMode { Exact, Numeric };

struct NumericConstruction {
    /// Base point of the local solution.
    std::vector<double> point;
    /// Jet order of the returned components.
    unsigned order = Backend::default_jet_order;
    /// Tolerance for the Q check on jets.
    double tol = 1e-9;
};

/// Completes a_{3(a)}, ..., a_{m(a)} from a_{2(a)}: each a_m is the homotopy
/// potential of the weak eventual identity recursion plus a function
/// C_m(u^{1(a)}, u^{2(a)}) fixed by the m-th component of [E, v_2] = 0 on the
/// slice u^{>=3} = const,
///   E^1 d_1 C + E^2 d_2 C - (d_m E^m) C + S = 0.
/// Exact mode returns polynomials: C = 0 when the source vanishes, otherwise
/// a polynomial solution preferring C(0, u^2) = 0; NoPolynomialSolution when
/// none of bounded degree exists. Numeric mode returns jets at `numeric.point`
/// and solves the first-order equation in Taylor coefficients from the slice
/// through the base point. Raises QViolated when a_2 fails Q.
GeneratorComponents construct_a(const SolvedEI& e, const std::vector<ScalarFn>& a2,
                                ConstructionMode mode = ConstructionMode::Exact,
                                const NumericConstruction& numeric = {});

}  // namespace evid
