#pragma once

#include "evid/block_algebra.hpp"
#include "evid/poly.hpp"

#include <vector>

namespace evid {

/// Free data of an eventual identity: per block alpha, f_{1(a)}(u^{1(a)}) and
/// f_{i(a)}(u^{1(a)}, u^{2(a)}) for 2 <= i <= m_a. Polynomials are in the flat
/// variables u1..un; f[alpha-1][i-1] is f_{i(alpha)}.
struct EISeed {
    BlockShape shape;
    std::vector<std::vector<Poly>> f;

    /// All seed functions zero.
    static EISeed zero(const BlockShape& shape);
    /// f_{1(a)} = u^{1(a)}, f_{2(a)} = u^{2(a)}, the rest zero.
    static EISeed euler(const BlockShape& shape);

    const Poly& at(std::size_t alpha, std::size_t i) const { return f.at(alpha - 1).at(i - 1); }
    Poly& at(std::size_t alpha, std::size_t i) { return f.at(alpha - 1).at(i - 1); }
};

/// Raises SeedSupportViolation when a seed function depends on a forbidden
/// variable, ShapeMismatch when the seed layout does not match the shape.
void verify_seed_support(const EISeed& seed);

struct SolvedEI {
    EISeed seed;
    /// Components E^{i(a)} on the polynomial backend.
    VectorField e;
    /// P^{m(a)} = E^{m(a)} - f_{m(a)} per flat index (zero for m <= 2).
    std::vector<Poly> p;

    const Poly& component(std::size_t flat) const { return e[flat].as_poly(); }
};

/// Homotopy potential of the triangular recursion for position m >= 3 of
/// block alpha: integrates
///   sum_{l=3}^{m} [(l-1) d_2 X^{m-l+2} - (l-2) d_1 X^{m-l+1}] du^l
/// over u^{3(a)}..u^{m(a)}. `lower[i-1]` holds X^{i(a)} for i < m. Works on
/// polynomials and on jets (centred at the base point).
ScalarFn atlas_potential(const BlockShape& shape, std::size_t alpha, const std::vector<ScalarFn>& lower, std::size_t m);

/// Integrates the system block by block in increasing m.
SolvedEI solve(const EISeed& seed);

/// True iff the P^m parts agree wherever the first m-1 seed functions of the
/// block agree, and the outputs differ by exactly the seed differences.
bool verify_seed_freeness(const EISeed& a, const EISeed& b);

}  // namespace evid
