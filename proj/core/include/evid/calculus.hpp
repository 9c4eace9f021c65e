#pragma once

#include "evid/block_algebra.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace evid {

/// Endomorphism field acting on the coordinate frame: (L X)^i = sum_j L^i_j X^j.
class OperatorField {
public:
    OperatorField(BlockShape shape, const Backend& backend);
    OperatorField(BlockShape shape, std::vector<std::vector<ScalarFn>> rows);

    const BlockShape& shape() const noexcept { return shape_; }
    std::size_t dimension() const noexcept { return shape_.dimension(); }

    /// Entry L^i_j, 1-based.
    const ScalarFn& operator()(std::size_t i, std::size_t j) const { return rows_.at(i - 1).at(j - 1); }
    ScalarFn& operator()(std::size_t i, std::size_t j) { return rows_.at(i - 1).at(j - 1); }

    VectorField apply(const VectorField& x) const;
    /// Column j, i.e. L applied to d/du^j.
    VectorField column(std::size_t j) const;

private:
    BlockShape shape_;
    std::vector<std::vector<ScalarFn>> rows_;
};

struct ResidualEntry {
    std::string group;
    std::vector<std::size_t> indices;
    ScalarFn value;
    std::vector<double> point;
};

/// Labelled residual values of an identity. Exact backends pass only on
/// literal zero; jet entries pass when |value| <= tol.
struct Residual {
    std::string identity;
    std::string backend;
    std::vector<ResidualEntry> entries;

    void add(std::string group, std::vector<std::size_t> indices, ScalarFn value);
    void append(const Residual& other);

    bool exact() const;
    double max_abs() const;
    /// Entry with the largest magnitude, nullptr when empty.
    const ResidualEntry* worst() const;
    bool passes(double tol = 0.0) const;
    std::size_t nonzero_count(double tol = 0.0) const;
    /// Entries of one group only.
    Residual group(const std::string& name) const;
};

VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Product of two general fields, e.g. o or the dual *.
using ProductProvider = std::function<VectorField(const VectorField&, const VectorField&)>;

ProductProvider circ_product();
ProductProvider dual_product_with(const VectorField& einv);

/// Hertling-Manin residual
///   L_{X o Y}(o)(Z, W) - X o L_Y(o)(Z, W) - Y o L_X(o)(Z, W)
/// on coordinate fields (X, Y, Z, W), using the symmetry in (X, Y) and in (Z, W).
/// Entries are tagged (a, b, c, d, i).
Residual hm_residual(const ProductProvider& product, const BlockShape& shape, const Backend& backend);

/// Componentwise L_E(o)(X, Y) - [e, E] o X o Y for coordinate fields X = d_{j}, Y = d_{k}.
/// Entries are tagged (i, j, k) in flat indices.
Residual ei_residual(const VectorField& e_field);

/// The triangular recursion for each block together with the cross-block
/// partials. Entries are tagged (alpha, l, m) in the "atlas" group and
/// (i, j) in the "cross" group.
Residual atlas_residual(const VectorField& e_field);

/// N_L(d_a, d_b) for a < b; entries tagged (a, b, i).
Residual nijenhuis_torsion(const OperatorField& l);

/// Multiplication by E: block-diagonal lower-triangular Toeplitz.
OperatorField mult_operator(const VectorField& e_field);

/// A_{n,m} = [b0 o a^n, b1 o a^m] - a^{n+m-1} o (m [b0, b1 o a] + n [b0 o a, b1])
///           + (n+m-1) a^{n+m} o [b0, b1]
/// for 0 <= n <= nmax, 0 <= m <= mmax; entries tagged (n, m, i). Raises
/// PreconditionFailed if an input fails ei_residual at `tol`.
Residual weak_ei_bracket_check(const VectorField& alpha, const VectorField& beta0, const VectorField& beta1,
                               unsigned nmax, unsigned mmax, double tol = 1e-9);

}  // namespace evid
