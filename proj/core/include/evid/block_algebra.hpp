#pragma once

#include "evid/error.hpp"
#include "evid/scalar.hpp"

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace evid {

/// Partition (m_1, ..., m_r) of the dimension into Jordan blocks. Blocks and
/// positions inside a block are 1-based, as are flat indices.
class BlockShape {
public:
    BlockShape() = default;
    explicit BlockShape(std::vector<std::size_t> sizes);

    /// Parses "3,2,1".
    static BlockShape parse(std::string_view text);

    std::size_t dimension() const noexcept { return n_; }
    std::size_t blocks() const noexcept { return sizes_.size(); }
    std::size_t size(std::size_t alpha) const { return sizes_.at(alpha - 1); }
    std::size_t max_size() const noexcept { return max_; }
    const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }

    /// Flat index of position j in block alpha.
    std::size_t flat(std::size_t alpha, std::size_t j) const;
    /// Offset of block alpha: flat(alpha, j) = offset(alpha) + j.
    std::size_t offset(std::size_t alpha) const { return offsets_.at(alpha - 1); }
    /// (alpha, j) of a flat index.
    std::pair<std::size_t, std::size_t> block_of(std::size_t flat_index) const;

    std::string to_string() const;

    friend bool operator==(const BlockShape&, const BlockShape&) = default;

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> owner_;
    std::size_t n_ = 0;
    std::size_t max_ = 0;
};

/// One coefficient function per flat index, all on the same backend.
class VectorField {
public:
    VectorField() = default;
    /// The zero field.
    VectorField(BlockShape shape, const Backend& backend);
    VectorField(BlockShape shape, std::vector<ScalarFn> components);

    const BlockShape& shape() const noexcept { return shape_; }
    std::size_t dimension() const noexcept { return components_.size(); }
    const std::vector<ScalarFn>& components() const noexcept { return components_; }

    /// Component by flat index (1-based).
    const ScalarFn& operator[](std::size_t i) const;
    ScalarFn& operator[](std::size_t i);
    const ScalarFn& at(std::size_t alpha, std::size_t j) const { return (*this)[shape_.flat(alpha, j)]; }
    ScalarFn& at(std::size_t alpha, std::size_t j) { return (*this)[shape_.flat(alpha, j)]; }

    /// Block-alpha part of the field, other blocks set to zero.
    VectorField restrict_to_block(std::size_t alpha) const;

    bool is_zero() const;
    double magnitude() const;

    VectorField& operator+=(const VectorField& rhs);
    VectorField& operator-=(const VectorField& rhs);
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    friend VectorField operator*(const ScalarFn& f, const VectorField& x);
    friend VectorField operator*(const Rational& c, const VectorField& x);
    VectorField operator-() const;

    VectorField partial(std::size_t index) const;

    friend bool operator==(const VectorField& a, const VectorField& b) { return a.shape_ == b.shape_ && (a - b).is_zero(); }

private:
    void check_same(const VectorField& other) const;

    BlockShape shape_;
    std::vector<ScalarFn> components_;
};

inline std::ostream& operator<<(std::ostream& os, const VectorField& x)
{
    os << '(';
    for (std::size_t i = 1; i <= x.dimension(); ++i) os << (i > 1 ? ", " : "") << x[i];
    return os << ')';
}

/// Coordinate field d/du^i on the backend.
VectorField coordinate_field(const BlockShape& shape, const Backend& backend, std::size_t i);

/// Builds a vector field from one component per flat index.
VectorField make_field(const BlockShape& shape, std::vector<ScalarFn> components);

// Kernels on plain component vectors. T is ScalarFn or double; the shape's
// flat order is used throughout.

/// (X o Y)^{i(a)} = sum_{j+k=i+1} X^{j(a)} Y^{k(a)}.
template <typename T> std::vector<T> circ_kernel(const BlockShape& shape, std::span<const T> x, std::span<const T> y)
{
    std::vector<T> out;
    out.reserve(x.size());
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        const std::size_t off = shape.offset(alpha);
        for (std::size_t i = 1; i <= shape.size(alpha); ++i) {
            T sum = x[off] * y[off + i - 1];
            for (std::size_t j = 2; j <= i; ++j) sum = sum + x[off + j - 1] * y[off + i - j];
            out.push_back(std::move(sum));
        }
    }
    return out;
}

/// Per-block forward substitution for the inverse Toeplitz column. `is_zero`
/// decides invertibility of a block's leading entry; the 1-based block index
/// is reported in NotInvertible.
template <typename T, typename IsZero>
std::vector<T> invert_kernel(const BlockShape& shape, std::span<const T> x, const T& one, IsZero is_zero)
{
    std::vector<T> out;
    out.reserve(x.size());
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        const std::size_t off = shape.offset(alpha);
        if (is_zero(x[off]))
            throw Error(Errc::NotInvertible, "leading component of block " + std::to_string(alpha) + " vanishes")
                .with_indices({alpha});
        const T y1 = one / x[off];
        out.push_back(y1);
        for (std::size_t i = 2; i <= shape.size(alpha); ++i) {
            T sum = x[off + 1] * out[off + i - 2];
            for (std::size_t j = 3; j <= i; ++j) sum = sum + x[off + j - 1] * out[off + i - j];
            out.push_back(-(y1 * sum));
        }
    }
    return out;
}

std::vector<double> circ_values(const BlockShape& shape, std::span<const double> x, std::span<const double> y);
std::vector<double> invert_values(const BlockShape& shape, std::span<const double> x);

VectorField unit(const BlockShape& shape, const Backend& backend);
VectorField circ(const VectorField& x, const VectorField& y);
VectorField power(const VectorField& x, unsigned k);
/// Raises NotInvertible naming the block whose leading component vanishes
/// (identically, or at the jet base point).
VectorField invert(const VectorField& x);
/// X * Y = Einv o X o Y.
VectorField dual_product(const VectorField& x, const VectorField& y, const VectorField& einv);

/// Structure constants c^i_{jk} of o (or of * when `einv` is given) as an
/// n x n x n table indexed [i-1][j-1][k-1]; for inspection only.
std::vector<std::vector<std::vector<ScalarFn>>> structure_tensor(const BlockShape& shape, const Backend& backend,
                                                                 const VectorField* einv = nullptr);

}  // namespace evid
