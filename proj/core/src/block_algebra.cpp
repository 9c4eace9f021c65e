#include "evid/block_algebra.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace evid {

BlockShape::BlockShape(std::vector<std::size_t> sizes) : sizes_(std::move(sizes))
{
    if (sizes_.empty()) fail(Errc::InvalidInput, "block shape needs at least one block");
    for (auto m : sizes_) {
        if (m == 0) fail(Errc::InvalidInput, "block sizes must be positive");
        offsets_.push_back(n_);
        for (std::size_t j = 0; j < m; ++j) owner_.push_back(offsets_.size());
        n_ += m;
        max_ = std::max(max_, m);
    }
}

BlockShape BlockShape::parse(std::string_view text)
{
    std::vector<std::size_t> sizes;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        std::string_view item = text.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc() || ptr != item.data() + item.size() || item.empty())
            fail(Errc::InvalidInput, "malformed shape '" + std::string(text) + "'");
        sizes.push_back(value);
        pos = comma + 1;
    }
    return BlockShape(std::move(sizes));
}

std::size_t BlockShape::flat(std::size_t alpha, std::size_t j) const
{
    if (alpha == 0 || alpha > sizes_.size() || j == 0 || j > sizes_[alpha - 1])
        fail(Errc::IndexOutOfRange, "position " + std::to_string(j) + " of block " + std::to_string(alpha));
    return offsets_[alpha - 1] + j;
}

std::pair<std::size_t, std::size_t> BlockShape::block_of(std::size_t flat_index) const
{
    if (flat_index == 0 || flat_index > n_) fail(Errc::IndexOutOfRange, "flat index " + std::to_string(flat_index));
    const std::size_t alpha = owner_[flat_index - 1];
    return {alpha, flat_index - offsets_[alpha - 1]};
}

std::string BlockShape::to_string() const
{
    std::ostringstream out;
    for (std::size_t a = 0; a < sizes_.size(); ++a) out << (a ? "," : "") << sizes_[a];
    return out.str();
}

VectorField::VectorField(BlockShape shape, const Backend& backend) : shape_(std::move(shape))
{
    if (backend.nvars() != shape_.dimension())
        fail(Errc::ShapeMismatch, "backend dimension differs from shape dimension");
    components_.assign(shape_.dimension(), backend.zero());
}

VectorField::VectorField(BlockShape shape, std::vector<ScalarFn> components)
    : shape_(std::move(shape)), components_(std::move(components))
{
    if (components_.size() != shape_.dimension())
        fail(Errc::ShapeMismatch, "expected " + std::to_string(shape_.dimension()) + " components, got " +
                                      std::to_string(components_.size()));
    for (const auto& c : components_) {
        if (c.rep().index() != components_.front().rep().index())
            fail(Errc::BackendMismatch, "vector field components on different backends");
        if (c.nvars() != shape_.dimension()) fail(Errc::ShapeMismatch, "component arity differs from dimension");
    }
}

const ScalarFn& VectorField::operator[](std::size_t i) const
{
    if (i == 0 || i > components_.size()) fail(Errc::IndexOutOfRange, "component " + std::to_string(i));
    return components_[i - 1];
}

ScalarFn& VectorField::operator[](std::size_t i)
{
    if (i == 0 || i > components_.size()) fail(Errc::IndexOutOfRange, "component " + std::to_string(i));
    return components_[i - 1];
}

VectorField VectorField::restrict_to_block(std::size_t alpha) const
{
    VectorField out = *this;
    for (std::size_t i = 1; i <= dimension(); ++i)
        if (shape_.block_of(i).first != alpha) out[i] = out[i].zero_like();
    return out;
}

bool VectorField::is_zero() const
{
    for (const auto& c : components_)
        if (!c.is_zero()) return false;
    return true;
}

double VectorField::magnitude() const
{
    double m = 0.0;
    for (const auto& c : components_) m = std::max(m, c.magnitude());
    return m;
}

void VectorField::check_same(const VectorField& other) const
{
    if (!(shape_ == other.shape_))
        fail(Errc::ShapeMismatch, "shapes (" + shape_.to_string() + ") and (" + other.shape_.to_string() + ")");
}

VectorField& VectorField::operator+=(const VectorField& rhs)
{
    check_same(rhs);
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += rhs.components_[i];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& rhs)
{
    check_same(rhs);
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= rhs.components_[i];
    return *this;
}

VectorField operator*(const ScalarFn& f, const VectorField& x)
{
    VectorField out = x;
    for (auto& c : out.components_) c = f * c;
    return out;
}

VectorField operator*(const Rational& c, const VectorField& x)
{
    if (x.components_.empty()) return x;
    return x.components_.front().constant_like(c) * x;
}

VectorField VectorField::operator-() const
{
    VectorField out = *this;
    for (auto& c : out.components_) c = -c;
    return out;
}

VectorField VectorField::partial(std::size_t index) const
{
    VectorField out = *this;
    for (auto& c : out.components_) c = c.partial(index);
    return out;
}

VectorField coordinate_field(const BlockShape& shape, const Backend& backend, std::size_t i)
{
    VectorField out(shape, backend);
    out[i] = backend.one();
    return out;
}

VectorField make_field(const BlockShape& shape, std::vector<ScalarFn> components)
{
    return VectorField(shape, std::move(components));
}

std::vector<double> circ_values(const BlockShape& shape, std::span<const double> x, std::span<const double> y)
{
    return circ_kernel<double>(shape, x, y);
}

std::vector<double> invert_values(const BlockShape& shape, std::span<const double> x)
{
    return invert_kernel<double>(shape, x, 1.0, [](double v) { return v == 0.0; });
}

VectorField unit(const BlockShape& shape, const Backend& backend)
{
    VectorField out(shape, backend);
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) out.at(alpha, 1) = backend.one();
    return out;
}

VectorField circ(const VectorField& x, const VectorField& y)
{
    if (!(x.shape() == y.shape()))
        fail(Errc::ShapeMismatch, "circ of fields with shapes (" + x.shape().to_string() + ") and (" +
                                      y.shape().to_string() + ")");
    return VectorField(x.shape(), circ_kernel<ScalarFn>(x.shape(), x.components(), y.components()));
}

VectorField power(const VectorField& x, unsigned k)
{
    if (x.components().empty()) return x;
    VectorField out = x;
    // e has a 1 at the first position of each block.
    for (std::size_t i = 1; i <= x.dimension(); ++i)
        out[i] = x.shape().block_of(i).second == 1 ? x[i].constant_like(1) : x[i].zero_like();
    for (unsigned j = 0; j < k; ++j) out = circ(x, out);
    return out;
}

VectorField invert(const VectorField& x)
{
    const ScalarFn one = x[1].constant_like(1);
    auto leading_zero = [](const ScalarFn& f) {
        if (f.backend() == BackendKind::Jet) return f.jet_value() == 0.0;
        return f.is_zero();
    };
    return VectorField(x.shape(), invert_kernel<ScalarFn>(x.shape(), x.components(), one, leading_zero));
}

VectorField dual_product(const VectorField& x, const VectorField& y, const VectorField& einv)
{
    return circ(einv, circ(x, y));
}

std::vector<std::vector<std::vector<ScalarFn>>> structure_tensor(const BlockShape& shape, const Backend& backend,
                                                                 const VectorField* einv)
{
    const std::size_t n = shape.dimension();
    std::vector<std::vector<std::vector<ScalarFn>>> out(n, std::vector<std::vector<ScalarFn>>(n, std::vector<ScalarFn>(n)));
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t k = 1; k <= n; ++k) {
            VectorField xj = coordinate_field(shape, backend, j);
            VectorField xk = coordinate_field(shape, backend, k);
            VectorField p = einv ? dual_product(xj, xk, *einv) : circ(xj, xk);
            for (std::size_t i = 1; i <= n; ++i) out[i - 1][j - 1][k - 1] = p[i];
        }
    }
    return out;
}

}  // namespace evid
