#pragma once

#include "evid/error.hpp"
#include "evid/poly.hpp"
#include "evid/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace evid {

/// Enumeration of the multi-indices of total degree <= order in `nvars`
/// variables. Indices are listed degree by degree with a fixed order inside
/// each degree, so a layout of order K is a prefix of every layout of higher
/// order in the same number of variables; jets of different orders share
/// coefficient positions.
class JetLayout {
public:
    struct Product {
        std::uint32_t lhs, rhs, out;
    };

    static std::shared_ptr<const JetLayout> get(std::size_t nvars, unsigned order);

    std::size_t nvars() const noexcept { return nvars_; }
    unsigned order() const noexcept { return order_; }
    std::size_t size() const noexcept { return multi_.size(); }
    const Poly::Exponents& multi_index(std::size_t k) const { return multi_[k]; }
    unsigned degree(std::size_t k) const { return degree_[k]; }
    /// Number of multi-indices of total degree <= d (d <= order).
    std::size_t prefix(unsigned d) const { return prefix_[d]; }
    /// Position of a multi-index; its degree must not exceed order().
    std::size_t index_of(const Poly::Exponents& e) const;
    /// All (lhs, rhs, out) with multi[lhs] + multi[rhs] = multi[out].
    const std::vector<Product>& products() const noexcept { return products_; }
    /// Pairs (k, j) with multi[j] = multi[k] - e_var, for multi[k][var] > 0.
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& lowering(std::size_t var) const
    {
        return lowering_[var];
    }

    JetLayout(std::size_t nvars, unsigned order);

private:
    std::size_t nvars_;
    unsigned order_;
    std::vector<Poly::Exponents> multi_;
    std::vector<unsigned> degree_;
    std::vector<std::size_t> prefix_;
    std::vector<Product> products_;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> lowering_;
};

/// Truncated multivariate Taylor expansion at a base point:
///   f(x + d) = sum_a c_a d^a,  |a| <= order,
/// with c_a = (d^a f)(x) / a!. T is Rational (exact jets) or double.
template <typename T> class Jet {
public:
    Jet(std::shared_ptr<const JetLayout> layout, std::vector<T> point)
        : layout_(std::move(layout)), point_(std::move(point)),
          coeffs_(layout_->size(), convert_rational<T>(Rational(0)))
    {}

    static Jet constant(std::vector<T> point, unsigned order, const T& value)
    {
        auto layout = JetLayout::get(point.size(), order);
        Jet j(std::move(layout), std::move(point));
        j.coeffs_[0] = value;
        return j;
    }

    /// The coordinate function u^index (1-based).
    static Jet variable(std::vector<T> point, unsigned order, std::size_t index)
    {
        if (index == 0 || index > point.size())
            fail(Errc::IndexOutOfRange, "jet variable u" + std::to_string(index));
        T base = point[index - 1];
        Jet j = constant(std::move(point), order, base);
        if (order > 0) j.coeffs_[1 + (index - 1)] = convert_rational<T>(Rational(1));
        return j;
    }

    std::size_t nvars() const noexcept { return layout_->nvars(); }
    unsigned order() const noexcept { return layout_->order(); }
    const std::vector<T>& point() const noexcept { return point_; }
    const JetLayout& layout() const noexcept { return *layout_; }
    std::span<const T> coefficients() const noexcept { return coeffs_; }
    std::span<T> coefficients() noexcept { return coeffs_; }

    const T& value() const { return coeffs_[0]; }

    T coefficient(const Poly::Exponents& e) const { return coeffs_[layout_->index_of(e)]; }

    /// The partial derivative d^a f at the base point (c_a * a!).
    T derivative(const Poly::Exponents& e) const
    {
        T c = coefficient(e);
        for (auto k : e)
            for (unsigned f = 2; f <= k; ++f) c = c * convert_rational<T>(Rational(f));
        return c;
    }

    bool is_zero() const
    {
        const T zero = convert_rational<T>(Rational(0));
        for (const auto& c : coeffs_)
            if (c != zero) return false;
        return true;
    }

    Jet truncate(unsigned order) const
    {
        if (order >= this->order()) return *this;
        Jet out(JetLayout::get(nvars(), order), point_);
        for (std::size_t k = 0; k < out.coeffs_.size(); ++k) out.coeffs_[k] = coeffs_[k];
        return out;
    }

    Jet& operator+=(const Jet& rhs)
    {
        combine(rhs, [](T& a, const T& b) { a = a + b; });
        return *this;
    }
    Jet& operator-=(const Jet& rhs)
    {
        combine(rhs, [](T& a, const T& b) { a = a - b; });
        return *this;
    }
    Jet operator-() const
    {
        Jet out = *this;
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }
    Jet& scale(const T& s)
    {
        for (auto& c : coeffs_) c = c * s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        a.check_compatible(b);
        const unsigned order = std::min(a.order(), b.order());
        Jet out(JetLayout::get(a.nvars(), order), a.point_);
        for (const auto& p : out.layout_->products())
            out.coeffs_[p.out] = out.coeffs_[p.out] + a.coeffs_[p.lhs] * b.coeffs_[p.rhs];
        return out;
    }

    Jet reciprocal() const
    {
        const T zero = convert_rational<T>(Rational(0));
        if (coeffs_[0] == zero)
            fail(Errc::DivisionByZeroFunction, "jet constant term is zero: base point lies on the non-invertibility locus");
        const T inv0 = convert_rational<T>(Rational(1)) / coeffs_[0];
        // 1/(b0 + r) = (1/b0) * sum_k (-r/b0)^k, r has no constant term.
        Jet ratio = *this;
        ratio.coeffs_[0] = zero;
        ratio.scale(-inv0);
        Jet sum = constant(point_, order(), convert_rational<T>(Rational(1)));
        Jet term = sum;
        for (unsigned k = 1; k <= order(); ++k) {
            term = term * ratio;
            sum += term;
        }
        return sum.scale(inv0);
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

    /// d/du^index, one order lower.
    Jet partial(std::size_t index) const
    {
        if (index == 0 || index > nvars()) fail(Errc::IndexOutOfRange, "jet partial index " + std::to_string(index));
        if (order() == 0) fail(Errc::JetOrderExhausted, "cannot differentiate an order-0 jet");
        Jet out(JetLayout::get(nvars(), order() - 1), point_);
        for (const auto& [k, j] : layout_->lowering(index - 1)) {
            if (j >= out.coeffs_.size()) continue;
            const unsigned power = layout_->multi_index(k)[index - 1];
            out.coeffs_[j] = coeffs_[k] * convert_rational<T>(Rational(power));
        }
        return out;
    }

    /// Antiderivative in u^index vanishing on the slice d_index = 0, one order higher.
    Jet integrate(std::size_t index) const
    {
        if (index == 0 || index > nvars()) fail(Errc::IndexOutOfRange, "jet integration index " + std::to_string(index));
        auto up = JetLayout::get(nvars(), order() + 1);
        Jet out(up, point_);
        for (const auto& [k, j] : up->lowering(index - 1)) {
            if (j >= coeffs_.size()) continue;
            const unsigned power = up->multi_index(k)[index - 1];
            out.coeffs_[k] = coeffs_[j] / convert_rational<T>(Rational(power));
        }
        return out;
    }

    void check_compatible(const Jet& other) const
    {
        if (nvars() != other.nvars()) fail(Errc::BackendMismatch, "jets in different numbers of variables");
        if (point_ != other.point_) fail(Errc::BackendMismatch, "jets at different base points");
    }

private:
    template <typename Op> void combine(const Jet& rhs, Op op)
    {
        check_compatible(rhs);
        if (rhs.order() < order()) *this = truncate(rhs.order());
        for (std::size_t k = 0; k < coeffs_.size(); ++k) op(coeffs_[k], rhs.coeffs_[k]);
    }

    std::shared_ptr<const JetLayout> layout_;
    std::vector<T> point_;
    std::vector<T> coeffs_;
};

using ExactJet = Jet<Rational>;
using FloatJet = Jet<double>;

/// Taylor expansion of a polynomial at `point` up to `order`. Exact when T is
/// Rational.
template <typename T> Jet<T> taylor_expand(const Poly& p, std::vector<T> point, unsigned order)
{
    if (point.size() != p.nvars()) fail(Errc::BackendMismatch, "base point dimension differs from polynomial arity");
    auto layout = JetLayout::get(point.size(), order);
    Jet<T> out(layout, point);
    auto coeffs = out.coefficients();
    const std::size_t n = point.size();
    for (const auto& [e, c] : p.terms()) {
        const T cc = convert_rational<T>(c);
        for (std::size_t k = 0; k < layout->size(); ++k) {
            const auto& b = layout->multi_index(k);
            bool below = true;
            for (std::size_t i = 0; i < n && below; ++i) below = b[i] <= e[i];
            if (!below) continue;
            T term = cc;
            for (std::size_t i = 0; i < n; ++i) {
                if (e[i] == 0) continue;
                if (b[i] > 0) term = term * convert_rational<T>(binomial(e[i], b[i]));
                for (unsigned r = b[i]; r < e[i]; ++r) term = term * point[i];
            }
            coeffs[k] = coeffs[k] + term;
        }
    }
    return out;
}

}  // namespace evid
