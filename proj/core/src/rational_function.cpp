#include "evid/rational_function.hpp"

#include "evid/error.hpp"

#include <algorithm>

namespace evid {

namespace {

using Factor = RationalFunction::Factor;

std::vector<Factor>::iterator find_base(std::vector<Factor>& list, const Poly& base)
{
    return std::find_if(list.begin(), list.end(), [&](const Factor& f) { return f.base == base; });
}

Poly product_of(const std::vector<Factor>& list, std::size_t nvars)
{
    Poly p = Poly::constant(nvars, 1);
    for (const auto& f : list) p *= f.base.pow(f.exponent);
    return p;
}

/// Multiplier turning a denominator `have` into the common denominator `want`.
Poly cofactor(const std::vector<Factor>& want, const std::vector<Factor>& have, std::size_t nvars)
{
    Poly p = Poly::constant(nvars, 1);
    for (const auto& w : want) {
        unsigned e = w.exponent;
        for (const auto& h : have)
            if (h.base == w.base) e -= h.exponent;
        if (e > 0) p *= w.base.pow(e);
    }
    return p;
}

}  // namespace

void RationalFunction::check_same(const RationalFunction& other) const
{
    if (nvars() != other.nvars())
        fail(Errc::BackendMismatch, "rational functions in different numbers of variables");
}

Poly RationalFunction::denominator() const
{
    return product_of(den_, nvars());
}

void RationalFunction::insert_factor(Poly base, unsigned exponent)
{
    if (exponent == 0) return;
    if (base.is_constant()) {
        Rational c = base.constant_term();
        for (unsigned k = 0; k < exponent; ++k) num_ *= Rational(1 / c);
        return;
    }
    Rational lead = base.leading_coefficient();
    if (lead != 1) {
        base *= Rational(1 / lead);
        for (unsigned k = 0; k < exponent; ++k) num_ *= Rational(1 / lead);
    }
    if (auto it = find_base(den_, base); it != den_.end()) it->exponent += exponent;
    else den_.push_back({std::move(base), exponent});
}

void RationalFunction::reduce()
{
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    for (auto& f : den_) {
        while (f.exponent > 0) {
            auto q = num_.divide_exact(f.base);
            if (!q) break;
            num_ = std::move(*q);
            --f.exponent;
        }
    }
    std::erase_if(den_, [](const Factor& f) { return f.exponent == 0; });
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& rhs)
{
    check_same(rhs);
    if (rhs.is_zero()) return *this;
    if (is_zero()) return *this = rhs;
    if (den_ == rhs.den_) {
        num_ += rhs.num_;
        reduce();
        return *this;
    }
    std::vector<Factor> common = den_;
    for (const auto& f : rhs.den_) {
        if (auto it = find_base(common, f.base); it != common.end()) it->exponent = std::max(it->exponent, f.exponent);
        else common.push_back(f);
    }
    num_ = num_ * cofactor(common, den_, nvars()) + rhs.num_ * cofactor(common, rhs.den_, nvars());
    den_ = std::move(common);
    reduce();
    return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& rhs)
{
    return *this += -rhs;
}

RationalFunction RationalFunction::operator-() const
{
    RationalFunction out = *this;
    out.num_ = -out.num_;
    return out;
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b)
{
    a.check_same(b);
    RationalFunction out(a.num_ * b.num_);
    if (out.is_zero()) return out;
    out.den_ = a.den_;
    for (const auto& f : b.den_) out.insert_factor(f.base, f.exponent);
    out.reduce();
    return out;
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b)
{
    a.check_same(b);
    if (b.is_zero()) fail(Errc::DivisionByZeroFunction, "division by the zero rational function");
    RationalFunction out(a.num_ * product_of(b.den_, a.nvars()));
    out.den_ = a.den_;
    out.insert_factor(b.num_, 1);
    out.reduce();
    return out;
}

RationalFunction RationalFunction::partial(std::size_t index) const
{
    // (N / prod f^e)' = (N' * prod f - N * sum_i e_i f_i' prod_{j != i} f_j) / (prod f^e * prod f)
    Poly all = Poly::constant(nvars(), 1);
    for (const auto& f : den_) all *= f.base;
    Poly numer = num_.partial(index) * all;
    for (std::size_t i = 0; i < den_.size(); ++i) {
        Poly others = Poly::constant(nvars(), 1);
        for (std::size_t j = 0; j < den_.size(); ++j)
            if (j != i) others *= den_[j].base;
        numer -= num_ * den_[i].base.partial(index) * others * Rational(den_[i].exponent);
    }
    RationalFunction out(std::move(numer));
    out.den_ = den_;
    for (auto& f : out.den_) f.exponent += 1;
    out.reduce();
    return out;
}

std::string RationalFunction::to_string() const
{
    if (den_.empty()) return num_.to_string();
    std::string den;
    for (const auto& f : den_) {
        if (!den.empty()) den += "*";
        den += "(" + f.base.to_string() + ")";
        if (f.exponent > 1) den += "^" + std::to_string(f.exponent);
    }
    return "(" + num_.to_string() + ")/(" + den + ")";
}

}  // namespace evid
