#include "evid/poly.hpp"

#include "evid/error.hpp"

#include <algorithm>
#include <cmath>

namespace evid {

namespace {

void check_index(std::size_t index, std::size_t nvars)
{
    if (index == 0 || index > nvars)
        fail(Errc::IndexOutOfRange, "variable u" + std::to_string(index) + " outside 1.." + std::to_string(nvars));
}

bool divides(const Poly::Exponents& d, const Poly::Exponents& e)
{
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > e[i]) return false;
    return true;
}

}  // namespace

Poly Poly::constant(std::size_t nvars, const Rational& c)
{
    Poly p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t index)
{
    check_index(index, nvars);
    Exponents e(nvars, 0);
    e[index - 1] = 1;
    return monomial(std::move(e), 1);
}

Poly Poly::monomial(Exponents exps, const Rational& c)
{
    Poly p(exps.size());
    p.add_term(exps, c);
    return p;
}

void Poly::add_term(const Exponents& e, const Rational& c)
{
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void Poly::check_same(const Poly& other) const
{
    if (nvars_ != other.nvars_)
        fail(Errc::BackendMismatch,
             "polynomials in " + std::to_string(nvars_) + " and " + std::to_string(other.nvars_) + " variables");
}

bool Poly::is_constant() const noexcept
{
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
}

Rational Poly::constant_term() const
{
    return coefficient(Exponents(nvars_, 0));
}

Rational Poly::coefficient(const Exponents& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational Poly::leading_coefficient() const
{
    return terms_.empty() ? Rational(0) : terms_.rbegin()->second;
}

Rational Poly::max_abs_coefficient() const
{
    Rational best = 0;
    for (const auto& [e, c] : terms_) best = std::max<Rational>(best, abs(c));
    return best;
}

unsigned Poly::total_degree() const
{
    unsigned deg = 0;
    for (const auto& [e, c] : terms_) {
        unsigned d = 0;
        for (auto x : e) d += x;
        deg = std::max(deg, d);
    }
    return deg;
}

unsigned Poly::degree_in(std::size_t index) const
{
    check_index(index, nvars_);
    unsigned deg = 0;
    for (const auto& [e, c] : terms_) deg = std::max(deg, e[index - 1]);
    return deg;
}

bool Poly::depends_on(std::size_t index) const
{
    return degree_in(index) > 0;
}

std::vector<std::size_t> Poly::support() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i <= nvars_; ++i)
        if (depends_on(i)) out.push_back(i);
    return out;
}

Poly& Poly::operator+=(const Poly& rhs)
{
    check_same(rhs);
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& rhs)
{
    check_same(rhs);
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b)
{
    a.check_same(b);
    Poly out(a.nvars_);
    if (a.is_zero() || b.is_zero()) return out;
    Poly::Exponents e(a.nvars_);
    Rational c;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            c = ca * cb;
            out.add_term(e, c);
        }
    }
    return out;
}

Poly& Poly::operator*=(const Poly& rhs)
{
    *this = *this * rhs;
    return *this;
}

Poly& Poly::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

Poly Poly::operator-() const
{
    Poly out = *this;
    for (auto& [e, v] : out.terms_) v = -v;
    return out;
}

Poly Poly::pow(unsigned k) const
{
    Poly result = constant(nvars_, 1);
    Poly base = *this;
    while (k > 0) {
        if (k & 1u) result *= base;
        k >>= 1u;
        if (k > 0) base = base * base;
    }
    return result;
}

Poly Poly::partial(std::size_t index) const
{
    check_index(index, nvars_);
    Poly out(nvars_);
    const std::size_t i = index - 1;
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exponents d = e;
        d[i] -= 1;
        out.add_term(d, c * e[i]);
    }
    return out;
}

std::optional<Poly> Poly::divide_exact(const Poly& divisor) const
{
    check_same(divisor);
    if (divisor.is_zero()) fail(Errc::DivisionByZeroFunction, "division by the zero polynomial");
    Poly quotient(nvars_);
    if (is_zero()) return quotient;

    const auto& [lead_e, lead_c] = *divisor.terms_.rbegin();
    Poly rem = *this;
    Exponents shift(nvars_);
    while (!rem.is_zero()) {
        const auto& [re, rc] = *rem.terms_.rbegin();
        if (!divides(lead_e, re)) return std::nullopt;
        for (std::size_t i = 0; i < nvars_; ++i) shift[i] = re[i] - lead_e[i];
        Rational factor = rc / lead_c;
        quotient.add_term(shift, factor);
        Exponents e(nvars_);
        for (const auto& [de, dc] : divisor.terms_) {
            for (std::size_t i = 0; i < nvars_; ++i) e[i] = de[i] + shift[i];
            rem.add_term(e, -factor * dc);
        }
    }
    return quotient;
}

Poly Poly::set_zero(std::span<const std::size_t> indices) const
{
    for (auto i : indices) check_index(i, nvars_);
    Poly out(nvars_);
    for (const auto& [e, c] : terms_) {
        bool vanishes = std::any_of(indices.begin(), indices.end(), [&](std::size_t i) { return e[i - 1] != 0; });
        if (!vanishes) out.add_term(e, c);
    }
    return out;
}

Poly Poly::remap(std::span<const std::size_t> map, std::size_t nvars) const
{
    if (map.size() != nvars_) fail(Errc::InvalidInput, "variable map length does not match polynomial arity");
    for (auto target : map) check_index(target, nvars);
    Poly out(nvars);
    for (const auto& [e, c] : terms_) {
        Exponents d(nvars, 0);
        for (std::size_t i = 0; i < nvars_; ++i) d[map[i] - 1] += e[i];
        out.add_term(d, c);
    }
    return out;
}

std::string Poly::to_string() const
{
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string mono;
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "u" + std::to_string(i + 1);
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        Rational mag = abs(c);
        std::string coeff = evid::to_string(mag);
        std::string body;
        if (mono.empty()) body = coeff;
        else if (mag == 1) body = mono;
        else body = coeff + "*" + mono;

        if (first) {
            if (c < 0) out += (mono.empty() || mag != 1) ? "-" + body : "-1*" + body;
            else out += body;
            first = false;
        } else {
            out += (c < 0 ? " - " : " + ") + body;
        }
    }
    return out;
}

}  // namespace evid
