#pragma once

#include "evid/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace evid {

/// Sparse multivariate polynomial over the rationals in variables u1..un.
/// Terms are keyed by exponent tuples of length n; zero coefficients are never
/// stored. Variable indices are 1-based throughout.
class Poly {
public:
    using Exponents = std::vector<unsigned>;
    using Terms = std::map<Exponents, Rational>;

    Poly() = default;
    explicit Poly(std::size_t nvars) : nvars_(nvars) {}

    static Poly constant(std::size_t nvars, const Rational& c);
    static Poly variable(std::size_t nvars, std::size_t index);
    static Poly monomial(Exponents exps, const Rational& c);

    std::size_t nvars() const noexcept { return nvars_; }
    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    Rational constant_term() const;
    Rational coefficient(const Exponents& e) const;
    /// Coefficient of the lex-greatest monomial (u1 > u2 > ...).
    Rational leading_coefficient() const;
    Rational max_abs_coefficient() const;

    unsigned total_degree() const;
    unsigned degree_in(std::size_t index) const;
    bool depends_on(std::size_t index) const;
    /// Variables (1-based) that occur with positive exponent.
    std::vector<std::size_t> support() const;

    Poly& operator+=(const Poly& rhs);
    Poly& operator-=(const Poly& rhs);
    Poly& operator*=(const Poly& rhs);
    Poly& operator*=(const Rational& c);
    Poly operator-() const;

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }

    friend bool operator==(const Poly& a, const Poly& b) = default;

    Poly pow(unsigned k) const;
    Poly partial(std::size_t index) const;

    /// Quotient when `divisor` divides this polynomial exactly, nullopt
    /// otherwise. Division by the zero polynomial raises DivisionByZeroFunction.
    std::optional<Poly> divide_exact(const Poly& divisor) const;

    /// Substitutes u^i = 0 for every listed (1-based) index.
    Poly set_zero(std::span<const std::size_t> indices) const;

    /// Renames variables: variable i of this polynomial becomes variable
    /// map[i-1] of a polynomial in `nvars` variables.
    Poly remap(std::span<const std::size_t> map, std::size_t nvars) const;

    template <typename T> T evaluate(std::span<const T> point) const;

    /// Text in the expression grammar, e.g. "-1*u1^2 + 2*u2".
    std::string to_string() const;

    void add_term(const Exponents& e, const Rational& c);

private:
    void check_same(const Poly& other) const;

    std::size_t nvars_ = 0;
    Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

template <typename T> T Poly::evaluate(std::span<const T> point) const
{
    T sum = convert_rational<T>(Rational(0));
    std::vector<std::vector<T>> powers(nvars_);
    for (const auto& [e, c] : terms_) {
        T term = convert_rational<T>(c);
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            auto& p = powers[i];
            if (p.empty()) p.push_back(point[i]);
            while (p.size() < e[i]) p.push_back(p.back() * point[i]);
            term = term * p[e[i] - 1];
        }
        sum = sum + term;
    }
    return sum;
}

}  // namespace evid
