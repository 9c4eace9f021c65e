#pragma once

#include "evid/poly.hpp"

#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace evid {

/// Quotient of polynomials with the denominator kept as a product of
/// non-constant monic factors with positive exponents. Common denominators are
/// formed from factor identity (maximum exponent), so no multivariate gcd is
/// needed; numerators are reduced by exact division against each factor.
/// Equality is decided by cross-multiplication, i.e. by the numerator of the
/// difference.
class RationalFunction {
public:
    struct Factor {
        Poly base;
        unsigned exponent;
        friend bool operator==(const Factor&, const Factor&) = default;
    };

    RationalFunction() = default;
    explicit RationalFunction(Poly numerator) : num_(std::move(numerator)) {}

    std::size_t nvars() const noexcept { return num_.nvars(); }
    const Poly& numerator() const noexcept { return num_; }
    const std::vector<Factor>& factors() const noexcept { return den_; }
    Poly denominator() const;

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.empty(); }

    RationalFunction& operator+=(const RationalFunction& rhs);
    RationalFunction& operator-=(const RationalFunction& rhs);
    RationalFunction operator-() const;

    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    /// Raises DivisionByZeroFunction when b is the zero function.
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) { return (a - b).is_zero(); }

    RationalFunction partial(std::size_t index) const;

    template <typename T> T evaluate(std::span<const T> point) const
    {
        T value = num_.evaluate(point);
        for (const auto& f : den_) {
            T b = f.base.evaluate(point);
            T p = b;
            for (unsigned k = 1; k < f.exponent; ++k) p = p * b;
            value = value / p;
        }
        return value;
    }

    /// "(num)/((f1)^e1*(f2)^e2)" in the expression grammar.
    std::string to_string() const;

private:
    void check_same(const RationalFunction& other) const;
    void insert_factor(Poly base, unsigned exponent);
    void reduce();

    Poly num_;
    std::vector<Factor> den_;
};

inline std::ostream& operator<<(std::ostream& os, const RationalFunction& r) { return os << r.to_string(); }

}  // namespace evid
