#pragma once

#include "evid/jet.hpp"
#include "evid/poly.hpp"
#include "evid/rational_function.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace evid {

enum class BackendKind { Poly, Rational, Jet };

std::string_view to_string(BackendKind kind) noexcept;

/// An element of the coefficient-function algebra. Values are immutable once
/// built; every operation returns a new value. Binary operations require both
/// operands on the same backend (and, for jets, the same base point).
class ScalarFn {
public:
    using Rep = std::variant<Poly, RationalFunction, ExactJet, FloatJet>;

    ScalarFn() : rep_(Poly(0)) {}
    ScalarFn(Poly p) : rep_(std::move(p)) {}
    ScalarFn(RationalFunction r) : rep_(std::move(r)) {}
    ScalarFn(ExactJet j) : rep_(std::move(j)) {}
    ScalarFn(FloatJet j) : rep_(std::move(j)) {}

    BackendKind backend() const noexcept;
    bool is_float_jet() const noexcept { return std::holds_alternative<FloatJet>(rep_); }
    bool is_exact() const noexcept { return !is_float_jet(); }
    std::size_t nvars() const noexcept;
    const Rep& rep() const noexcept { return rep_; }

    const Poly& as_poly() const;
    const RationalFunction& as_rational() const;
    const ExactJet& as_exact_jet() const;
    const FloatJet& as_float_jet() const;

    /// A constant on the same backend (same base point and order for jets).
    ScalarFn constant_like(const Rational& c) const;
    ScalarFn zero_like() const { return constant_like(0); }

    /// Exact zero: no terms, zero numerator, or all jet coefficients zero.
    bool is_zero() const;
    /// Size used in residual summaries: largest coefficient magnitude for
    /// exact functions, |value at the base point| for jets.
    double magnitude() const;
    /// Point value of a jet (its constant term) as a double.
    double jet_value() const;

    ScalarFn partial(std::size_t index) const;

    /// Value at a point; Poly and Rational backends only.
    double evaluate(std::span<const double> point) const;
    Rational evaluate(std::span<const Rational> point) const;

    std::string to_string() const;

    friend ScalarFn operator+(const ScalarFn& a, const ScalarFn& b);
    friend ScalarFn operator-(const ScalarFn& a, const ScalarFn& b);
    friend ScalarFn operator*(const ScalarFn& a, const ScalarFn& b);
    /// Poly backend: exact division only (UnsupportedDivision otherwise).
    /// Rational: divisor must be nonzero. Jet: divisor constant term nonzero.
    friend ScalarFn operator/(const ScalarFn& a, const ScalarFn& b);
    ScalarFn operator-() const;

    ScalarFn& operator+=(const ScalarFn& b) { return *this = *this + b; }
    ScalarFn& operator-=(const ScalarFn& b) { return *this = *this - b; }
    ScalarFn& operator*=(const ScalarFn& b) { return *this = *this * b; }

    friend ScalarFn operator*(const Rational& c, const ScalarFn& a) { return a.constant_like(c) * a; }

    /// Structural equality of the represented functions (a - b is zero).
    friend bool operator==(const ScalarFn& a, const ScalarFn& b) { return (a - b).is_zero(); }

private:
    Rep rep_;
};

inline std::ostream& operator<<(std::ostream& os, const ScalarFn& f) { return os << f.to_string(); }

inline ScalarFn add(const ScalarFn& a, const ScalarFn& b) { return a + b; }
inline ScalarFn mul(const ScalarFn& a, const ScalarFn& b) { return a * b; }
inline ScalarFn div(const ScalarFn& a, const ScalarFn& b) { return a / b; }
inline ScalarFn partial(const ScalarFn& a, std::size_t index) { return a.partial(index); }

/// Describes where coefficient functions live: which backend, how many
/// variables, and for jets the base point and truncation order. Used to build
/// constants and coordinate functions, and to move exact data onto the backend.
class Backend {
public:
    static constexpr unsigned default_jet_order = 3;

    static Backend poly(std::size_t nvars);
    static Backend rational(std::size_t nvars);
    static Backend jet(std::vector<double> point, unsigned order = default_jet_order);
    static Backend exact_jet(std::vector<Rational> point, unsigned order = default_jet_order);

    BackendKind kind() const noexcept { return kind_; }
    bool float_jet() const noexcept { return float_; }
    std::size_t nvars() const noexcept { return nvars_; }
    unsigned order() const noexcept { return order_; }
    const std::vector<double>& float_point() const noexcept { return fpoint_; }
    const std::vector<Rational>& exact_point() const noexcept { return qpoint_; }
    bool supports_division() const noexcept { return kind_ != BackendKind::Poly; }

    ScalarFn constant(const Rational& c) const;
    ScalarFn zero() const { return constant(0); }
    ScalarFn one() const { return constant(1); }
    ScalarFn variable(std::size_t index) const;

    /// Moves a polynomial or an exact function onto this backend.
    ScalarFn lift(const Poly& p) const;
    ScalarFn lift(const RationalFunction& r) const;
    ScalarFn lift(const ScalarFn& f) const;

    std::string name() const;

private:
    BackendKind kind_ = BackendKind::Poly;
    bool float_ = false;
    std::size_t nvars_ = 0;
    unsigned order_ = 0;
    std::vector<double> fpoint_;
    std::vector<Rational> qpoint_;
};

/// The backend a function lives on (base point and order for jets).
Backend backend_of(const ScalarFn& f);

}  // namespace evid
