#include "evid/scalar.hpp"

#include "evid/error.hpp"

#include <cmath>
#include <type_traits>

namespace evid {

std::string_view to_string(BackendKind kind) noexcept
{
    switch (kind) {
    case BackendKind::Poly: return "poly";
    case BackendKind::Rational: return "rational";
    case BackendKind::Jet: return "jet";
    }
    return "unknown";
}

namespace {

[[noreturn]] void mismatch(const ScalarFn& a, const ScalarFn& b)
{
    fail(Errc::BackendMismatch, std::string("operands on backends ") + std::string(to_string(a.backend())) +
                                    (a.is_float_jet() ? "(float)" : "") + " and " + std::string(to_string(b.backend())) +
                                    (b.is_float_jet() ? "(float)" : ""));
}

template <typename Op> ScalarFn binary(const ScalarFn& a, const ScalarFn& b, Op op)
{
    if (a.rep().index() != b.rep().index()) mismatch(a, b);
    return std::visit(
        [&](const auto& x) -> ScalarFn {
            using X = std::decay_t<decltype(x)>;
            return ScalarFn(op(x, std::get<X>(b.rep())));
        },
        a.rep());
}

}  // namespace

BackendKind ScalarFn::backend() const noexcept
{
    switch (rep_.index()) {
    case 0: return BackendKind::Poly;
    case 1: return BackendKind::Rational;
    default: return BackendKind::Jet;
    }
}

std::size_t ScalarFn::nvars() const noexcept
{
    return std::visit([](const auto& x) { return x.nvars(); }, rep_);
}

const Poly& ScalarFn::as_poly() const
{
    if (auto p = std::get_if<Poly>(&rep_)) return *p;
    fail(Errc::BackendMismatch, "expected a polynomial");
}

const RationalFunction& ScalarFn::as_rational() const
{
    if (auto p = std::get_if<RationalFunction>(&rep_)) return *p;
    fail(Errc::BackendMismatch, "expected a rational function");
}

const ExactJet& ScalarFn::as_exact_jet() const
{
    if (auto p = std::get_if<ExactJet>(&rep_)) return *p;
    fail(Errc::BackendMismatch, "expected an exact jet");
}

const FloatJet& ScalarFn::as_float_jet() const
{
    if (auto p = std::get_if<FloatJet>(&rep_)) return *p;
    fail(Errc::BackendMismatch, "expected a floating-point jet");
}

ScalarFn ScalarFn::constant_like(const Rational& c) const
{
    return std::visit(
        [&](const auto& x) -> ScalarFn {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, Poly>) return Poly::constant(x.nvars(), c);
            else if constexpr (std::is_same_v<X, RationalFunction>) return RationalFunction(Poly::constant(x.nvars(), c));
            else if constexpr (std::is_same_v<X, ExactJet>) return ExactJet::constant(x.point(), x.order(), c);
            else return FloatJet::constant(x.point(), x.order(), c.get_d());
        },
        rep_);
}

bool ScalarFn::is_zero() const
{
    return std::visit([](const auto& x) { return x.is_zero(); }, rep_);
}

double ScalarFn::magnitude() const
{
    return std::visit(
        [](const auto& x) -> double {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, Poly>) return x.max_abs_coefficient().get_d();
            else if constexpr (std::is_same_v<X, RationalFunction>) return x.numerator().max_abs_coefficient().get_d();
            else if constexpr (std::is_same_v<X, ExactJet>) return std::abs(x.value().get_d());
            else return std::abs(x.value());
        },
        rep_);
}

double ScalarFn::jet_value() const
{
    if (auto j = std::get_if<FloatJet>(&rep_)) return j->value();
    if (auto j = std::get_if<ExactJet>(&rep_)) return j->value().get_d();
    fail(Errc::BackendMismatch, "jet_value on a non-jet function");
}

ScalarFn ScalarFn::partial(std::size_t index) const
{
    return std::visit([&](const auto& x) -> ScalarFn { return x.partial(index); }, rep_);
}

double ScalarFn::evaluate(std::span<const double> point) const
{
    if (auto p = std::get_if<Poly>(&rep_)) return p->evaluate(point);
    if (auto r = std::get_if<RationalFunction>(&rep_)) return r->evaluate(point);
    fail(Errc::BackendMismatch, "pointwise evaluation needs a polynomial or rational function");
}

Rational ScalarFn::evaluate(std::span<const Rational> point) const
{
    if (auto p = std::get_if<Poly>(&rep_)) return p->evaluate(point);
    if (auto r = std::get_if<RationalFunction>(&rep_)) {
        for (const auto& f : r->factors())
            if (f.base.evaluate(point) == 0) fail(Errc::DivisionByZeroFunction, "denominator vanishes at point");
        return r->evaluate(point);
    }
    fail(Errc::BackendMismatch, "pointwise evaluation needs a polynomial or rational function");
}

std::string ScalarFn::to_string() const
{
    return std::visit(
        [](const auto& x) -> std::string {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, Poly> || std::is_same_v<X, RationalFunction>) return x.to_string();
            else if constexpr (std::is_same_v<X, ExactJet>) return "jet(" + evid::to_string(x.value()) + ")";
            else return "jet(" + std::to_string(x.value()) + ")";
        },
        rep_);
}

ScalarFn operator+(const ScalarFn& a, const ScalarFn& b)
{
    return binary(a, b, [](const auto& x, const auto& y) { return x + y; });
}

ScalarFn operator-(const ScalarFn& a, const ScalarFn& b)
{
    return binary(a, b, [](const auto& x, const auto& y) { return x - y; });
}

ScalarFn operator*(const ScalarFn& a, const ScalarFn& b)
{
    return binary(a, b, [](const auto& x, const auto& y) { return x * y; });
}

ScalarFn operator/(const ScalarFn& a, const ScalarFn& b)
{
    if (a.rep().index() != b.rep().index()) mismatch(a, b);
    if (auto pa = std::get_if<Poly>(&a.rep())) {
        const auto& pb = std::get<Poly>(b.rep());
        if (pb.is_zero()) fail(Errc::DivisionByZeroFunction, "division by the zero polynomial");
        auto q = pa->divide_exact(pb);
        if (!q) fail(Errc::UnsupportedDivision, "(" + pa->to_string() + ") is not divisible by (" + pb.to_string() + ")");
        return *q;
    }
    return binary(a, b, [](const auto& x, const auto& y) {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, Poly>) return x;  // unreachable, handled above
        else return x / y;
    });
}

ScalarFn ScalarFn::operator-() const
{
    return std::visit([](const auto& x) -> ScalarFn { return -x; }, rep_);
}

Backend Backend::poly(std::size_t nvars)
{
    Backend b;
    b.kind_ = BackendKind::Poly;
    b.nvars_ = nvars;
    return b;
}

Backend Backend::rational(std::size_t nvars)
{
    Backend b;
    b.kind_ = BackendKind::Rational;
    b.nvars_ = nvars;
    return b;
}

Backend Backend::jet(std::vector<double> point, unsigned order)
{
    Backend b;
    b.kind_ = BackendKind::Jet;
    b.float_ = true;
    b.nvars_ = point.size();
    b.order_ = order;
    b.fpoint_ = std::move(point);
    return b;
}

Backend Backend::exact_jet(std::vector<Rational> point, unsigned order)
{
    Backend b;
    b.kind_ = BackendKind::Jet;
    b.nvars_ = point.size();
    b.order_ = order;
    b.qpoint_ = std::move(point);
    return b;
}

ScalarFn Backend::constant(const Rational& c) const
{
    return lift(Poly::constant(nvars_, c));
}

ScalarFn Backend::variable(std::size_t index) const
{
    return lift(Poly::variable(nvars_, index));
}

ScalarFn Backend::lift(const Poly& p) const
{
    if (p.nvars() != nvars_) fail(Errc::BackendMismatch, "polynomial arity differs from backend dimension");
    switch (kind_) {
    case BackendKind::Poly: return p;
    case BackendKind::Rational: return RationalFunction(p);
    case BackendKind::Jet:
        if (float_) return taylor_expand<double>(p, fpoint_, order_);
        return taylor_expand<Rational>(p, qpoint_, order_);
    }
    fail(Errc::InvalidInput, "unknown backend");
}

ScalarFn Backend::lift(const RationalFunction& r) const
{
    switch (kind_) {
    case BackendKind::Poly:
        if (!r.is_polynomial()) fail(Errc::UnsupportedDivision, "rational function on the polynomial backend");
        return r.numerator();
    case BackendKind::Rational: return r;
    case BackendKind::Jet: {
        ScalarFn value = lift(r.numerator());
        for (const auto& f : r.factors()) {
            ScalarFn base = lift(f.base);
            for (unsigned k = 0; k < f.exponent; ++k) value = value / base;
        }
        return value;
    }
    }
    fail(Errc::InvalidInput, "unknown backend");
}

ScalarFn Backend::lift(const ScalarFn& f) const
{
    if (auto p = std::get_if<Poly>(&f.rep())) return lift(*p);
    if (auto r = std::get_if<RationalFunction>(&f.rep())) return lift(*r);
    if (kind_ == BackendKind::Jet) {
        // Already a jet: accept it when it lives at this backend's point.
        if (float_ && f.is_float_jet() && f.as_float_jet().point() == fpoint_) return f.as_float_jet().truncate(order_);
        if (!float_ && !f.is_float_jet() && f.as_exact_jet().point() == qpoint_) return f.as_exact_jet().truncate(order_);
    }
    fail(Errc::BackendMismatch, "jets can only be lifted onto a jet backend at the same point");
}

Backend backend_of(const ScalarFn& f)
{
    switch (f.rep().index()) {
    case 0: return Backend::poly(f.nvars());
    case 1: return Backend::rational(f.nvars());
    case 2: return Backend::exact_jet(f.as_exact_jet().point(), f.as_exact_jet().order());
    default: return Backend::jet(f.as_float_jet().point(), f.as_float_jet().order());
    }
}

std::string Backend::name() const
{
    if (kind_ == BackendKind::Jet) return float_ ? "jet" : "exact-jet";
    return std::string(to_string(kind_));
}

}  // namespace evid
