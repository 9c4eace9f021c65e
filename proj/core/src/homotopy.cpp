#include "evid/homotopy.hpp"

#include "evid/error.hpp"

#include <algorithm>
#include <cmath>

namespace evid {

namespace {

bool in_vars(std::span<const std::size_t> vars, std::size_t index)
{
    return std::find(vars.begin(), vars.end(), index) != vars.end();
}

unsigned degree_in_vars(const Poly::Exponents& e, std::span<const std::size_t> vars)
{
    unsigned d = 0;
    for (auto v : vars) d += e[v - 1];
    return d;
}

template <typename F> const F* find_component(const OneForm<F>& omega, std::size_t index)
{
    for (const auto& [l, g] : omega)
        if (l == index) return &g;
    return nullptr;
}

void check_indices(std::size_t nvars, std::span<const std::size_t> vars)
{
    for (auto v : vars)
        if (v == 0 || v > nvars) fail(Errc::IndexOutOfRange, "integration variable u" + std::to_string(v));
}

}  // namespace

Poly homotopy_integrate(const OneForm<Poly>& omega, std::span<const std::size_t> vars)
{
    if (omega.empty()) fail(Errc::InvalidInput, "homotopy_integrate needs at least one component to fix the arity");
    const std::size_t n = omega.front().second.nvars();
    check_indices(n, vars);
    for (const auto& [l, g] : omega) {
        if (g.nvars() != n) fail(Errc::BackendMismatch, "one-form components of different arity");
        if (!in_vars(vars, l) && !g.is_zero())
            fail(Errc::InvalidInput, "one-form has a component along u" + std::to_string(l) + " outside the variable set");
    }

    const Poly zero(n);
    for (std::size_t a = 0; a < vars.size(); ++a) {
        for (std::size_t b = a + 1; b < vars.size(); ++b) {
            const std::size_t k = std::min(vars[a], vars[b]);
            const std::size_t l = std::max(vars[a], vars[b]);
            const Poly* gk = find_component(omega, k);
            const Poly* gl = find_component(omega, l);
            Poly defect = (gl ? gl->partial(k) : zero) - (gk ? gk->partial(l) : zero);
            if (!defect.is_zero())
                throw Error(Errc::NotClosed, "one-form is not closed in (u" + std::to_string(k) + ", u" +
                                                 std::to_string(l) + "): " + defect.to_string())
                    .with_indices({k, l})
                    .with_detail(defect.to_string());
        }
    }

    Poly out(n);
    for (const auto& [l, g] : omega) {
        for (const auto& [e, c] : g.terms()) {
            Poly::Exponents up = e;
            up[l - 1] += 1;
            out.add_term(up, c / Rational(degree_in_vars(e, vars) + 1));
        }
    }
    return out;
}

ScalarFn homotopy_integrate(const OneForm<ScalarFn>& omega, std::span<const std::size_t> vars)
{
    if (omega.empty()) fail(Errc::InvalidInput, "homotopy_integrate needs at least one component to fix the arity");
    if (omega.front().second.backend() == BackendKind::Jet) {
        if (omega.front().second.is_float_jet()) {
            OneForm<FloatJet> form;
            for (const auto& [l, g] : omega) form.emplace_back(l, g.as_float_jet());
            return homotopy_integrate<double>(form, vars);
        }
        OneForm<ExactJet> form;
        for (const auto& [l, g] : omega) form.emplace_back(l, g.as_exact_jet());
        return homotopy_integrate<Rational>(form, vars);
    }
    OneForm<Poly> form;
    for (const auto& [l, g] : omega) {
        if (g.backend() != BackendKind::Poly)
            fail(Errc::BackendMismatch, "homotopy integration needs the polynomial or jet backend");
        form.emplace_back(l, g.as_poly());
    }
    return homotopy_integrate(form, vars);
}

template <typename T>
Jet<T> homotopy_integrate(const OneForm<Jet<T>>& omega, std::span<const std::size_t> vars, double closed_tol)
{
    if (omega.empty()) fail(Errc::InvalidInput, "homotopy_integrate needs at least one component to fix the arity");
    const auto& first = omega.front().second;
    const std::size_t n = first.nvars();
    check_indices(n, vars);
    unsigned order = first.order();
    for (const auto& [l, g] : omega) {
        first.check_compatible(g);
        order = std::min(order, g.order());
        if (!in_vars(vars, l)) fail(Errc::InvalidInput, "one-form component along u" + std::to_string(l) + " outside the variable set");
    }

    if (closed_tol >= 0.0 && order > 0) {
        for (const auto& [k, gk] : omega) {
            for (const auto& [l, gl] : omega) {
                if (k >= l) continue;
                Jet<T> defect = gl.partial(k) - gk.partial(l);
                for (const auto& c : defect.coefficients()) {
                    if (std::abs(convert_to_double(c)) > closed_tol)
                        throw Error(Errc::NotClosed, "jet one-form is not closed in (u" + std::to_string(k) + ", u" +
                                                         std::to_string(l) + ")")
                            .with_indices({k, l});
                }
            }
        }
    }

    auto up = JetLayout::get(n, order + 1);
    Jet<T> out(up, first.point());
    auto dst = out.coefficients();
    for (const auto& [l, g] : omega) {
        const auto& layout = g.layout();
        auto src = g.coefficients();
        const std::size_t count = JetLayout::get(n, order)->size();
        for (std::size_t k = 0; k < count; ++k) {
            Poly::Exponents e = layout.multi_index(k);
            const unsigned d = degree_in_vars(e, vars);
            e[l - 1] += 1;
            dst[up->index_of(e)] = dst[up->index_of(e)] + src[k] / convert_rational<T>(Rational(d + 1));
        }
    }
    return out;
}

template Jet<double> homotopy_integrate<double>(const OneForm<Jet<double>>&, std::span<const std::size_t>, double);
template Jet<Rational> homotopy_integrate<Rational>(const OneForm<Jet<Rational>>&, std::span<const std::size_t>, double);

}  // namespace evid
