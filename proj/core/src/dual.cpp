#include "evid/dual.hpp"

#include "evid/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace evid {

namespace {

bool vanishes(const ScalarFn& f)
{
    if (f.backend() == BackendKind::Jet) return f.jet_value() == 0.0;
    return f.is_zero();
}

ScalarFn ipow(const ScalarFn& f, unsigned k)
{
    ScalarFn out = f.constant_like(1);
    for (unsigned i = 0; i < k; ++i) out = out * f;
    return out;
}

void check_generator_layout(const BlockShape& shape, const GeneratorComponents& a)
{
    if (a.size() != shape.blocks()) fail(Errc::ShapeMismatch, "generator needs one component list per block");
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha)
        if (a[alpha - 1].size() != shape.size(alpha) - 1)
            fail(Errc::ShapeMismatch, "block " + std::to_string(alpha) + " needs " + std::to_string(shape.size(alpha) - 1) +
                                          " generator components");
}

}  // namespace

ScalarFn DualFrame::a_at(std::size_t alpha, std::size_t i) const
{
    if (i == 1) return e[1].zero_like();
    return a.at(alpha - 1).at(i - 2);
}

VectorField DualFrame::block_field(std::size_t alpha, std::size_t i) const
{
    if (i > shape.size(alpha)) return VectorField(shape, backend_of(e[1]));
    return v.at(i - 1).restrict_to_block(alpha);
}

std::vector<VectorField> DualFrame::flat_fields() const
{
    std::vector<VectorField> out;
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha)
        for (std::size_t i = 1; i <= shape.size(alpha); ++i) out.push_back(block_field(alpha, i));
    return out;
}

VectorField generator_field(const BlockShape& shape, const GeneratorComponents& a, const Backend& backend)
{
    check_generator_layout(shape, a);
    VectorField v2(shape, backend);
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha)
        for (std::size_t i = 2; i <= shape.size(alpha); ++i) v2.at(alpha, i) = backend.lift(a[alpha - 1][i - 2]);
    return v2;
}

DualFrame build_frame(const VectorField& e, const GeneratorComponents& a)
{
    const BlockShape& shape = e.shape();
    const Backend backend = backend_of(e[1]);
    check_generator_layout(shape, a);

    DualFrame frame{shape, e, invert(e), {}, {}, VectorField(shape, backend)};
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        std::vector<ScalarFn> comps;
        for (const auto& c : a[alpha - 1]) comps.push_back(backend.lift(c));
        if (!comps.empty() && vanishes(comps.front()))
            throw Error(Errc::ZeroGenerator, "a_2 of block " + std::to_string(alpha) + " vanishes").with_indices({alpha});
        frame.a.push_back(std::move(comps));
    }

    const VectorField v2 = generator_field(shape, frame.a, backend);
    frame.v.push_back(e);
    if (shape.max_size() >= 2) frame.v.push_back(v2);
    for (std::size_t i = 3; i <= shape.max_size(); ++i) frame.v.push_back(circ(frame.einv, circ(frame.v.back(), v2)));
    frame.generator = circ(frame.einv, v2);
    return frame;
}

Residual frame_product_check(const DualFrame& frame)
{
    const BlockShape& shape = frame.shape;
    Residual out;
    out.identity = "frame_product";
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha)
        for (std::size_t i = 1; i <= shape.size(alpha); ++i)
            for (std::size_t beta = alpha; beta <= shape.blocks(); ++beta)
                for (std::size_t j = (beta == alpha ? i : 1); j <= shape.size(beta); ++j) {
                    VectorField r = dual_product(frame.block_field(alpha, i), frame.block_field(beta, j), frame.einv);
                    if (alpha == beta && i + j - 1 <= shape.size(alpha)) r -= frame.block_field(alpha, i + j - 1);
                    for (std::size_t k = 1; k <= shape.dimension(); ++k) out.add("product", {alpha, i, beta, j, k}, r[k]);
                }
    return out;
}

Residual vjj_check(const DualFrame& frame)
{
    const BlockShape& shape = frame.shape;
    Residual out;
    out.identity = "vjj";
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        const ScalarFn& e1 = frame.e.at(alpha, 1);
        for (std::size_t j = 2; j <= shape.size(alpha); ++j) {
            const ScalarFn expected = ipow(frame.a_at(alpha, 2), unsigned(j - 1)) / ipow(e1, unsigned(j - 2));
            out.add("vjj", {alpha, j}, frame.v[j - 1].at(alpha, j) - expected);
        }
    }
    return out;
}

Residual recursion_check(const DualFrame& frame)
{
    const BlockShape& shape = frame.shape;
    Residual out;
    out.identity = "frame_recursion";
    auto comp = [&](std::size_t j, std::size_t alpha, std::size_t pos) { return frame.v[j - 1].at(alpha, pos); };

    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        const std::size_t ma = shape.size(alpha);
        const ScalarFn inv_e1 = frame.einv.at(alpha, 1);
        auto ea = [&](std::size_t pos) { return frame.e.at(alpha, pos); };

        for (std::size_t j = 3; j <= ma; ++j) {
            for (std::size_t big = j; big <= ma; ++big) {
                ScalarFn lower = inv_e1.zero_like();
                for (std::size_t s = 1; s <= big - j; ++s) lower += comp(j, alpha, big - s) * ea(s + 1);
                ScalarFn cross = inv_e1.zero_like();
                for (std::size_t s = 1; s <= big - 1; ++s) cross += comp(j - 1, alpha, s) * comp(2, alpha, big - s + 1);
                out.add("ffsim", {alpha, j, big}, comp(j, alpha, big) - inv_e1 * (cross - lower));

                ScalarFn hat = inv_e1.zero_like();
                for (std::size_t s = 1; s <= big - j; ++s)
                    hat += comp(j, alpha, big - s) * ea(s + 1) - comp(j - 1, alpha, big - s - 1) * frame.a_at(alpha, s + 2);
                const ScalarFn rhs = frame.a_at(alpha, 2) * inv_e1 * comp(j - 1, alpha, big - 1) - inv_e1 * hat;
                out.add("ffhat", {alpha, j, big}, comp(j, alpha, big) - rhs);
            }
        }

        for (std::size_t i = 1; i + 1 <= ma; ++i) {
            for (std::size_t k = 1; k <= ma; ++k) {
                ScalarFn sum = inv_e1.zero_like();
                for (std::size_t p = i; p + 1 <= k; ++p)
                    for (std::size_t q = 2; q <= k - p + 1; ++q)
                        sum += comp(i, alpha, p) * comp(2, alpha, q) * frame.einv.at(alpha, k - p - q + 2);
                out.add("explicit", {alpha, i + 1, k}, comp(i + 1, alpha, k) - sum);
            }
        }

        for (std::size_t j = 1; j <= ma; ++j)
            for (std::size_t big = j; big <= ma; ++big)
                for (std::size_t k = 1; k <= shape.dimension(); ++k) {
                    const auto [beta, pos] = shape.block_of(k);
                    if (beta == alpha && pos < big - j + 3) continue;
                    out.add("support", {alpha, j, big, k}, comp(j, alpha, big).partial(k));
                }
    }
    out.append(vjj_check(frame));
    return out;
}

Residual q_residual(const VectorField& e, const GeneratorComponents& a)
{
    const BlockShape& shape = e.shape();
    const Backend backend = backend_of(e[1]);
    check_generator_layout(shape, a);
    Residual out;
    out.identity = "Q";
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        if (shape.size(alpha) < 2) continue;
        const std::size_t d1 = shape.flat(alpha, 1), d2 = shape.flat(alpha, 2);
        const ScalarFn a2 = backend.lift(a[alpha - 1][0]);
        out.add("Q", {alpha},
                e[d1] * a2.partial(d1) + e[d2] * a2.partial(d2) - a2 * e[d2].partial(d2));
    }
    return out;
}

Residual v2_conditions(const DualFrame& frame)
{
    Residual out;
    out.identity = "v2_conditions";
    const VectorField v2 = frame.v.size() >= 2 ? frame.v[1] : VectorField(frame.shape, backend_of(frame.e[1]));
    for (auto& entry : atlas_residual(v2).entries) {
        entry.group = entry.group == "atlas" ? "weak_ei" : "weak_ei_cross";
        out.entries.push_back(std::move(entry));
    }
    out.append(q_residual(frame.e, frame.a));
    const VectorField c = lie_bracket(frame.e, v2);
    for (std::size_t k = 1; k <= c.dimension(); ++k) out.add("commutator", {k}, c[k]);
    return out;
}

Residual commutator_check(const DualFrame& frame)
{
    const std::vector<VectorField> fields = frame.flat_fields();
    Residual out;
    out.identity = "commutators";
    for (std::size_t p = 0; p < fields.size(); ++p)
        for (std::size_t q = p + 1; q < fields.size(); ++q) {
            const VectorField c = lie_bracket(fields[p], fields[q]);
            for (std::size_t k = 1; k <= c.dimension(); ++k) out.add("bracket", {p + 1, q + 1, k}, c[k]);
        }
    return out;
}

Residual corollary_check(const DualFrame& frame)
{
    Residual out;
    out.identity = "commutator_corollary";
    const std::size_t count = frame.v.size();
    if (count < 2) return out;
    const VectorField base = lie_bracket(frame.v[0], frame.v[1]);
    std::vector<VectorField> pw{power(frame.generator, 0)};
    for (std::size_t k = 1; k + 3 <= 2 * count; ++k) pw.push_back(circ(frame.generator, pw.back()));
    for (std::size_t i = 1; i <= count; ++i)
        for (std::size_t j = i + 1; j <= count; ++j) {
            VectorField r = lie_bracket(frame.v[i - 1], frame.v[j - 1]) - Rational(long(j - i)) * circ(pw[i + j - 3], base);
            for (std::size_t k = 1; k <= r.dimension(); ++k) out.add("corollary", {i, j, k}, r[k]);
        }
    return out;
}

namespace {

/// Solves A c = b over the rationals; free unknowns are set to zero.
std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        const Rational inv = 1 / a[r][c];
        for (std::size_t k = c; k < cols; ++k) a[r][k] *= inv;
        b[r] *= inv;
        for (std::size_t q = 0; q < rows; ++q) {
            if (q == r || a[q][c] == 0) continue;
            const Rational f = a[q][c];
            for (std::size_t k = c; k < cols; ++k) a[q][k] -= f * a[r][k];
            b[q] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t q = r; q < rows; ++q)
        if (b[q] != 0) return std::nullopt;
    std::vector<Rational> x(cols, Rational(0));
    for (std::size_t q = 0; q < r; ++q) x[pivot_col[q]] = b[q];
    return x;
}

/// Polynomial C(u1, u2) with E1 d1 C + E2 d2 C - kappa C = -s.
std::optional<Poly> solve_c_polynomial(const Poly& e1, const Poly& e2, const Poly& kappa, const Poly& s, std::size_t d1,
                                       std::size_t d2, bool vanish_on_u1_zero)
{
    const std::size_t n = s.nvars();
    const unsigned bound = s.total_degree() + 2;
    std::vector<Poly> basis;
    for (unsigned deg = 0; deg <= bound; ++deg)
        for (unsigned p = 0; p <= deg; ++p) {
            if (vanish_on_u1_zero && p == 0) continue;
            Poly::Exponents ex(n, 0);
            ex[d1 - 1] = p;
            ex[d2 - 1] = deg - p;
            basis.push_back(Poly::monomial(ex, 1));
        }

    std::map<Poly::Exponents, std::size_t> row_of;
    std::vector<Poly> images;
    for (const auto& m : basis) {
        images.push_back(e1 * m.partial(d1) + e2 * m.partial(d2) - kappa * m);
        for (const auto& [ex, c] : images.back().terms()) row_of.emplace(ex, row_of.size());
    }
    for (const auto& [ex, c] : s.terms()) row_of.emplace(ex, row_of.size());

    std::vector<std::vector<Rational>> a(row_of.size(), std::vector<Rational>(basis.size(), Rational(0)));
    std::vector<Rational> b(row_of.size(), Rational(0));
    for (std::size_t k = 0; k < images.size(); ++k)
        for (const auto& [ex, c] : images[k].terms()) a[row_of.at(ex)][k] = c;
    for (const auto& [ex, c] : s.terms()) b[row_of.at(ex)] = -c;

    auto x = solve_linear(std::move(a), std::move(b));
    if (!x) return std::nullopt;
    Poly c(n);
    for (std::size_t k = 0; k < basis.size(); ++k) c += basis[k] * (*x)[k];
    return c;
}

/// Keeps only the Taylor coefficients in the listed variables.
FloatJet restrict_jet(const FloatJet& j, std::span<const std::size_t> keep)
{
    FloatJet out = j;
    auto coeffs = out.coefficients();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const auto& e = out.layout().multi_index(k);
        for (std::size_t v = 0; v < e.size(); ++v)
            if (e[v] > 0 && std::find(keep.begin(), keep.end(), v + 1) == keep.end()) {
                coeffs[k] = 0.0;
                break;
            }
    }
    return out;
}

/// Source of the C_m equation: component m of [E, v2] with C_m = 0.
ScalarFn c_source(const BlockShape& shape, std::size_t alpha, const VectorField& e, const std::vector<ScalarFn>& comps,
                  const ScalarFn& p, std::size_t m)
{
    const ScalarFn& em = e.at(alpha, m);
    ScalarFn s = em.zero_like();
    for (std::size_t i = 1; i <= m; ++i) s += e.at(alpha, i) * p.partial(shape.flat(alpha, i));
    for (std::size_t i = 2; i < m; ++i) s -= comps[i - 1] * em.partial(shape.flat(alpha, i));
    s -= p * em.partial(shape.flat(alpha, m));
    return s;
}

}  // namespace

GeneratorComponents construct_a(const SolvedEI& solved, const std::vector<ScalarFn>& a2, ConstructionMode mode,
                                const NumericConstruction& numeric)
{
    const BlockShape& shape = solved.e.shape();
    const std::size_t n = shape.dimension();
    if (a2.size() != shape.blocks()) fail(Errc::ShapeMismatch, "construct_a needs one a_2 per block");

    const bool exact = mode == ConstructionMode::Exact;
    if (!exact && numeric.point.size() != n) fail(Errc::InvalidInput, "numeric construction needs a base point");
    const unsigned work_order = numeric.order + 1;
    const Backend backend = exact ? Backend::poly(n) : Backend::jet(numeric.point, work_order);
    const VectorField e = exact ? solved.e : lift(solved.e, backend);

    GeneratorComponents seeds;
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        if (shape.size(alpha) == 1) {
            seeds.emplace_back();
            continue;
        }
        if (exact && a2[alpha - 1].backend() != BackendKind::Poly) {
            if (a2[alpha - 1].backend() == BackendKind::Rational && a2[alpha - 1].as_rational().is_polynomial())
                seeds.push_back({ScalarFn(a2[alpha - 1].as_rational().numerator())});
            else
                fail(Errc::InvalidInput, "exact construction needs a polynomial a_2");
        } else {
            seeds.push_back({backend.lift(a2[alpha - 1])});
        }
        seeds.back().resize(shape.size(alpha) - 1, backend.zero());
    }

    Residual q = q_residual(e, seeds);
    for (const auto& entry : q.entries) {
        bool bad = exact ? !entry.value.is_zero() : false;
        if (!exact)
            for (double c : entry.value.as_float_jet().coefficients()) bad = bad || std::abs(c) > numeric.tol;
        if (bad)
            throw Error(Errc::QViolated, "a_2 of block " + std::to_string(entry.indices[0]) + " violates Q")
                .with_indices(entry.indices)
                .with_detail(entry.value.to_string());
    }

    GeneratorComponents out;
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        const std::size_t ma = shape.size(alpha);
        std::vector<ScalarFn> comps{backend.zero()};
        if (ma >= 2) comps.push_back(seeds[alpha - 1][0]);
        const std::size_t d1 = shape.flat(alpha, 1);
        const std::size_t d2 = ma >= 2 ? shape.flat(alpha, 2) : d1;

        for (std::size_t m = 3; m <= ma; ++m) {
            const ScalarFn p = atlas_potential(shape, alpha, comps, m);
            const ScalarFn kappa = e.at(alpha, m).partial(shape.flat(alpha, m));
            ScalarFn s = c_source(shape, alpha, e, comps, p, m);

            ScalarFn c = backend.zero();
            if (exact) {
                std::vector<std::size_t> upper;
                for (std::size_t l = 3; l <= ma; ++l) upper.push_back(shape.flat(alpha, l));
                const Poly s0 = s.as_poly().set_zero(upper);
                if (!s0.is_zero()) {
                    const Poly& e1 = e.at(alpha, 1).as_poly();
                    const Poly& e2 = e.at(alpha, 2).as_poly();
                    auto sol = solve_c_polynomial(e1, e2, kappa.as_poly(), s0, d1, d2, true);
                    if (!sol) sol = solve_c_polynomial(e1, e2, kappa.as_poly(), s0, d1, d2, false);
                    if (!sol)
                        throw Error(Errc::NoPolynomialSolution,
                                    "no polynomial integration function for a_" + std::to_string(m) + " of block " +
                                        std::to_string(alpha) + "; numeric mode solves it locally")
                            .with_indices({alpha, m})
                            .with_detail(s0.to_string());
                    c = *sol;
                }
            } else {
                const std::size_t keep[] = {d1, d2};
                const FloatJet s0 = restrict_jet(s.as_float_jet(), keep);
                const FloatJet e1 = restrict_jet(e.at(alpha, 1).as_float_jet(), keep);
                const FloatJet e2 = restrict_jet(e.at(alpha, 2).as_float_jet(), keep);
                const FloatJet k = restrict_jet(kappa.as_float_jet(), keep);
                const FloatJet inv_e1 = e1.reciprocal();
                // Each pass fixes one more order in u^1 - p^1.
                FloatJet cj = FloatJet::constant(numeric.point, work_order, 0.0);
                for (unsigned it = 0; it <= work_order + 1; ++it) {
                    FloatJet rhs = (k * cj - s0 - e2 * cj.partial(d2)) * inv_e1;
                    cj = rhs.integrate(d1).truncate(work_order);
                }
                c = cj;
            }
            comps.push_back(p + c);
        }

        std::vector<ScalarFn> block;
        for (std::size_t i = 2; i <= ma; ++i) {
            const ScalarFn& f = comps[i - 1];
            block.push_back(exact ? f : ScalarFn(f.as_float_jet().truncate(numeric.order)));
        }
        out.push_back(std::move(block));
    }
    return out;
}

}  // namespace evid
