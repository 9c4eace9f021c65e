#include "evid/ei_solver.hpp"

#include "evid/homotopy.hpp"

namespace evid {

EISeed EISeed::zero(const BlockShape& shape)
{
    EISeed s{shape, {}};
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha)
        s.f.emplace_back(shape.size(alpha), Poly(shape.dimension()));
    return s;
}

EISeed EISeed::euler(const BlockShape& shape)
{
    EISeed s = zero(shape);
    const std::size_t n = shape.dimension();
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha)
        for (std::size_t i = 1; i <= std::min<std::size_t>(2, shape.size(alpha)); ++i)
            s.at(alpha, i) = Poly::variable(n, shape.flat(alpha, i));
    return s;
}

void verify_seed_support(const EISeed& seed)
{
    const BlockShape& shape = seed.shape;
    if (seed.f.size() != shape.blocks()) fail(Errc::ShapeMismatch, "seed block count differs from shape");
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        if (seed.f[alpha - 1].size() != shape.size(alpha))
            fail(Errc::ShapeMismatch, "seed of block " + std::to_string(alpha) + " has the wrong number of functions");
        for (std::size_t i = 1; i <= shape.size(alpha); ++i) {
            const Poly& f = seed.at(alpha, i);
            if (f.nvars() != shape.dimension())
                fail(Errc::ShapeMismatch, "seed function arity differs from the dimension");
            for (std::size_t v : f.support()) {
                const auto [beta, j] = shape.block_of(v);
                const bool allowed = beta == alpha && (j == 1 || (j == 2 && i >= 2));
                if (!allowed)
                    throw Error(Errc::SeedSupportViolation, "f_" + std::to_string(i) + " of block " +
                                                                std::to_string(alpha) + " depends on u" + std::to_string(v))
                        .with_indices({alpha, i, v})
                        .with_detail(f.to_string());
            }
        }
    }
}

ScalarFn atlas_potential(const BlockShape& shape, std::size_t alpha, const std::vector<ScalarFn>& lower, std::size_t m)
{
    if (m < 3 || lower.size() < m - 1) fail(Errc::InvalidInput, "atlas potential needs m >= 3 and X^1..X^{m-1}");
    const std::size_t d1 = shape.flat(alpha, 1), d2 = shape.flat(alpha, 2);
    OneForm<ScalarFn> form;
    std::vector<std::size_t> vars;
    for (std::size_t l = 3; l <= m; ++l) {
        ScalarFn g = Rational(long(l) - 1) * lower[m - l + 1].partial(d2);
        if (l > 2 && m - l + 1 >= 1) g -= Rational(long(l) - 2) * lower[m - l].partial(d1);
        form.emplace_back(shape.flat(alpha, l), std::move(g));
        vars.push_back(shape.flat(alpha, l));
    }
    return homotopy_integrate(form, vars);
}

SolvedEI solve(const EISeed& seed)
{
    verify_seed_support(seed);
    const BlockShape& shape = seed.shape;
    const std::size_t n = shape.dimension();
    SolvedEI out{seed, VectorField(shape, Backend::poly(n)), std::vector<Poly>(n, Poly(n))};
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        std::vector<ScalarFn> comps;
        for (std::size_t m = 1; m <= shape.size(alpha); ++m) {
            Poly em = seed.at(alpha, m);
            if (m >= 3) {
                Poly p = atlas_potential(shape, alpha, comps, m).as_poly();
                out.p[shape.flat(alpha, m) - 1] = p;
                em += p;
            }
            comps.emplace_back(em);
            out.e.at(alpha, m) = comps.back();
        }
    }
    return out;
}

bool verify_seed_freeness(const EISeed& a, const EISeed& b)
{
    if (!(a.shape == b.shape)) return false;
    const SolvedEI sa = solve(a), sb = solve(b);
    const BlockShape& shape = a.shape;
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        bool prefix_equal = true;
        for (std::size_t m = 1; m <= shape.size(alpha); ++m) {
            const std::size_t fi = shape.flat(alpha, m);
            if (prefix_equal && !(sa.p[fi - 1] == sb.p[fi - 1])) return false;
            const Poly diff = sa.component(fi) - sb.component(fi);
            const Poly expected = (sa.p[fi - 1] - sb.p[fi - 1]) + (a.at(alpha, m) - b.at(alpha, m));
            if (!(diff == expected)) return false;
            prefix_equal = prefix_equal && a.at(alpha, m) == b.at(alpha, m);
        }
    }
    return true;
}

}  // namespace evid
