#include "evid/calculus.hpp"

#include <cmath>

namespace evid {

OperatorField::OperatorField(BlockShape shape, const Backend& backend) : shape_(std::move(shape))
{
    const std::size_t n = shape_.dimension();
    rows_.assign(n, std::vector<ScalarFn>(n, backend.zero()));
}

OperatorField::OperatorField(BlockShape shape, std::vector<std::vector<ScalarFn>> rows)
    : shape_(std::move(shape)), rows_(std::move(rows))
{
    if (rows_.size() != shape_.dimension()) fail(Errc::ShapeMismatch, "operator row count differs from dimension");
    for (const auto& r : rows_)
        if (r.size() != shape_.dimension()) fail(Errc::ShapeMismatch, "operator is not square");
}

VectorField OperatorField::apply(const VectorField& x) const
{
    const std::size_t n = dimension();
    std::vector<ScalarFn> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ScalarFn sum = rows_[i][0] * x[1];
        for (std::size_t j = 1; j < n; ++j) sum += rows_[i][j] * x[j + 1];
        out.push_back(std::move(sum));
    }
    return VectorField(shape_, std::move(out));
}

VectorField OperatorField::column(std::size_t j) const
{
    std::vector<ScalarFn> out;
    for (std::size_t i = 0; i < dimension(); ++i) out.push_back(rows_[i].at(j - 1));
    return VectorField(shape_, std::move(out));
}

void Residual::add(std::string group, std::vector<std::size_t> indices, ScalarFn value)
{
    if (backend.empty()) backend = value.is_float_jet() ? "jet" : std::string(to_string(value.backend()));
    entries.push_back({std::move(group), std::move(indices), std::move(value), {}});
}

void Residual::append(const Residual& other)
{
    if (backend.empty()) backend = other.backend;
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

bool Residual::exact() const
{
    for (const auto& e : entries)
        if (e.value.backend() == BackendKind::Jet && e.value.is_float_jet()) return false;
    return true;
}

double Residual::max_abs() const
{
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.value.magnitude());
    return m;
}

const ResidualEntry* Residual::worst() const
{
    const ResidualEntry* best = nullptr;
    double m = -1.0;
    for (const auto& e : entries) {
        const double v = e.value.magnitude();
        if (v > m || (!best && !e.value.is_zero())) {
            m = v;
            best = &e;
        }
    }
    return best;
}

std::size_t Residual::nonzero_count(double tol) const
{
    std::size_t count = 0;
    for (const auto& e : entries) {
        if (e.value.is_float_jet()) {
            if (!(std::abs(e.value.jet_value()) <= tol)) ++count;
        } else if (e.value.backend() == BackendKind::Jet) {
            if (e.value.as_exact_jet().value() != 0) ++count;
        } else if (!e.value.is_zero()) {
            ++count;
        }
    }
    return count;
}

bool Residual::passes(double tol) const
{
    return nonzero_count(tol) == 0;
}

Residual Residual::group(const std::string& name) const
{
    Residual out;
    out.identity = identity + "/" + name;
    out.backend = backend;
    for (const auto& e : entries)
        if (e.group == name) out.entries.push_back(e);
    return out;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y)
{
    if (!(x.shape() == y.shape())) fail(Errc::ShapeMismatch, "bracket of fields with different shapes");
    const std::size_t n = x.dimension();
    std::vector<ScalarFn> out;
    out.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        ScalarFn sum = x[k].zero_like();
        for (std::size_t i = 1; i <= n; ++i) {
            if (!x[i].is_zero()) sum += x[i] * y[k].partial(i);
            if (!y[i].is_zero()) sum -= y[i] * x[k].partial(i);
        }
        out.push_back(std::move(sum));
    }
    return VectorField(x.shape(), std::move(out));
}

ProductProvider circ_product()
{
    return [](const VectorField& x, const VectorField& y) { return circ(x, y); };
}

ProductProvider dual_product_with(const VectorField& einv)
{
    return [einv](const VectorField& x, const VectorField& y) { return dual_product(x, y, einv); };
}

Residual hm_residual(const ProductProvider& product, const BlockShape& shape, const Backend& backend)
{
    const std::size_t n = shape.dimension();
    std::vector<VectorField> coord;
    for (std::size_t i = 1; i <= n; ++i) coord.push_back(coordinate_field(shape, backend, i));

    // P[a][b] = d_a . d_b, symmetric.
    std::vector<std::vector<VectorField>> p(n, std::vector<VectorField>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            p[a][b] = product(coord[a], coord[b]);
            p[b][a] = p[a][b];
        }

    // L_X(.)(Z, W) = [X, Z.W] - [X, Z].W - Z.[X, W].
    auto lie_of_product = [&](const VectorField& x, std::size_t c, std::size_t d) {
        return lie_bracket(x, p[c][d]) - product(lie_bracket(x, coord[c]), coord[d]) -
               product(coord[c], lie_bracket(x, coord[d]));
    };

    Residual out;
    out.identity = "hertling_manin";
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = c; d < n; ++d) {
                    VectorField r = lie_of_product(p[a][b], c, d) - product(coord[a], lie_of_product(coord[b], c, d)) -
                                    product(coord[b], lie_of_product(coord[a], c, d));
                    for (std::size_t i = 1; i <= n; ++i) out.add("hm", {a + 1, b + 1, c + 1, d + 1, i}, r[i]);
                }
    return out;
}

namespace {

/// E component at position `pos` of block `alpha`, zero when out of range.
std::optional<ScalarFn> block_component(const VectorField& e, std::size_t alpha, long pos)
{
    if (pos < 1 || static_cast<std::size_t>(pos) > e.shape().size(alpha)) return std::nullopt;
    return e.at(alpha, static_cast<std::size_t>(pos));
}

}  // namespace

Residual ei_residual(const VectorField& e)
{
    const BlockShape& shape = e.shape();
    const std::size_t n = shape.dimension();
    const bool single_block = shape.blocks() == 1;

    // [e, E] = sum_sigma d_{1(sigma)} E.
    VectorField unit_bracket = e.partial(shape.flat(1, 1));
    for (std::size_t s = 2; s <= shape.blocks(); ++s) unit_bracket += e.partial(shape.flat(s, 1));

    Residual out;
    out.identity = "eventual_identity";
    for (std::size_t fi = 1; fi <= n; ++fi) {
        const auto [alpha, i] = shape.block_of(fi);
        for (std::size_t fj = 1; fj <= n; ++fj) {
            const auto [beta, j] = shape.block_of(fj);
            for (std::size_t fk = fj; fk <= n; ++fk) {
                const auto [gamma, k] = shape.block_of(fk);
                if (single_block && (j == 1 || k == 1)) continue;
                ScalarFn r = e[fi].zero_like();
                if (beta == gamma && j + k - 1 <= shape.size(beta))
                    r -= e[fi].partial(shape.flat(beta, j + k - 1));
                if (alpha == gamma)
                    if (auto c = block_component(e, alpha, long(i) - long(k) + 1)) r += c->partial(fj);
                if (alpha == beta)
                    if (auto c = block_component(e, alpha, long(i) - long(j) + 1)) r += c->partial(fk);
                if (alpha == beta && alpha == gamma) {
                    const long pos = long(i) - long(j) - long(k) + 2;
                    if (pos >= 1) r -= unit_bracket.at(alpha, static_cast<std::size_t>(pos));
                }
                out.add("ei", {fi, fj, fk}, r);
            }
        }
    }
    return out;
}

Residual atlas_residual(const VectorField& e)
{
    const BlockShape& shape = e.shape();
    const std::size_t n = shape.dimension();
    Residual out;
    out.identity = "atlas";
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        const std::size_t ma = shape.size(alpha);
        const std::size_t d1 = shape.flat(alpha, 1);
        for (std::size_t m = 1; m <= ma; ++m) {
            const ScalarFn& em = e.at(alpha, m);
            for (std::size_t l = 1; l <= ma; ++l) {
                ScalarFn r = em.partial(shape.flat(alpha, l));
                if (l <= m) {
                    if (l >= 2)
                        if (auto c = block_component(e, alpha, long(m) - long(l) + 2))
                            r -= Rational(long(l) - 1) * c->partial(shape.flat(alpha, 2));
                    if (l != 2)
                        if (auto c = block_component(e, alpha, long(m) - long(l) + 1))
                            r += Rational(long(l) - 2) * c->partial(d1);
                }
                out.add("atlas", {alpha, l, m}, r);
            }
        }
    }
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t alpha = shape.block_of(i).first;
        for (std::size_t j = 1; j <= n; ++j)
            if (shape.block_of(j).first != alpha) out.add("cross", {i, j}, e[i].partial(j));
    }
    return out;
}

OperatorField mult_operator(const VectorField& e)
{
    const BlockShape& shape = e.shape();
    std::vector<std::vector<ScalarFn>> rows(shape.dimension(), std::vector<ScalarFn>(shape.dimension(), e[1].zero_like()));
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha)
        for (std::size_t i = 1; i <= shape.size(alpha); ++i)
            for (std::size_t j = 1; j <= i; ++j)
                rows[shape.flat(alpha, i) - 1][shape.flat(alpha, j) - 1] = e.at(alpha, i - j + 1);
    return OperatorField(shape, std::move(rows));
}

Residual nijenhuis_torsion(const OperatorField& l)
{
    const std::size_t n = l.dimension();
    Residual out;
    out.identity = "nijenhuis";
    for (std::size_t a = 1; a <= n; ++a) {
        const VectorField la = l.column(a);
        for (std::size_t b = a + 1; b <= n; ++b) {
            const VectorField lb = l.column(b);
            // [d_a, d_b] = 0, and [d_a, Y] = d_a Y.
            const VectorField x_ly = lb.partial(a);
            const VectorField lx_y = -la.partial(b);
            VectorField t = lie_bracket(la, lb) - l.apply(x_ly) - l.apply(lx_y);
            for (std::size_t i = 1; i <= n; ++i) out.add("torsion", {a, b, i}, t[i]);
        }
    }
    return out;
}

Residual weak_ei_bracket_check(const VectorField& alpha, const VectorField& beta0, const VectorField& beta1,
                               unsigned nmax, unsigned mmax, double tol)
{
    const char* names[] = {"alpha", "beta0", "beta1"};
    const VectorField* inputs[] = {&alpha, &beta0, &beta1};
    for (int q = 0; q < 3; ++q) {
        Residual r = ei_residual(*inputs[q]);
        if (!r.passes(tol)) {
            const auto* w = r.worst();
            throw Error(Errc::PreconditionFailed, std::string(names[q]) + " is not a weak eventual identity")
                .with_indices(w ? w->indices : std::vector<std::size_t>{})
                .with_detail(w ? w->value.to_string() : "");
        }
    }

    std::vector<VectorField> pw{power(alpha, 0)};
    for (unsigned k = 1; k <= nmax + mmax; ++k) pw.push_back(circ(alpha, pw.back()));

    const VectorField b01 = lie_bracket(beta0, beta1);
    const VectorField b0_b1a = lie_bracket(beta0, circ(beta1, alpha));
    const VectorField b0a_b1 = lie_bracket(circ(beta0, alpha), beta1);

    Residual out;
    out.identity = "weak_ei_bracket";
    for (unsigned nn = 0; nn <= nmax; ++nn) {
        for (unsigned mm = 0; mm <= mmax; ++mm) {
            VectorField r = lie_bracket(circ(beta0, pw[nn]), circ(beta1, pw[mm]));
            if (nn + mm >= 1) r -= circ(pw[nn + mm - 1], Rational(mm) * b0_b1a + Rational(nn) * b0a_b1);
            r += Rational(long(nn + mm) - 1) * circ(pw[nn + mm], b01);
            for (std::size_t i = 1; i <= r.dimension(); ++i) out.add("bracket", {nn, mm, i}, r[i]);
        }
    }
    return out;
}

}  // namespace evid
