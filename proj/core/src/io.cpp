#include "evid/io.hpp"

#include "evid/expr.hpp"

#include <fstream>
#include <sstream>

namespace evid {

namespace {

std::vector<std::size_t> block_map(const BlockShape& shape, std::size_t alpha)
{
    std::vector<std::size_t> map;
    for (std::size_t i = 1; i <= shape.size(alpha); ++i) map.push_back(shape.flat(alpha, i));
    return map;
}

const json& member(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) fail(Errc::InvalidInput, std::string("missing key \"") + key + "\"");
    return j.at(key);
}

std::string expr_text(const json& j)
{
    if (!j.is_string()) fail(Errc::InvalidInput, "expected an expression string");
    return j.get<std::string>();
}

Poly poly_to_block_local(const Poly& p, const BlockShape& shape, std::size_t alpha)
{
    const std::size_t m = shape.size(alpha);
    const std::size_t off = shape.offset(alpha);
    for (std::size_t v : p.support())
        if (v <= off || v > off + m)
            throw Error(Errc::SeedSupportViolation, "function of block " + std::to_string(alpha) +
                                                        " depends on u" + std::to_string(v))
                .with_indices({alpha, v});
    std::vector<std::size_t> map(p.nvars(), 1);
    for (std::size_t i = 1; i <= m; ++i) map[off + i - 1] = i;
    return p.remap(map, m);
}

json number_or_string(double x)
{
    if (std::isfinite(x)) return x;
    return std::to_string(x);
}

}  // namespace

BlockShape shape_from_json(const json& j)
{
    if (!j.is_array() || j.empty()) fail(Errc::InvalidInput, "shape must be a nonempty array of block sizes");
    std::vector<std::size_t> sizes;
    for (const auto& s : j) {
        if (!s.is_number_unsigned() || s.get<std::size_t>() == 0) fail(Errc::InvalidInput, "block sizes must be positive integers");
        sizes.push_back(s.get<std::size_t>());
    }
    return BlockShape(std::move(sizes));
}

json field_to_json(const VectorField& x)
{
    json comps = json::array();
    for (const auto& c : x.components()) {
        if (c.is_float_jet()) fail(Errc::BackendMismatch, "jet fields have no expression form");
        comps.push_back(c.to_string());
    }
    return {{"shape", x.shape().sizes()}, {"components", comps}};
}

VectorField field_from_json(const json& j, const Backend& backend)
{
    const BlockShape shape = shape_from_json(member(j, "shape"));
    if (shape.dimension() != backend.nvars()) fail(Errc::ShapeMismatch, "field dimension differs from the backend");
    const json& comps = member(j, "components");
    if (!comps.is_array() || comps.size() != shape.dimension())
        fail(Errc::ShapeMismatch, "number of components differs from the shape dimension");
    std::vector<ScalarFn> out;
    for (const auto& c : comps) out.push_back(parse_scalar(expr_text(c), backend));
    return VectorField(shape, std::move(out));
}

ScalarFn parse_block_local(std::string_view src, const BlockShape& shape, std::size_t alpha, const Backend& backend)
{
    const std::vector<std::size_t> map = block_map(shape, alpha);
    return lower(parse(src, map.size()), backend, map);
}

std::string to_block_local(const ScalarFn& f, const BlockShape& shape, std::size_t alpha)
{
    switch (f.backend()) {
    case BackendKind::Poly:
        return poly_to_block_local(f.as_poly(), shape, alpha).to_string();
    case BackendKind::Rational: {
        const RationalFunction& r = f.as_rational();
        std::string s = "(" + poly_to_block_local(r.numerator(), shape, alpha).to_string() + ")";
        if (r.factors().empty()) return poly_to_block_local(r.numerator(), shape, alpha).to_string();
        std::string den;
        for (const auto& fac : r.factors()) {
            if (!den.empty()) den += "*";
            den += "(" + poly_to_block_local(fac.base, shape, alpha).to_string() + ")";
            if (fac.exponent > 1) den += "^" + std::to_string(fac.exponent);
        }
        return s + "/(" + den + ")";
    }
    default:
        return f.to_string();
    }
}

json seed_to_json(const EISeed& seed)
{
    json seeds = json::array();
    for (std::size_t alpha = 1; alpha <= seed.shape.blocks(); ++alpha) {
        json f = json::array();
        for (std::size_t i = 1; i <= seed.shape.size(alpha); ++i)
            f.push_back(to_block_local(ScalarFn(seed.at(alpha, i)), seed.shape, alpha));
        seeds.push_back({{"block", alpha}, {"f", f}});
    }
    return {{"shape", seed.shape.sizes()}, {"seeds", seeds}};
}

EISeed seed_from_json(const json& j)
{
    const BlockShape shape = shape_from_json(member(j, "shape"));
    const Backend pb = Backend::poly(shape.dimension());
    EISeed seed = EISeed::zero(shape);
    const json& seeds = member(j, "seeds");
    if (!seeds.is_array()) fail(Errc::InvalidInput, "\"seeds\" must be an array");
    std::vector<bool> seen(shape.blocks(), false);
    for (const auto& entry : seeds) {
        const json& b = member(entry, "block");
        if (!b.is_number_unsigned() || b.get<std::size_t>() == 0 || b.get<std::size_t>() > shape.blocks())
            fail(Errc::ShapeMismatch, "seed block index out of range");
        const std::size_t alpha = b.get<std::size_t>();
        if (seen[alpha - 1]) fail(Errc::InvalidInput, "block " + std::to_string(alpha) + " seeded twice");
        seen[alpha - 1] = true;
        const json& f = member(entry, "f");
        if (!f.is_array() || f.size() != shape.size(alpha))
            fail(Errc::ShapeMismatch, "block " + std::to_string(alpha) + " needs " +
                                          std::to_string(shape.size(alpha)) + " seed functions");
        for (std::size_t i = 1; i <= shape.size(alpha); ++i)
            seed.at(alpha, i) = parse_block_local(expr_text(f[i - 1]), shape, alpha, pb).as_poly();
    }
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha)
        if (!seen[alpha - 1]) fail(Errc::ShapeMismatch, "block " + std::to_string(alpha) + " has no seed");
    verify_seed_support(seed);
    return seed;
}

json generator_to_json(const BlockShape& shape, const GeneratorComponents& a)
{
    json out = json::array();
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        json comps = json::array();
        for (const auto& c : a.at(alpha - 1)) comps.push_back(to_block_local(c, shape, alpha));
        out.push_back({{"block", alpha}, {"components", comps}});
    }
    return out;
}

GeneratorComponents generator_from_json(const BlockShape& shape, const json& j, const Backend& backend)
{
    if (!j.is_array() || j.size() != shape.blocks()) fail(Errc::ShapeMismatch, "one generator entry per block expected");
    GeneratorComponents a(shape.blocks());
    for (const auto& entry : j) {
        const std::size_t alpha = member(entry, "block").get<std::size_t>();
        if (alpha == 0 || alpha > shape.blocks()) fail(Errc::ShapeMismatch, "generator block index out of range");
        for (const auto& c : member(entry, "components"))
            a[alpha - 1].push_back(parse_block_local(expr_text(c), shape, alpha, backend));
    }
    return a;
}

json frame_to_json(const DualFrame& frame)
{
    json v = json::array();
    for (const auto& x : frame.v) v.push_back(field_to_json(x));
    return {{"shape", frame.shape.sizes()},
            {"E", field_to_json(frame.e)},
            {"a", generator_to_json(frame.shape, frame.a)},
            {"v", v}};
}

json residual_report(const Residual& r, std::uint64_t seed, double tol)
{
    json j{{"identity", r.identity}, {"backend", r.backend}, {"seed", seed}, {"entries", r.entries.size()}};
    const bool exact = r.exact();
    const std::size_t nonzero = r.nonzero_count(tol);
    j["nonzero"] = nonzero;
    j["pass"] = r.passes(tol);
    if (exact && nonzero == 0) j["max_abs"] = "0(exact)";
    else j["max_abs"] = number_or_string(r.max_abs());
    if (const ResidualEntry* w = r.worst(); w && !(exact && nonzero == 0)) {
        j["worst_entry"] = {{"group", w->group},
                            {"indices", w->indices},
                            {"point", w->point},
                            {"value", w->value.is_float_jet() ? json(w->value.jet_value()) : json(w->value.to_string())}};
    } else {
        j["worst_entry"] = nullptr;
    }
    return j;
}

json chart_report(const ChartResult& r)
{
    json samples = json::array();
    for (const auto& s : r.samples)
        samples.push_back({{"w", s.w},
                           {"u", s.u},
                           {"jac_err", s.jac_err},
                           {"push_err", s.push_err},
                           {"order_err", s.order_err}});
    return {{"p0", r.p0},
            {"h", r.h},
            {"tol", r.tol},
            {"samples", samples},
            {"max_jac_err", r.max_jac_err()},
            {"max_push_err", r.max_push_err()},
            {"max_order_err", r.max_order_err()}};
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(Errc::InvalidInput, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) fail(Errc::InvalidInput, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        fail(Errc::InvalidInput, "cannot move report into place at " + path.string() + ": " + ec.message());
    }
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::InvalidInput, "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        fail(Errc::InvalidInput, path.string() + ": " + e.what());
    }
}

}  // namespace evid
