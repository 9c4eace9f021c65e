#include "generators.hpp"

#include <evid/chart.hpp>
#include <evid/cli.hpp>
#include <evid/dual.hpp>
#include <evid/expr.hpp>
#include <evid/io.hpp>
#include <evid/sampling.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

namespace evid {
namespace {

constexpr double jet_tol = 1e-9;
constexpr double chart_order_tol = 1e-8;
constexpr double chart_push_tol = 1e-6;
constexpr double chart_refinement = 3.5;
constexpr double quadrature_tol = 1e-8;
constexpr double torsion_floor = 0.1;
constexpr double formula_seconds = 5.0;
constexpr double bracket_seconds = 30.0;
constexpr double chart_seconds = 10.0;

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x)
{
    std::ostringstream s;
    s.precision(3);
    s << x;
    return s.str();
}

Poly u(std::size_t n, std::size_t i) { return Poly::variable(n, i); }
Poly r(std::size_t n, long p, long q = 1) { return Poly::constant(n, Rational(p, q)); }

EISeed random_seed(testing::Gen& gen, const BlockShape& shape, unsigned deg, bool invertible = false)
{
    const std::size_t n = shape.dimension();
    EISeed s = EISeed::zero(shape);
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        const std::size_t v1 = shape.flat(alpha, 1);
        s.at(alpha, 1) = gen.poly(n, {v1}, deg, 3);
        if (invertible) s.at(alpha, 1) = u(n, v1) + gen.poly(n, {v1}, deg, 2) * Rational(1, 8) + r(n, 3);
        for (std::size_t i = 2; i <= shape.size(alpha); ++i) s.at(alpha, i) = gen.poly(n, {v1, v1 + 1}, deg, 4);
    }
    return s;
}

GeneratorComponents lift_components(const GeneratorComponents& a, const Backend& b)
{
    GeneratorComponents out;
    for (const auto& block : a) {
        out.emplace_back();
        for (const auto& c : block) out.back().push_back(b.lift(c));
    }
    return out;
}

/// Frames from seeds with E^2 = u^2 k(u^1) and a_2 = c u^2, completed exactly.
std::vector<DualFrame> commuting_frames(testing::Gen& gen, const BlockShape& shape, std::size_t count)
{
    const std::size_t n = shape.dimension();
    const Backend rb = Backend::rational(n);
    std::vector<DualFrame> out;
    for (int attempt = 0; attempt < 200 && out.size() < count; ++attempt) {
        EISeed seed = EISeed::zero(shape);
        std::vector<ScalarFn> a2;
        for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
            const std::size_t v1 = shape.flat(alpha, 1);
            seed.at(alpha, 1) = u(n, v1) + gen.poly(n, {v1}, 2, 2);
            seed.at(alpha, 2) = u(n, v1 + 1) * (r(n, 1) + gen.poly(n, {v1}, 1, 2));
            for (std::size_t i = 3; i <= shape.size(alpha); ++i) seed.at(alpha, i) = gen.poly(n, {v1, v1 + 1}, 2, 3);
            a2.push_back(ScalarFn(u(n, v1 + 1) * gen.nonzero_rational()));
        }
        const SolvedEI e = solve(seed);
        try {
            out.push_back(build_frame(lift(e.e, rb), lift_components(construct_a(e, a2), rb)));
        } catch (const Error& err) {
            if (err.code() != Errc::NoPolynomialSolution && err.code() != Errc::NotInvertible) throw;
        }
    }
    return out;
}

// --- criteria

Outcome formula_regression()
{
    const auto t0 = Clock::now();
    testing::Gen gen(101);
    const std::size_t n = 5;
    int matched = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const EISeed seed = random_seed(gen, BlockShape({5}), 3);
        const SolvedEI e = solve(seed);
        const Poly &f1 = seed.at(1, 1), &f2 = seed.at(1, 2), &f3 = seed.at(1, 3), &f4 = seed.at(1, 4),
                   &f5 = seed.at(1, 5);
        const Poly d1f1 = f1.partial(1), d2f2 = f2.partial(2), d22f2 = d2f2.partial(2);
        const Poly u3 = u(n, 3), u4 = u(n, 4), u5 = u(n, 5);
        const Poly e3 = (r(n, 2) * d2f2 - d1f1) * u3 + f3;
        const Poly e4 = (r(n, 3) * d2f2 - r(n, 2) * d1f1) * u4 + r(n, 2) * d22f2 * u3.pow(2) +
                        (r(n, 2) * f3.partial(2) - f2.partial(1)) * u3 + f4;
        const Poly e5 = (r(n, 4) * d2f2 - r(n, 3) * d1f1) * u5 + (r(n, 3) * f3.partial(2) - r(n, 2) * f2.partial(1)) * u4 +
                        r(n, 6) * d22f2 * u3 * u4 + r(n, 4, 3) * d22f2.partial(2) * u3.pow(3) +
                        r(n, 1, 2) * (r(n, 4) * f3.partial(2).partial(2) - r(n, 4) * f2.partial(1).partial(2) + d1f1.partial(1)) *
                            u3.pow(2) +
                        (r(n, 2) * f4.partial(2) - f3.partial(1)) * u3 + f5;
        if (e.component(1) == f1 && e.component(2) == f2 && e.component(3) == e3 && e.component(4) == e4 &&
            e.component(5) == e5)
            ++matched;
    }
    const double t = seconds_since(t0);
    return {matched == 20 && t < formula_seconds, std::to_string(matched) + "/20 seeds exact, " + fmt(t) + " s"};
}

Outcome equivalence()
{
    testing::Gen gen(202);
    int agree = 0, solved_pass = 0, perturbed_fail = 0;
    int total = 0;
    for (const char* s : {"3", "4", "5", "3,2", "2,2"}) {
        const BlockShape shape = BlockShape::parse(s);
        const std::size_t n = shape.dimension();
        for (int k = 0; k < 3; ++k) {
            const SolvedEI e = solve(random_seed(gen, shape, 2));
            const bool ei0 = ei_residual(e.e).passes(), at0 = atlas_residual(e.e).passes();
            agree += ei0 == at0;
            solved_pass += ei0 && at0;

            // Single-entry perturbation outside the space of eventual identities.
            const std::size_t i = std::size_t(gen.integer(1, long(n)));
            const auto [alpha, pos] = shape.block_of(i);
            std::size_t var;
            if (pos >= 3) var = i;
            else if (shape.size(alpha) >= 3) var = shape.flat(alpha, 3);
            else var = alpha == 1 ? shape.flat(2, 1) : shape.flat(1, 1);
            VectorField p = e.e;
            p[i] = p[i] + ScalarFn(gen.nonzero_rational() * u(n, var).pow(pos >= 3 ? 2 : 1));
            const bool ei1 = ei_residual(p).passes(), at1 = atlas_residual(p).passes();
            agree += ei1 == at1;
            perturbed_fail += !ei1 && !at1;
            total += 2;
        }
    }
    return {agree == total && solved_pass == 15 && perturbed_fail == 15,
            std::to_string(agree) + "/" + std::to_string(total) + " agree, " + std::to_string(solved_pass) +
                "/15 solved pass, " + std::to_string(perturbed_fail) + "/15 perturbed fail"};
}

Outcome euler_fields()
{
    int ok = 0;
    for (const char* s : {"3", "2,2", "3,2,1", "1,1,1"}) {
        const BlockShape shape = BlockShape::parse(s);
        VectorField e(shape, Backend::poly(shape.dimension()));
        for (std::size_t i = 1; i <= shape.dimension(); ++i) e[i] = ScalarFn(u(shape.dimension(), i));
        const Residual res = ei_residual(e);
        ok += res.exact() && res.passes();
    }
    return {ok == 4, std::to_string(ok) + "/4 shapes exactly zero"};
}

Outcome dual_f_manifold()
{
    testing::Gen gen(404);
    const BlockShape shape({3});
    int exact_ok = 0;
    double jet_max = 0.0;
    std::size_t jet_entries = 0;
    for (int k = 0; k < 5; ++k) {
        const SolvedEI e = solve(random_seed(gen, shape, 2, true));
        const Backend rb = Backend::rational(3);
        const VectorField er = lift(e.e, rb);
        exact_ok += hm_residual(dual_product_with(invert(er)), shape, rb).passes();

        SamplingOptions opts;
        opts.count = 50;
        opts.seed = 40 + std::uint64_t(k);
        const auto points = sample_points(shape, opts, [&](const std::vector<double>& p) {
            return std::abs(e.component(1).evaluate<double>(std::span<const double>(p))) >= 0.5;
        });
        const Residual jr = sample_residual(
            [&](const Backend& b) {
                const VectorField ej = lift(e.e, b);
                return hm_residual(dual_product_with(invert(ej)), shape, b);
            },
            points, 3);
        jet_max = std::max(jet_max, jr.max_abs());
        jet_entries += jr.entries.size();
    }
    return {exact_ok == 5 && jet_max <= jet_tol,
            std::to_string(exact_ok) + "/5 exact zero, jet max " + fmt(jet_max) + " over " +
                std::to_string(jet_entries) + " entries"};
}

Outcome frame_laws()
{
    testing::Gen gen(505);
    int frames = 0, ok = 0;
    for (const char* s : {"3", "4", "2,2"}) {
        for (const auto& f : commuting_frames(gen, BlockShape::parse(s), 3)) {
            ++frames;
            const Residual rec = recursion_check(f);
            ok += v2_conditions(f).passes() && frame_product_check(f).passes() && vjj_check(f).passes() &&
                  rec.group("ffsim").passes() && rec.group("ffhat").passes() && rec.passes();
        }
    }
    return {frames == 9 && ok == 9, std::to_string(ok) + "/" + std::to_string(frames) + " frames exact"};
}

Outcome commutation()
{
    testing::Gen gen(505);
    int frames = 0, commuting = 0;
    for (const char* s : {"3", "4", "2,2"})
        for (const auto& f : commuting_frames(gen, BlockShape::parse(s), 3)) {
            ++frames;
            commuting += commutator_check(f).passes();
        }

    testing::Gen wgen(606);
    const BlockShape shape({4});
    const Backend rb = Backend::rational(4);
    VectorField e(shape, rb);
    for (std::size_t i = 1; i <= 4; ++i) e[i] = rb.variable(i);
    int corollary = 0, non_commuting = 0;
    for (int k = 0; k < 5; ++k) {
        EISeed s = EISeed::zero(shape);
        s.at(1, 2) = wgen.poly(4, {1, 2}, 2, 3) + u(4, 1).pow(2);
        for (std::size_t i = 3; i <= 4; ++i) s.at(1, i) = wgen.poly(4, {1, 2}, 2, 3);
        const SolvedEI w = solve(s);
        GeneratorComponents a{{}};
        for (std::size_t i = 2; i <= 4; ++i) a[0].push_back(rb.lift(ScalarFn(w.component(i))));
        const DualFrame f = build_frame(e, a);
        non_commuting += !commutator_check(f).passes();
        corollary += corollary_check(f).passes();
    }
    return {frames == 9 && commuting == 9 && corollary == 5 && non_commuting == 5,
            std::to_string(commuting) + "/" + std::to_string(frames) + " frames commute, corollary " +
                std::to_string(corollary) + "/5 (" + std::to_string(non_commuting) + " non-commuting)"};
}

Outcome bracket()
{
    const auto t0 = Clock::now();
    const BlockShape shape({3});
    const Backend pb = Backend::poly(3);
    VectorField euler(shape, pb);
    for (std::size_t i = 1; i <= 3; ++i) euler[i] = pb.variable(i);
    const bool euler_ok = weak_ei_bracket_check(euler, euler, euler, 3, 3).passes();

    testing::Gen gen(707);
    int ok = 0;
    for (int k = 0; k < 5; ++k) {
        const VectorField a = solve(random_seed(gen, shape, 2)).e;
        const VectorField b0 = solve(random_seed(gen, shape, 2)).e;
        const VectorField b1 = solve(random_seed(gen, shape, 2)).e;
        const Residual res = weak_ei_bracket_check(a, b0, b1, 2, 2);
        ok += res.exact() && res.passes();
    }
    const double t = seconds_since(t0);
    return {euler_ok && ok == 5 && t < bracket_seconds,
            std::string("Euler ") + (euler_ok ? "zero" : "nonzero") + ", random " + std::to_string(ok) + "/5, " +
                fmt(t) + " s"};
}

Outcome nijenhuis()
{
    testing::Gen gen(808);
    double worst = 0.0;
    int fields = 0;
    std::size_t entries = 0;
    for (const char* s : {"3", "2,2", "4"}) {
        const BlockShape shape = BlockShape::parse(s);
        const int count = shape.dimension() == 4 && shape.blocks() == 1 ? 4 : 3;
        for (int k = 0; k < count; ++k, ++fields) {
            const SolvedEI e = solve(random_seed(gen, shape, 2));
            SamplingOptions opts;
            opts.count = 100;
            opts.seed = 80 + std::uint64_t(fields);
            const Residual res = sample_residual(
                [&](const Backend& b) { return nijenhuis_torsion(mult_operator(lift(e.e, b))); },
                sample_points(shape, opts), 2);
            worst = std::max(worst, res.max_abs());
            entries += res.entries.size();
        }
    }

    const BlockShape pair({1, 1});
    const Backend jb = Backend::jet({1.0, 1.0}, 2);
    OperatorField l(pair, jb);
    l(1, 1) = jb.variable(2);
    const double bad = nijenhuis_torsion(l).max_abs();
    return {fields == 10 && worst <= jet_tol && bad >= torsion_floor,
            std::to_string(fields) + " fields, max " + fmt(worst) + " over " + std::to_string(entries) +
                " entries; diag(u2, 0) at (1,1): " + fmt(bad)};
}

Outcome chart()
{
    const auto t0 = Clock::now();
    const BlockShape shape({3});
    const Backend rb = Backend::rational(3);
    VectorField e(shape, rb);
    for (std::size_t i = 1; i <= 3; ++i) e[i] = rb.variable(i);
    const DualFrame f = build_frame(e, {{parse_scalar("u2", rb), parse_scalar("2*u3", rb)}});

    std::vector<std::vector<double>> grid;
    for (double a : {-0.3, 0.0, 0.3})
        for (double b : {-0.3, 0.0, 0.3})
            for (double c : {-0.3, 0.0, 0.3}) grid.push_back({a, b, c});
    ChartSpec spec;
    spec.p0 = {1, 1, 1};
    spec.grid = grid;
    spec.h = 1e-3;
    spec.tol = chart_order_tol / 10;
    ChartResult coarse = integrate_chart(f, spec);
    pushforward_check(f, coarse);
    spec.h = 5e-4;
    ChartResult fine = integrate_chart(f, spec);
    pushforward_check(f, fine);

    const double push_ratio = coarse.max_push_err() / fine.max_push_err();
    const double jac_ratio = coarse.max_jac_err() / fine.max_jac_err();

    const DualFrame semi = build_frame(VectorField(BlockShape({1}), {Backend::rational(1).variable(1)}), {{}});
    ChartSpec s1;
    s1.p0 = {1.0};
    for (double w = -0.5; w <= 0.5 + 1e-12; w += 0.05) s1.grid.push_back({w});
    const ChartResult r1 = integrate_chart(semi, s1);
    double log_err = 0.0;
    for (const auto& s : r1.samples) log_err = std::max(log_err, std::abs(std::log(s.u[0]) - s.w[0]));

    const double t = seconds_since(t0);
    const bool pass = coarse.max_order_err() < chart_order_tol && coarse.max_push_err() <= chart_push_tol &&
                      push_ratio >= chart_refinement && jac_ratio >= chart_refinement && log_err <= quadrature_tol &&
                      t < chart_seconds;
    return {pass, "order " + fmt(coarse.max_order_err()) + ", push " + fmt(coarse.max_push_err()) + ", halving h: push x" +
                      fmt(push_ratio) + " jac x" + fmt(jac_ratio) + ", log err " + fmt(log_err) + ", " + fmt(t) + " s"};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism()
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "evid_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ostringstream sink;

    testing::Gen gen(1010);
    int round_trips = 0;
    const std::vector<const char*> shapes{"3", "2,2", "3,2", "4", "2,1,2"};
    for (int k = 0; k < 50; ++k) {
        const BlockShape shape = BlockShape::parse(shapes[std::size_t(k) % shapes.size()]);
        const fs::path seed = dir / "seed.json", field = dir / "field.json", report = dir / "report.json";
        write_atomic(seed, seed_to_json(random_seed(gen, shape, 3)).dump());
        cli::JobConfig s;
        s.command = "solve";
        s.seed_file = seed.string();
        s.out = field.string();
        cli::JobConfig v;
        v.command = "verify";
        v.field_file = field.string();
        v.out = report.string();
        round_trips += cli::run(s, sink, sink) == 0 && cli::run(v, sink, sink) == 0;
    }

    bool identical = true;
    write_atomic(dir / "seed.json", seed_to_json(random_seed(gen, BlockShape({3, 2}), 3)).dump());
    for (const char* cmd : {"verify", "torsion"}) {
        std::string first;
        for (int rep = 0; rep < 2; ++rep) {
            cli::JobConfig c;
            c.command = cmd;
            c.seed_file = (dir / "seed.json").string();
            c.backend = "jet";
            c.points = 20;
            c.rng = 42;
            c.out = (dir / ("rep" + std::to_string(rep) + ".json")).string();
            cli::run(c, sink, sink);
            const std::string text = slurp(c.out);
            if (rep == 0) first = text;
            else identical = identical && !first.empty() && text == first;
        }
    }
    fs::remove_all(dir);
    return {round_trips == 50 && identical, std::to_string(round_trips) + "/50 solve->verify exit 0, reports " +
                                                (identical ? "byte-identical" : "differ")};
}

}  // namespace
}  // namespace evid

int main()
{
    using evid::Outcome;
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"formula regression E1..E5", evid::formula_regression},
        {"ei <=> atlas equivalence", evid::equivalence},
        {"Euler field", evid::euler_fields},
        {"dual F-manifold", evid::dual_f_manifold},
        {"frame laws", evid::frame_laws},
        {"commutation", evid::commutation},
        {"bracket identity", evid::bracket},
        {"Nijenhuis torsion", evid::nijenhuis},
        {"chart", evid::chart},
        {"determinism and round trip", evid::determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o{false, ""};
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << criteria[k].first << ": " << o.detail
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
