#include <evid/chart.hpp>
#include <evid/dual.hpp>
#include <evid/expr.hpp>
#include <evid/sampling.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace evid;

Poly random_poly(std::mt19937_64& rng, std::size_t n, unsigned deg, unsigned terms)
{
    std::uniform_int_distribution<long> coef(-9, 9);
    std::uniform_int_distribution<unsigned> d(0, deg);
    std::uniform_int_distribution<std::size_t> var(0, n - 1);
    Poly p(n);
    for (unsigned t = 0; t < terms; ++t) {
        Poly::Exponents e(n, 0);
        for (unsigned k = d(rng); k > 0; --k) e[var(rng)] += 1;
        p.add_term(e, Rational(coef(rng)));
    }
    return p;
}

EISeed seed_for(const BlockShape& shape)
{
    std::mt19937_64 rng(7);
    const std::size_t n = shape.dimension();
    EISeed s = EISeed::zero(shape);
    for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
        const std::size_t v1 = shape.flat(alpha, 1);
        s.at(alpha, 1) = Poly::variable(n, v1) + Poly::constant(n, 2);
        for (std::size_t i = 2; i <= shape.size(alpha); ++i) {
            Poly p = random_poly(rng, 2, 3, 4);
            std::vector<std::size_t> map{v1, v1 + 1};
            s.at(alpha, i) = p.remap(map, n);
        }
    }
    return s;
}

void bm_poly_multiply(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    const unsigned terms = unsigned(state.range(0));
    const Poly a = random_poly(rng, 4, 6, terms), b = random_poly(rng, 4, 6, terms);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(bm_poly_multiply)->Arg(8)->Arg(32)->Arg(128);

void bm_jet_multiply(benchmark::State& state)
{
    const unsigned order = unsigned(state.range(0));
    const std::vector<double> p{0.7, -0.3, 1.1, 0.4, 0.9};
    const FloatJet x = taylor_expand<double>(parse_poly("u1^3 + u2*u3 - u4*u5^2", 5), p, order);
    const FloatJet y = taylor_expand<double>(parse_poly("u1*u2 + 2*u3^2 + u5", 5), p, order);
    for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(bm_jet_multiply)->DenseRange(2, 5);

void bm_jet_reciprocal(benchmark::State& state)
{
    const unsigned order = unsigned(state.range(0));
    const std::vector<double> p{1.3, -0.3, 0.5};
    const FloatJet x = taylor_expand<double>(parse_poly("u1 + u2*u3 + u1^2", 3), p, order);
    for (auto _ : state) benchmark::DoNotOptimize(x.reciprocal());
}
BENCHMARK(bm_jet_reciprocal)->DenseRange(2, 6);

void bm_solve(benchmark::State& state)
{
    const BlockShape shape({std::size_t(state.range(0))});
    const EISeed s = seed_for(shape);
    for (auto _ : state) benchmark::DoNotOptimize(solve(s));
}
BENCHMARK(bm_solve)->DenseRange(3, 7);

void bm_invert_rational(benchmark::State& state)
{
    const BlockShape shape({std::size_t(state.range(0))});
    const VectorField e = lift(solve(seed_for(shape)).e, Backend::rational(shape.dimension()));
    for (auto _ : state) benchmark::DoNotOptimize(invert(e));
}
BENCHMARK(bm_invert_rational)->DenseRange(3, 5);

void bm_hm_residual_dual(benchmark::State& state)
{
    const BlockShape shape({3});
    const Backend rb = Backend::rational(3);
    const VectorField e = lift(solve(seed_for(shape)).e, rb);
    const ProductProvider star = dual_product_with(invert(e));
    for (auto _ : state) benchmark::DoNotOptimize(hm_residual(star, shape, rb));
}
BENCHMARK(bm_hm_residual_dual)->Unit(benchmark::kMillisecond);

void bm_hm_residual_jet(benchmark::State& state)
{
    const BlockShape shape({3, 2});
    const Backend jb = Backend::jet({1.2, 0.3, -0.4, 0.8, 0.1}, 3);
    const VectorField e = lift(solve(seed_for(shape)).e, jb);
    const ProductProvider star = dual_product_with(invert(e));
    for (auto _ : state) benchmark::DoNotOptimize(hm_residual(star, shape, jb));
}
BENCHMARK(bm_hm_residual_jet)->Unit(benchmark::kMillisecond);

void bm_torsion_jet(benchmark::State& state)
{
    const BlockShape shape({4});
    const Backend jb = Backend::jet({1.2, 0.3, -0.4, 0.8}, 2);
    const OperatorField l = mult_operator(lift(solve(seed_for(shape)).e, jb));
    for (auto _ : state) benchmark::DoNotOptimize(nijenhuis_torsion(l));
}
BENCHMARK(bm_torsion_jet)->Unit(benchmark::kMillisecond);

void bm_chart_euler(benchmark::State& state)
{
    const BlockShape shape({3});
    const Backend rb = Backend::rational(3);
    VectorField e(shape, rb);
    for (std::size_t i = 1; i <= 3; ++i) e[i] = rb.variable(i);
    const DualFrame f = build_frame(e, {{parse_scalar("u2", rb), parse_scalar("2*u3", rb)}});
    ChartSpec spec;
    spec.p0 = {1, 1, 1};
    spec.grid = {{0.3, -0.3, 0.3}};
    spec.h = 1e-3;
    for (auto _ : state) {
        ChartResult r = integrate_chart(f, spec);
        benchmark::DoNotOptimize(pushforward_check(f, r));
    }
}
BENCHMARK(bm_chart_euler)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
