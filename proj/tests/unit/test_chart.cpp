#include <evid/chart.hpp>
#include <evid/expr.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evid {
namespace {

VectorField rational_field(const BlockShape& shape, std::vector<const char*> src)
{
    const Backend rb = Backend::rational(shape.dimension());
    std::vector<ScalarFn> c;
    for (auto s : src) c.push_back(parse_scalar(s, rb));
    return VectorField(shape, std::move(c));
}

DualFrame euler_frame(const char* a2 = "u2", const char* a3 = "2*u3")
{
    const BlockShape shape({3});
    const Backend rb = Backend::rational(3);
    return build_frame(rational_field(shape, {"u1", "u2", "u3"}), {{parse_scalar(a2, rb), parse_scalar(a3, rb)}});
}

std::vector<std::vector<double>> cube(std::size_t n, double r)
{
    std::vector<std::vector<double>> out;
    const std::size_t total = static_cast<std::size_t>(std::pow(3.0, double(n)));
    for (std::size_t k = 0; k < total; ++k) {
        std::vector<double> w(n);
        std::size_t code = k;
        for (std::size_t i = 0; i < n; ++i, code /= 3) w[i] = (double(code % 3) - 1.0) * r;
        out.push_back(std::move(w));
    }
    return out;
}

ChartSpec spec(std::vector<double> p0, std::vector<std::vector<double>> grid, double h = 1e-3)
{
    ChartSpec s;
    s.p0 = std::move(p0);
    s.grid = std::move(grid);
    s.h = h;
    return s;
}

// --- integration

TEST(chart, origin_maps_to_base_point)
{
    const ChartResult r = integrate_chart(euler_frame(), spec({1, 1, 1}, {{0, 0, 0}}));
    ASSERT_EQ(r.samples.size(), 1u);
    EXPECT_EQ(r.samples[0].u, (std::vector<double>{1, 1, 1}));
    EXPECT_EQ(r.samples[0].order_err, 0.0);
}

TEST(chart, semi_simple_quadrature)
{
    const BlockShape shape({1});
    const DualFrame f = build_frame(rational_field(shape, {"u1"}), {{}});
    std::vector<std::vector<double>> grid;
    for (double w = -0.5; w <= 0.5 + 1e-12; w += 0.1) grid.push_back({w});
    const ChartResult r = integrate_chart(f, spec({1}, grid));
    for (const auto& s : r.samples) {
        EXPECT_NEAR(s.u[0], std::exp(s.w[0]), 1e-8);
        EXPECT_NEAR(std::log(s.u[0]), s.w[0], 1e-8);
    }
}

TEST(chart, unit_frame_is_translation)
{
    const BlockShape shape({2, 1});
    const Backend rb = Backend::rational(3);
    const DualFrame f = build_frame(unit(shape, rb), {{rb.one()}, {}});
    ChartResult r = integrate_chart(f, spec({1, 0.5, -0.7}, cube(3, 0.4)));
    for (const auto& s : r.samples)
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(s.u[i], r.p0[i] + s.w[i], 1e-12);
    pushforward_check(f, r);
    EXPECT_LE(r.max_push_err(), 1e-9);
    EXPECT_LE(r.max_jac_err(), 1e-9);
}

TEST(chart, euler_flow_orderings_agree)
{
    const DualFrame f = euler_frame();
    const FrameEvaluator eval(f);
    const std::vector<double> p0{1, 1, 1};
    std::vector<std::size_t> order{1, 2, 3};
    for (const auto& w : cube(3, 0.3)) {
        const std::vector<double> ref = flow_composition(eval, p0, w, order, 1e-3, 0.5);
        std::vector<std::size_t> perm = order;
        do {
            const std::vector<double> u = flow_composition(eval, p0, w, perm, 1e-3, 0.5);
            for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(u[i], ref[i], 1e-8);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST(chart, euler_first_flow_is_scaling)
{
    const FrameEvaluator eval(euler_frame());
    const std::vector<double> p{1, 2, -1};
    const std::vector<double> u = flow(eval, 1, p, 0.25, 1e-3, 0.5);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(u[i], p[i] * std::exp(0.25), 1e-11);
}

TEST(chart, jacobian_columns_match_frame)
{
    const DualFrame f = euler_frame();
    const FrameEvaluator eval(f);
    const ChartResult r = integrate_chart(f, spec({1, 1, 1}, cube(3, 0.3)));
    for (const auto& s : r.samples) {
        EXPECT_LE(s.jac_err, 1e-5);
        for (std::size_t q = 1; q <= 3; ++q) {
            const std::vector<double> v = eval.field(q, s.u);
            for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(s.jacobian[q - 1][i], v[i], 1e-5);
        }
    }
}

TEST(chart, euler_pushforward_is_canonical_and_converges)
{
    const DualFrame f = euler_frame();
    ChartResult coarse = integrate_chart(f, spec({1, 1, 1}, cube(3, 0.3), 1e-3));
    ChartResult fine = integrate_chart(f, spec({1, 1, 1}, cube(3, 0.3), 5e-4));
    const Residual rc = pushforward_check(f, coarse);
    pushforward_check(f, fine);
    EXPECT_EQ(rc.entries.size(), 27u * 27u);
    EXPECT_LE(coarse.max_order_err(), 1e-8);
    EXPECT_LE(coarse.max_push_err(), 1e-6);
    EXPECT_NEAR(rc.max_abs(), coarse.max_push_err(), 1e-15);
    EXPECT_GE(coarse.max_push_err() / fine.max_push_err(), 3.5);
    EXPECT_GE(coarse.max_jac_err() / fine.max_jac_err(), 3.5);
}

TEST(chart, semi_simple_pair_is_diagonal)
{
    const BlockShape shape({1, 1});
    const DualFrame f = build_frame(rational_field(shape, {"u1", "u2^2 + 1"}), {{}, {}});
    ChartResult r = integrate_chart(f, spec({1, 0.8}, cube(2, 0.3)));
    ChartResult fine = integrate_chart(f, spec({1, 0.8}, cube(2, 0.3), 5e-4));
    pushforward_check(f, r);
    pushforward_check(f, fine);
    EXPECT_LE(r.max_push_err(), 1e-5);
    EXPECT_GE(r.max_push_err() / fine.max_push_err(), 3.5);
}

TEST(chart, two_jordan_blocks)
{
    const BlockShape shape({2, 2});
    const Backend rb = Backend::rational(4);
    const DualFrame f = build_frame(rational_field(shape, {"u1", "u2", "u3", "u4"}),
                                    {{parse_scalar("u2", rb)}, {parse_scalar("u4", rb)}});
    ChartResult r = integrate_chart(f, spec({1, 1, -1, 1}, cube(4, 0.2)));
    pushforward_check(f, r);
    EXPECT_LE(r.max_order_err(), 1e-8);
    EXPECT_LE(r.max_push_err(), 1e-6);
}

// --- errors

TEST(chart, singular_encounter_below_floor)
{
    ChartSpec s = spec({1, 1, 1}, {{-0.3, 0, 0}});
    s.floor = 0.8;
    try {
        integrate_chart(euler_frame(), s);
        FAIL() << "expected SingularEncounter";
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::SingularEncounter);
        EXPECT_EQ(err.indices(), (std::vector<std::size_t>{1}));
    }
}

TEST(chart, base_point_near_locus)
{
    try {
        integrate_chart(euler_frame(), spec({0.2, 1, 1}, {{0, 0, 0}}));
        FAIL() << "expected PreconditionFailed";
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::PreconditionFailed);
    }
    EXPECT_THROW(integrate_chart(euler_frame(), spec({1, 0.1, 1}, {{0, 0, 0}})), Error);
}

TEST(chart, frame_conditions_checked_at_base_point)
{
    try {
        integrate_chart(euler_frame("u1^2", "2*u3"), spec({1, 1, 1}, {{0.1, 0.1, 0.1}}));
        FAIL() << "expected PreconditionFailed";
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::PreconditionFailed);
    }
}

TEST(chart, non_commuting_frame_detected)
{
    ChartSpec s = spec({1, 1, 1}, {{0.2, 0.2, 0.2}});
    s.check_frame = false;
    try {
        integrate_chart(euler_frame("u1^2", "2*u3"), s);
        FAIL() << "expected NonCommutingFrame";
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::NonCommutingFrame);
    }
}

TEST(chart, grid_outside_radius)
{
    try {
        integrate_chart(euler_frame(), spec({1, 1, 1}, {{0.6, 0, 0}}));
        FAIL() << "expected InvalidInput";
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::InvalidInput);
    }
    EXPECT_THROW(integrate_chart(euler_frame(), spec({1, 1}, {{0, 0, 0}})), Error);
}

}  // namespace
}  // namespace evid
