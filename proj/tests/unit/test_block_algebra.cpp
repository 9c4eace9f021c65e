#include "generators.hpp"

#include <evid/block_algebra.hpp>
#include <evid/expr.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace evid {
namespace {

VectorField field(const BlockShape& shape, const Backend& b, std::vector<const char*> src)
{
    std::vector<ScalarFn> c;
    for (auto s : src) c.push_back(parse_scalar(s, b));
    return VectorField(shape, std::move(c));
}

VectorField random_field(testing::Gen& gen, const BlockShape& shape, const Backend& b, unsigned deg = 2)
{
    std::vector<ScalarFn> c;
    for (std::size_t i = 0; i < shape.dimension(); ++i) c.push_back(b.lift(gen.any_poly(shape.dimension(), deg, 3)));
    return VectorField(shape, std::move(c));
}

/// Product through explicit structure constants c^{i(a)}_{j(b)k(c)} = d^a_b d^a_c d^i_{j+k-1}.
VectorField circ_by_structure_constants(const VectorField& x, const VectorField& y)
{
    const BlockShape& s = x.shape();
    VectorField out(s, std::vector<ScalarFn>(s.dimension(), x[1].zero_like()));
    for (std::size_t fi = 1; fi <= s.dimension(); ++fi)
        for (std::size_t fj = 1; fj <= s.dimension(); ++fj)
            for (std::size_t fk = 1; fk <= s.dimension(); ++fk) {
                auto [a, i] = s.block_of(fi);
                auto [b, j] = s.block_of(fj);
                auto [c, k] = s.block_of(fk);
                if (a == b && a == c && i == j + k - 1) out[fi] += x[fj] * y[fk];
            }
    return out;
}

// --------------------------------------------------------------------------------------------------------------------
// Shapes
// --------------------------------------------------------------------------------------------------------------------

TEST(block_shape, flat_maps_are_inverse)
{
    BlockShape s({3, 2, 1});
    EXPECT_EQ(s.dimension(), 6u);
    EXPECT_EQ(s.flat(2, 1), 4u);
    EXPECT_EQ(s.flat(3, 1), 6u);
    for (std::size_t i = 1; i <= 6; ++i) {
        auto [a, j] = s.block_of(i);
        EXPECT_EQ(s.flat(a, j), i);
    }
    EXPECT_EQ(BlockShape::parse("3, 2,1"), s);
    EXPECT_THROW(BlockShape::parse("3,,1"), Error);
    EXPECT_THROW(BlockShape({2, 0}), Error);
}

// --------------------------------------------------------------------------------------------------------------------
// Unit and products
// --------------------------------------------------------------------------------------------------------------------

TEST(block_algebra, unit_components)
{
    BlockShape s3({3}), s21({2, 1});
    EXPECT_EQ(unit(s3, Backend::poly(3)), field(s3, Backend::poly(3), {"1", "0", "0"}));
    EXPECT_EQ(unit(s21, Backend::poly(3)), field(s21, Backend::poly(3), {"1", "0", "1"}));
}

TEST(block_algebra, unit_is_neutral)
{
    testing::Gen gen(1);
    BlockShape s({3, 2});
    Backend b = Backend::poly(5);
    for (int t = 0; t < 20; ++t) {
        VectorField x = random_field(gen, s, b);
        EXPECT_EQ(circ(unit(s, b), x), x);
    }
}

TEST(block_algebra, jordan_block_products)
{
    BlockShape s({3});
    Backend b = Backend::poly(3);
    VectorField d2 = coordinate_field(s, b, 2), d3 = coordinate_field(s, b, 3);
    EXPECT_EQ(circ(d2, d2), d3);
    EXPECT_TRUE(circ(d3, d2).is_zero());
    EXPECT_TRUE(circ(d3, d3).is_zero());
}

TEST(block_algebra, cross_block_product_vanishes)
{
    BlockShape s({2, 1});
    Backend b = Backend::poly(3);
    EXPECT_TRUE(circ(coordinate_field(s, b, 2), coordinate_field(s, b, 3)).is_zero());
}

TEST(block_algebra, convolution_matches_structure_constants)
{
    testing::Gen gen(2);
    for (auto sizes : {std::vector<std::size_t>{4}, {2, 2}, {3, 2, 1}}) {
        BlockShape s(sizes);
        Backend b = Backend::poly(s.dimension());
        for (int t = 0; t < 20; ++t) {
            VectorField x = random_field(gen, s, b), y = random_field(gen, s, b);
            ASSERT_EQ(circ(x, y), circ_by_structure_constants(x, y));
        }
    }
}

TEST(block_algebra, circ_is_commutative_and_associative)
{
    testing::Gen gen(3);
    for (auto sizes : {std::vector<std::size_t>{4}, {2, 2}, {3, 2, 1}}) {
        BlockShape s(sizes);
        Backend b = Backend::poly(s.dimension());
        for (int t = 0; t < 100; ++t) {
            VectorField x = random_field(gen, s, b, 1), y = random_field(gen, s, b, 1), z = random_field(gen, s, b, 1);
            ASSERT_EQ(circ(x, y), circ(y, x));
            ASSERT_EQ(circ(circ(x, y), z), circ(x, circ(y, z)));
        }
    }
}

TEST(block_algebra, product_is_block_local)
{
    testing::Gen gen(4);
    BlockShape s({3, 2, 1});
    Backend b = Backend::poly(6);
    for (int t = 0; t < 20; ++t) {
        VectorField x = random_field(gen, s, b), y = random_field(gen, s, b);
        for (std::size_t alpha = 1; alpha <= 3; ++alpha) {
            VectorField local = circ(x.restrict_to_block(alpha), y.restrict_to_block(alpha));
            ASSERT_EQ(local, circ(x, y).restrict_to_block(alpha));
        }
    }
}

TEST(block_algebra, mismatched_shapes_are_rejected)
{
    Backend b = Backend::poly(3);
    try {
        circ(unit(BlockShape({3}), b), unit(BlockShape({2, 1}), b));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ShapeMismatch);
    }
}

// --------------------------------------------------------------------------------------------------------------------
// Powers
// --------------------------------------------------------------------------------------------------------------------

TEST(block_algebra, powers)
{
    BlockShape s({3});
    Backend b = Backend::poly(3);
    VectorField a = coordinate_field(s, b, 2);
    EXPECT_EQ(power(a, 0), unit(s, b));
    EXPECT_EQ(power(a, 2), coordinate_field(s, b, 3));
    EXPECT_TRUE(power(a, 3).is_zero());
    VectorField euler = field(s, b, {"u1", "u2", "u3"});
    EXPECT_EQ(power(euler, 2), field(s, b, {"u1^2", "2*u1*u2", "2*u1*u3 + u2^2"}));
}

// --------------------------------------------------------------------------------------------------------------------
// Inversion
// --------------------------------------------------------------------------------------------------------------------

TEST(block_algebra, inverse_of_unit)
{
    BlockShape s({2, 2});
    Backend b = Backend::rational(4);
    EXPECT_EQ(invert(unit(s, b)), unit(s, b));
}

TEST(block_algebra, inverse_closed_forms)
{
    Backend b = Backend::rational(3);
    ScalarFn e1 = parse_scalar("u1^2 + u2 + 3", b), e2 = parse_scalar("u1*u3 - u2", b), e3 = parse_scalar("u3^2 + u1", b);

    VectorField two(BlockShape({2}), std::vector<ScalarFn>{parse_scalar("u1^2 + 3", Backend::rational(2)),
                                                          parse_scalar("u1*u2", Backend::rational(2))});
    VectorField inv2 = invert(two);
    EXPECT_EQ(inv2[1], two[1].constant_like(1) / two[1]);
    EXPECT_EQ(inv2[2], -two[2] / (two[1] * two[1]));

    VectorField e(BlockShape({3}), std::vector<ScalarFn>{e1, e2, e3});
    EXPECT_EQ(invert(e)[3], (e2 * e2 - e1 * e3) / (e1 * e1 * e1));
    EXPECT_EQ(circ(e, invert(e)), unit(BlockShape({3}), b));
}

TEST(block_algebra, inverse_property_rational_and_jet)
{
    testing::Gen gen(5);
    for (auto sizes : {std::vector<std::size_t>{4}, {2, 2}, {3, 2, 1}}) {
        BlockShape s(sizes);
        Backend rb = Backend::rational(s.dimension());
        for (int t = 0; t < 10; ++t) {
            VectorField x = random_field(gen, s, rb, 1);
            for (std::size_t a = 1; a <= s.blocks(); ++a) x.at(a, 1) += rb.constant(7);
            ASSERT_EQ(circ(x, invert(x)), unit(s, rb));

            Backend jb = Backend::jet(gen.point(s), 3);
            VectorField xj(s, jb);
            for (std::size_t i = 1; i <= s.dimension(); ++i) xj[i] = jb.lift(x[i].as_rational());
            VectorField inv = invert(xj);
            VectorField r = circ(xj, inv) - unit(s, jb);
            // Relative to the size of the factors entering the convolution.
            double scale = 1.0;
            for (const auto* f : {&xj, &inv})
                for (const auto& c : f->components())
                    for (double v : c.as_float_jet().coefficients()) scale = std::max(scale, std::abs(v));
            for (const auto& c : r.components())
                for (double v : c.as_float_jet().coefficients()) ASSERT_NEAR(v, 0.0, 1e-12 * scale * scale);
        }
    }
}

TEST(block_algebra, non_invertible_block_is_named)
{
    BlockShape s({2, 1});
    Backend b = Backend::rational(3);
    VectorField x = field(s, b, {"u1", "u2", "0"});
    try {
        invert(x);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotInvertible);
        EXPECT_EQ(e.indices(), std::vector<std::size_t>{2});
    }
    Backend jb = Backend::jet({0.0, 1.0, 1.0}, 2);
    VectorField xj = field(s, jb, {"u1", "u2", "u3"});
    try {
        invert(xj);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotInvertible);
        EXPECT_EQ(e.indices(), std::vector<std::size_t>{1});
    }
}

TEST(block_algebra, plain_value_kernels_agree_with_fields)
{
    BlockShape s({3, 1});
    std::vector<double> x{2.0, 0.5, -1.0, 4.0};
    std::vector<double> y = invert_values(s, x);
    std::vector<double> e = circ_values(s, x, y);
    std::vector<double> expected{1.0, 0.0, 0.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(e[i], expected[i], 1e-15);
}

// --------------------------------------------------------------------------------------------------------------------
// Dual product
// --------------------------------------------------------------------------------------------------------------------

TEST(dual_product, unit_identity_reduces_to_circ)
{
    testing::Gen gen(6);
    BlockShape s({2, 1});
    Backend b = Backend::rational(3);
    VectorField einv = invert(unit(s, b));
    VectorField x = random_field(gen, s, b), y = random_field(gen, s, b);
    EXPECT_EQ(dual_product(x, y, einv), circ(x, y));
}

TEST(dual_product, e_is_the_dual_unit)
{
    testing::Gen gen(7);
    BlockShape s({3});
    Backend b = Backend::rational(3);
    VectorField e = field(s, b, {"u1 + 2", "u1*u2", "u3 - u2^2"});
    VectorField einv = invert(e);
    for (int t = 0; t < 10; ++t) {
        VectorField x = random_field(gen, s, b);
        ASSERT_EQ(dual_product(e, x, einv), x);
    }
}

TEST(dual_product, euler_d2_star_d2)
{
    BlockShape s({3});
    Backend b = Backend::rational(3);
    VectorField einv = invert(field(s, b, {"u1", "u2", "u3"}));
    VectorField d2 = coordinate_field(s, b, 2);
    EXPECT_EQ(dual_product(d2, d2, einv), field(s, b, {"0", "0", "1/u1"}));
}

TEST(dual_product, structure_constants_follow_shifted_inverse)
{
    BlockShape s({3, 2});
    Backend b = Backend::rational(5);
    VectorField e = field(s, b, {"u1 + 1", "u2*u1", "u3", "u4 - 2", "u5^2"});
    VectorField einv = invert(e);
    auto c = structure_tensor(s, b, &einv);
    for (std::size_t fi = 1; fi <= 5; ++fi)
        for (std::size_t fj = 1; fj <= 5; ++fj)
            for (std::size_t fk = 1; fk <= 5; ++fk) {
                auto [a, i] = s.block_of(fi);
                auto [be, j] = s.block_of(fj);
                auto [g, k] = s.block_of(fk);
                const long pos = long(i) - long(j) - long(k) + 2;
                ScalarFn expected = b.zero();
                if (a == be && a == g && pos >= 1) expected = einv.at(a, std::size_t(pos));
                ASSERT_EQ(c[fi - 1][fj - 1][fk - 1], expected);
            }
}

TEST(dual_product, commutative_and_associative)
{
    testing::Gen gen(8);
    for (auto sizes : {std::vector<std::size_t>{4}, {2, 2}, {3, 2, 1}}) {
        BlockShape s(sizes);
        Backend b = Backend::rational(s.dimension());
        VectorField e = random_field(gen, s, b, 1);
        for (std::size_t a = 1; a <= s.blocks(); ++a) e.at(a, 1) += b.constant(5);
        VectorField einv = invert(e);
        for (int t = 0; t < 5; ++t) {
            VectorField x = random_field(gen, s, b, 1), y = random_field(gen, s, b, 1), z = random_field(gen, s, b, 1);
            ASSERT_EQ(dual_product(x, y, einv), dual_product(y, x, einv));
            ASSERT_EQ(dual_product(dual_product(x, y, einv), z, einv), dual_product(x, dual_product(y, z, einv), einv));
        }
    }
}

}  // namespace
}  // namespace evid
