#include <gtest/gtest.h>

#include <cmath>

#include "crooked/mink.hpp"
#include "mink_support.hpp"

namespace crooked {
namespace {

using testing::Gen;
using testing::field;
using testing::normalized_lines;
using testing::random_field;
using testing::random_stem_quadrant_field;

const GeodesicLine kAxis = GeodesicLine::between(0, INFINITY);

TEST(KillingField, QuadraticFormMatchesDeterminant) {
    Gen gen(201);
    for (int n = 0; n < 10000; ++n) {
        const auto x = KillingField::from_coords({gen.uniform(-10, 10), gen.uniform(-10, 10), gen.uniform(-10, 10)});
        ASSERT_NEAR(x.quadratic(), -x.matrix().det(), 1e-12 * (1 + x.norm() * x.norm()));
        const auto z = x.coords();
        const auto back = KillingField::from_coords(z);
        ASSERT_LE(max_abs_diff(back.matrix(), x.matrix()), 1e-12);
    }
    EXPECT_THROW(KillingField(Mat2{1, 0, 0, 0}), Error);
}

TEST(KillingClassify, Examples) {
    const auto rot = killing_classify(field(0, -1, 1));
    ASSERT_EQ(rot.kind, KillingKind::Elliptic);
    EXPECT_NEAR(std::abs(rot.center->z() - Complex(0, 1)), 0.0, 1e-12);
    const auto par = killing_classify(field(0, 1, 0));
    ASSERT_EQ(par.kind, KillingKind::Parabolic);
    EXPECT_TRUE(par.attracting.is_infinity());
    const auto hyp = killing_classify(KillingField(Mat2::diag(1, -1)));
    ASSERT_EQ(hyp.kind, KillingKind::Hyperbolic);
    EXPECT_TRUE(hyp.attracting.is_infinity());
    EXPECT_TRUE(same_point(hyp.repelling, BoundaryPoint::real(0)));
    EXPECT_EQ(killing_classify(KillingField{}).kind, KillingKind::Zero);
}

TEST(KillingClassify, AgreesWithFlow) {
    Gen gen(202);
    for (int n = 0; n < 2000; ++n) {
        const auto x = random_field(gen, 2.0);
        const auto cl = killing_classify(x);
        const Isometry g = exp_killing(x * 0.1);
        if (cl.kind == KillingKind::Hyperbolic) {
            const auto gc = classify(g);
            ASSERT_EQ(gc.kind, IsoKind::Hyperbolic);
            ASSERT_TRUE(same_point(gc.attracting, cl.attracting, 1e-9));
            ASSERT_TRUE(same_point(gc.repelling, cl.repelling, 1e-9));
        } else if (cl.kind == KillingKind::Elliptic) {
            const PlanePoint moved = mobius_apply(g, *cl.center);
            ASSERT_LE(dist(moved, *cl.center), 1e-8);
        }
    }
}

TEST(MinkCrooked, MembershipExamples) {
    const MinkCrookedPlane plane{PlaneSide::Left, {}, kAxis};
    EXPECT_TRUE(mink_crooked_contains(plane, field(0, -1, 1)));
    EXPECT_TRUE(mink_crooked_contains(plane, KillingField(Mat2::diag(1, -1))));
    EXPECT_EQ(mink_crooked_membership(plane, KillingField(Mat2::diag(1, -1))).part, PlanePart::WingPlus);
    // Rotation about 1 + i: conjugate the generator at i by z -> z + 1.
    const auto off = field(0, -1, 1).conjugated(Isometry(Mat2{1, 1, 0, 1}));
    EXPECT_FALSE(mink_crooked_contains(plane, off));
    EXPECT_TRUE(mink_crooked_contains(plane, KillingField{}));
    const MinkCrookedPlane right{PlaneSide::Right, {}, kAxis};
    // Attracting infinity, repelling 1: only the Left plane contains it.
    const auto wing = field(1, -2, 0);
    EXPECT_TRUE(mink_crooked_contains(plane, wing));
    EXPECT_FALSE(mink_crooked_contains(right, wing));
    EXPECT_TRUE(mink_crooked_contains(right, -wing));
    EXPECT_FALSE(mink_crooked_contains(plane, -wing));
}

TEST(MinkCrooked, SamplerMembersAndExponential) {
    Gen gen(203);
    for (int trial = 0; trial < 4; ++trial) {
        const MinkCrookedPlane plane{trial % 2 ? PlaneSide::Left : PlaneSide::Right, random_field(gen), gen.line()};
        const auto pts = mink_sample_crooked(plane, 10000, 300 + trial);
        ASSERT_EQ(pts.size(), 10000u);
        EXPECT_LE(max_abs_diff(pts.front().matrix(), plane.v.matrix()), 1e-15);
        for (const auto& x : pts) ASSERT_TRUE(mink_crooked_contains(plane, x));
    }
    // exp(C(l)) in C(l). Fields are drawn over (0, inf), where their entries
    // are well conditioned, and both sides are transported by k.
    for (int trial = 0; trial < 4; ++trial) {
        const auto side = trial % 2 ? PlaneSide::Left : PlaneSide::Right;
        const auto pts = mink_sample_crooked({side, {}, kAxis}, 10000, 400 + trial);
        for (const auto& x : pts) {
            const Isometry k = gen.isometry();
            ASSERT_TRUE(crooked_contains({side, {}, mobius_apply(k, kAxis)}, k * exp_killing(x) * k.inverse()));
        }
    }
}

TEST(MinkCrooked, HalfSpacePartition) {
    Gen gen(204);
    for (int n = 0; n < 10000; ++n) {
        const auto line = gen.oriented_line();
        const auto side = n % 2 ? PlaneSide::Left : PlaneSide::Right;
        const auto v = random_field(gen);
        const auto x = random_field(gen);
        const auto a = mink_halfspace_side({{side, v, line}}, x);
        const auto b = mink_halfspace_side({{side, v, line.reversed_orientation()}}, x);
        const int count = (a == HalfSpaceSide::Inside) + (a == HalfSpaceSide::OnPlane) + (b == HalfSpaceSide::Inside);
        ASSERT_EQ(count, 1);
    }
}

TEST(MinkStemQuadrant, Examples) {
    const auto [l1, l2] = normalized_lines();
    auto u = [](double eps) { return field(-1, -eps / 2, 2 * eps); };
    EXPECT_TRUE(mink_stem_quadrant_contains(l1, u(1) + u(-1)));
    EXPECT_TRUE(mink_stem_quadrant_contains_geometric(l1, u(1) + u(-1)));
    EXPECT_FALSE(mink_stem_quadrant_contains(l1, KillingField{}));
    EXPECT_FALSE(mink_stem_quadrant_contains(l1, field(0, -1, 1)));
    EXPECT_FALSE(mink_stem_quadrant_contains_geometric(l1, field(0, -1, 1)));
    // Generators are the parabolic boundary directions, up to positive scale.
    const auto gens = stem_quadrant_generators(l1);
    for (const auto& g : gens) {
        EXPECT_EQ(killing_classify(g).kind, KillingKind::Parabolic);
        bool matched = false;
        for (double eps : {1.0, -1.0}) {
            const Mat2 ref = u(eps).matrix();
            const double s = g.matrix().frobenius() / ref.frobenius();
            matched = matched || max_abs_diff(g.matrix(), ref * s) <= 1e-12;
        }
        EXPECT_TRUE(matched);
    }
    (void)l2;
}

TEST(MinkStemQuadrant, ConeAndGeometricFormsAgree) {
    Gen gen(205);
    int inside = 0;
    for (int n = 0; n < 10000; ++n) {
        const auto line = gen.oriented_line();
        const auto [up, um] = stem_quadrant_generators(line);
        // Mix cone combinations with arbitrary sign patterns and random noise.
        KillingField x = up * gen.uniform(-1, 2) + um * gen.uniform(-1, 2);
        if (n % 3 == 0) x = random_field(gen);
        const bool cone = mink_stem_quadrant_contains(line, x);
        const bool geom = mink_stem_quadrant_contains_geometric(line, x);
        ASSERT_EQ(cone, geom) << n;
        inside += cone;
        const auto s = random_stem_quadrant_field(gen, line);
        ASSERT_TRUE(mink_stem_quadrant_contains(line, s));
        ASSERT_TRUE(mink_stem_quadrant_contains_geometric(line, s));
        ASSERT_TRUE(stem_quadrant_contains(line, exp_killing(s)));
    }
    EXPECT_GT(inside, 2000);
}

TEST(ExpKilling, Examples) {
    EXPECT_TRUE(exp_killing(KillingField{}).is_identity());
    EXPECT_TRUE(exp_killing(field(0, 1, 0)).approx_equal(Isometry(Mat2{1, 1, 0, 1}), 1e-15));
    EXPECT_TRUE(exp_killing(KillingField(Mat2::diag(0.5, -0.5))).approx_equal(Isometry::dilation(1.0), 1e-14));
}

TEST(MinkDisjoint, Examples) {
    Gen gen(206);
    for (int n = 0; n < 200; ++n) {
        auto [a, b] = gen.separated_lines(0.1);
        const auto a_away = orient_toward(a, point_on_line(b, 0)).reversed_orientation();
        const auto b_away = orient_toward(b, point_on_line(a, 0)).reversed_orientation();
        const auto s = random_stem_quadrant_field(gen, a_away);
        const auto s2 = random_stem_quadrant_field(gen, b_away);
        EXPECT_TRUE(mink_disjoint({PlaneSide::Left, {}, a}, {PlaneSide::Left, s2 - s, b}));
        EXPECT_TRUE(mink_disjoint({PlaneSide::Right, {}, a}, {PlaneSide::Right, s - s2, b}));
        EXPECT_FALSE(mink_disjoint({PlaneSide::Left, {}, a}, {PlaneSide::Left, {}, b}));
    }
    const auto crossing1 = GeodesicLine::between(-1, 1);
    const auto crossing2 = GeodesicLine::between(0, 5);
    for (int n = 0; n < 100; ++n) {
        EXPECT_FALSE(mink_disjoint({PlaneSide::Left, random_field(gen), crossing1},
                                   {PlaneSide::Left, random_field(gen), crossing2}));
    }
    EXPECT_THROW(mink_disjoint({PlaneSide::Left, {}, crossing1}, {PlaneSide::Right, {}, crossing2}), Error);
}

TEST(MinkDisjoint, AgreesWithPolyhedralWitness) {
    Gen gen(207);
    int disjoint = 0;
    for (int n = 0; n < 2000; ++n) {
        const auto side = n % 2 ? PlaneSide::Left : PlaneSide::Right;
        const auto a = gen.line();
        const auto b = gen.line();
        const MinkCrookedPlane p{side, random_field(gen, 2.0), a};
        const MinkCrookedPlane q{side, random_field(gen, 2.0), b};
        const bool dis = mink_disjoint(p, q);
        const auto witness = mink_intersect_witness(p, q);
        ASSERT_EQ(dis, !witness.has_value()) << n;
        disjoint += dis;
    }
    EXPECT_GT(disjoint, 100);
}

}  // namespace
}  // namespace crooked
