#include <gtest/gtest.h>

#include <stdexcept>

#include "invlab/body.hpp"
#include "invlab/vec3.hpp"

using namespace invlab;

TEST(Vec3Test, CrossIsAntisymmetricAndOrthogonal)
{
    Vec3 const a{1.5, -2, 0.25};
    Vec3 const b{-0.5, 3, 4};
    Vec3 const c = cross(a, b);
    EXPECT_EQ(cross(b, a), -c);
    EXPECT_NEAR(dot(c, a), 0.0, 1e-14);
    EXPECT_NEAR(dot(c, b), 0.0, 1e-14);
    EXPECT_EQ(cross(Vec3{1, 0, 0}, Vec3{0, 1, 0}), (Vec3{0, 0, 1}));
}

TEST(Vec3Test, NormAvoidsOverflow)
{
    EXPECT_DOUBLE_EQ(norm(Vec3{3, 4, 12}), 13.0);
    EXPECT_DOUBLE_EQ(norm(Vec3{3e200, 4e200, 0}), 5e200);
}

TEST(BodyTest, RejectsBadMass)
{
    EXPECT_THROW(Body("a", 0.0, {}, {}, {}), std::invalid_argument);
    EXPECT_THROW(Body("a", -1.0, {}, {}, {}), std::invalid_argument);
    EXPECT_THROW(Body("a", std::numeric_limits<double>::infinity(), {}, {}, {}), std::invalid_argument);
    EXPECT_THROW(Body("a", 1.0, {}, {std::nan(""), 0, 0}, {}), std::invalid_argument);
}

TEST(BodyTest, PropertiesDefaultToZeroAndMassIsAProperty)
{
    Body const b("b", 2.5, {{"charge", -1.0}}, {}, {});
    EXPECT_EQ(b.property("charge"), -1.0);
    EXPECT_EQ(b.property("spin"), 0.0);
    EXPECT_EQ(b.property("mass"), 2.5);
    EXPECT_EQ(b.with_property("mass", 4.0).mass(), 4.0);
    EXPECT_EQ(b.with_property("charge", 3.0).property("charge"), 3.0);
    EXPECT_EQ(b.property("charge"), -1.0);
}

TEST(BodyTest, PairStateIsAMinusB)
{
    Body const a("a", 1, {}, {1, 2, 3}, {0, 1, 0});
    Body const b("b", 1, {}, {0, 2, 5}, {1, 1, 1});
    PairState const s = pair_state(a, b);
    EXPECT_EQ(s.separation, (Vec3{1, 0, -2}));
    EXPECT_EQ(s.relative_velocity, (Vec3{-1, 0, -1}));
    EXPECT_EQ(pair_state(b, a).separation, s.swapped().separation);
}
