#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "invlab/audits.hpp"

using namespace invlab;

TEST(AuditsTest, DerivativeIsExactForQuadratics)
{
    std::vector<double> t;
    std::vector<double> y;
    for (int i = 0; i <= 20; ++i)
    {
        t.push_back(0.1 * i);
        y.push_back(3 * t.back() * t.back() - t.back());
    }
    auto const d = derivative(t, y);
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        EXPECT_NEAR(d[i], 6 * t[i] - 1, 1e-12);
    }
}

TEST(AuditsTest, DriftMeasures)
{
    std::vector<double> const e{-2.0, -2.0 + 1e-7, -2.0 - 3e-7, -2.0};
    EXPECT_NEAR(max_relative_drift(e), 1.5e-7, 1e-15);
    std::vector<double> const ramp{1, 1, 2, 2};
    EXPECT_NEAR(secular_drift(ramp, 2), 1.0, 1e-15);
}

TEST(AuditsTest, FreePairIsInertial)
{
    Body const a("a", 1, {}, {1, 2, 3}, {0.5, -1, 0.25});
    Body const b("b", 3, {}, {0, 0, 0}, {0, 0.1, 0});
    Trajectory const t = integrate(a, b, std::span<ForceLaw const>{}, 10, 1e-3);
    EXPECT_LT(inertia_residual(t), 1e-12);
}

TEST(AuditsTest, MomentumRateMatchesPerpChannel)
{
    Body const a("a", 2, {}, {0, 0, 0}, {0, 0, 0});
    Body const b("b", 1, {}, {1, 0, 0}, {0, 0.8, 0.1});
    ForceLaw const law = merge(std::vector<ForceLaw>{laws::spring(1), laws::perp_demo(1)});
    Vec3 const x = a.position() - b.position();
    Vec3 const v = a.velocity() - b.velocity();
    EXPECT_NEAR(norm(expected_momentum_rate(law, a, b) - cross(x, v) * 2.0), 0, 1e-15);
    EXPECT_EQ(expected_momentum_rate(laws::gravity(), a, b), (Vec3{0, 0, 0}));

    auto const c = identity_convergence(a, b, law, 2.0, 1e-2, RateIdentity::momentum);
    EXPECT_GT(c.ratio, 3.5);
}

TEST(AuditsTest, DragTorqueConvergesAtSecondOrder)
{
    Body const a("a", 1, {}, {0, 0, 0}, {0.2, 0, 0});
    Body const b("b", 3, {}, {0, 1.5, 0}, {0.4, 0, -0.3});
    ForceLaw const law = merge(std::vector<ForceLaw>{laws::spring(2), laws::linear_drag(0.3)});
    // dL/dt = phi_s x_AB x v_AB for a pure drag channel.
    Vec3 const x = a.position() - b.position();
    Vec3 const v = a.velocity() - b.velocity();
    EXPECT_NEAR(norm(expected_torque(law, a, b) - cross(x, v) * -0.3), 0, 1e-15);
    auto const c = identity_convergence(a, b, law, 5.0, 1e-2, RateIdentity::torque);
    EXPECT_GT(c.ratio, 3.5);
}

TEST(AuditsTest, PerpTorqueUsesMassAsymmetry)
{
    Body const a("a", 2, {}, {1, 0, 0}, {0, 1, 0});
    Body const b("b", 1, {}, {0, 0, 0}, {0, 0, 1});
    Vec3 const x{1, 0, 0};
    Vec3 const v{0, 1, -1};
    Vec3 const expected = cross(x, cross(x, v)) * ((1.0 - 2.0) / 3.0);
    EXPECT_NEAR(norm(expected_torque(laws::perp_demo(1), a, b) - expected), 0, 1e-15);
}

TEST(AuditsTest, CovarianceHoldsForKepler)
{
    Body const a("a", 0.5, {}, {-0.5, 0, 0}, {0, -0.5, 0});
    Body const b("b", 0.5, {}, {0.5, 0, 0}, {0, 0.5, 0});
    std::mt19937_64 rng(4);
    for (int i = 0; i < 3; ++i)
    {
        FrameTransform const f = random_transform(rng);
        EXPECT_LT(covariance_residual(a, b, laws::gravity(), f, 6.0, 1e-3, Method::verlet), 1e-9);
    }
}

TEST(AuditsTest, GroupResidualsAreRoundoffSized)
{
    std::mt19937_64 rng(9);
    EXPECT_LT(frame_group_residuals(rng, 200).worst(), 1e-12);
    for (auto const& name : {"lorentz", "rational"})
    {
        auto const g = std::make_shared<galileo::GFunction const>(galileo::GFunction::by_name(name));
        auto const r = oplus_group_residuals(rng, g, 200);
        EXPECT_TRUE(r.closure);
        EXPECT_LT(r.commutativity, 1e-10);
        EXPECT_LT(r.associativity, 1e-10);
        EXPECT_LT(r.inverse, 1e-12);
    }
}

TEST(AuditsTest, RandomVectorRespectsBound)
{
    std::mt19937_64 rng(10);
    for (int i = 0; i < 1000; ++i)
    {
        EXPECT_LE(norm(random_vector(rng, 0.9)), 0.9);
    }
}
