#include <cmath>

#include <gtest/gtest.h>

#include "rfcal/acqopt.hpp"

using namespace rfcal;

namespace {

Vector v1(double x)
{
    Vector v(1);
    v[0] = x;
    return v;
}

}  // namespace

TEST(Optimize, ConcaveQuadraticInterior)
{
    const Objective f = [](const Vector& t) {
        return ObjectiveEval{-(t[0] - 0.3) * (t[0] - 0.3), v1(-2.0 * (t[0] - 0.3))};
    };
    RngStream rng(1, 0);
    const OptimResult r = optimize(f, v1(0.0), v1(1.0), Sense::Maximize, {}, rng);
    EXPECT_NEAR(r.point[0], 0.3, 1e-4);
    EXPECT_NEAR(r.value, 0.0, 1e-8);
}

TEST(Optimize, MonotoneHitsBoundaryExactly)
{
    const Objective f = [](const Vector& t) { return ObjectiveEval{t[0], v1(1.0)}; };
    RngStream rng(2, 0);
    const OptimResult r = optimize(f, v1(0.0), v1(1.0), Sense::Maximize, {}, rng);
    EXPECT_EQ(r.point[0], 1.0);
    RngStream rng2(2, 0);
    const OptimResult m = optimize(f, v1(0.0), v1(1.0), Sense::Minimize, {}, rng2);
    EXPECT_EQ(m.point[0], 0.0);
}

TEST(Optimize, ConstantObjectiveReturnsAStart)
{
    const Objective f = [](const Vector&) { return ObjectiveEval{2.5, v1(0.0)}; };
    RngStream rng(3, 0);
    RngStream replay = rng;
    const OptimResult r = optimize(f, v1(0.0), v1(1.0), Sense::Minimize, {}, rng);
    EXPECT_EQ(r.value, 2.5);
    // ties resolve to the smallest start point
    double smallest = 1.0;
    for (int s = 0; s < 10; ++s) smallest = std::min(smallest, replay.uniform());
    EXPECT_EQ(r.point[0], smallest);
}

TEST(Optimize, RosenbrockIn2dImproves)
{
    const Objective f = [](const Vector& t) {
        const double a = 1 - t[0], b = t[1] - t[0] * t[0];
        Vector g(2);
        g[0] = -2 * a - 400 * t[0] * b;
        g[1] = 200 * b;
        return ObjectiveEval{a * a + 100 * b * b, g};
    };
    Vector lo(2), hi(2);
    lo << -2, -2;
    hi << 2, 2;
    OptimizerConfig cfg;
    cfg.iters = 200;
    RngStream rng(4, 0);
    const OptimResult r = optimize(f, lo, hi, Sense::Minimize, cfg, rng);
    EXPECT_LT(r.value, 1e-6);
}

TEST(Optimize, DegenerateAxisHeldFixed)
{
    const Objective f = [](const Vector& t) {
        Vector g(2);
        g << 2 * (t[0] - 0.7), 2 * (t[1] - 5.0);
        return ObjectiveEval{(t[0] - 0.7) * (t[0] - 0.7) + (t[1] - 5) * (t[1] - 5), g};
    };
    Vector lo(2), hi(2);
    lo << 0, 0.25;
    hi << 1, 0.25;
    RngStream rng(5, 0);
    const OptimResult r = optimize(f, lo, hi, Sense::Minimize, {}, rng);
    EXPECT_NEAR(r.point[0], 0.7, 1e-6);
    EXPECT_EQ(r.point[1], 0.25);
}

TEST(Optimize, Deterministic)
{
    const Objective f = [](const Vector& t) {
        return ObjectiveEval{std::sin(7 * t[0]), v1(7 * std::cos(7 * t[0]))};
    };
    RngStream a(6, 1), b(6, 1);
    const OptimResult ra = optimize(f, v1(0.0), v1(2.0), Sense::Minimize, {}, a);
    const OptimResult rb = optimize(f, v1(0.0), v1(2.0), Sense::Minimize, {}, b);
    EXPECT_EQ(ra.point[0], rb.point[0]);
    EXPECT_NEAR(ra.value, -1.0, 1e-8);
}

TEST(Optimize, MissingGradientStopsAtStart)
{
    const Objective f = [](const Vector& t) { return ObjectiveEval{t[0], std::nullopt}; };
    RngStream rng(7, 0), replay(7, 0);
    const OptimResult r = optimize(f, v1(0.0), v1(1.0), Sense::Minimize, {}, rng);
    double smallest = 1.0;
    for (int s = 0; s < 10; ++s) smallest = std::min(smallest, replay.uniform());
    EXPECT_EQ(r.point[0], smallest);
}

TEST(Optimize, Errors)
{
    const Objective nan = [](const Vector&) { return ObjectiveEval{std::nan(""), std::nullopt}; };
    RngStream rng(8, 0);
    EXPECT_THROW(optimize(nan, v1(0.0), v1(1.0), Sense::Minimize, {}, rng), OptimizationError);
    const Objective ok = [](const Vector& t) { return ObjectiveEval{t[0], v1(1.0)}; };
    EXPECT_THROW(optimize(ok, v1(1.0), v1(0.0), Sense::Minimize, {}, rng), std::invalid_argument);
}
