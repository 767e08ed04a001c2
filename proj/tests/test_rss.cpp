#include <cmath>

#include <gtest/gtest.h>

#include "rfcal/acquisition.hpp"
#include "rfcal/rss.hpp"

using namespace rfcal;

namespace {

DesignPoint pt(std::initializer_list<double> xs)
{
    DesignPoint p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

}  // namespace

TEST(RssDeterministic, WorkedPair)
{
    const std::vector<DesignPoint> X{pt({0, 0}), pt({1, 2})};
    const std::vector<double> f{1.0, -1.0};
    const auto r = rss_deterministic(X, f);
    ASSERT_TRUE(r.has_value());
    EXPECT_DOUBLE_EQ(r->volume, 4.0);
    EXPECT_EQ(r->lo, pt({0, 0}));
    EXPECT_EQ(r->hi, pt({1, 2}));
}

TEST(RssDeterministic, FloorEngages)
{
    const std::vector<DesignPoint> X{pt({0, 0}), pt({0, 3})};
    const auto r = rss_deterministic(X, std::vector<double>{1.0, -1.0}, 1e-8);
    ASSERT_TRUE(r.has_value());
    EXPECT_NEAR(r->volume, 6e-8, 1e-22);
}

TEST(RssDeterministic, NoSignChange)
{
    const std::vector<DesignPoint> X{pt({0}), pt({1}), pt({2})};
    EXPECT_FALSE(rss_deterministic(X, std::vector<double>{1.0, 0.2, 3.0}).has_value());
    EXPECT_FALSE(rss_deterministic(X, std::vector<double>{-1.0, -0.2, -3.0}).has_value());
    // an exact zero is not a strict sign change
    EXPECT_FALSE(rss_deterministic(X, std::vector<double>{0.0, 0.2, 3.0}).has_value());
}

TEST(RssDeterministic, PicksSmallestVolume)
{
    const std::vector<DesignPoint> X{pt({0.0}), pt({0.5}), pt({1.0})};
    // pairs (0,1): 0.5*|1-(-1)| = 1.0; (1,2): 0.5*|-1-3| = 2.0
    const auto r = rss_deterministic(X, std::vector<double>{1.0, -1.0, 3.0});
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->a, 0u);
    EXPECT_EQ(r->b, 1u);
    EXPECT_DOUBLE_EQ(r->volume, 1.0);
}

TEST(RssDeterministic, SizeMismatch)
{
    const std::vector<DesignPoint> X{pt({0.0}), pt({0.5})};
    EXPECT_THROW(rss_deterministic(X, std::vector<double>{1.0}), DimensionError);
}

TEST(SignChangeProb, Examples)
{
    EXPECT_DOUBLE_EQ(sign_change_prob({0.0, 1.0}, {0.0, 4.0}), 0.5);
    EXPECT_NEAR(sign_change_prob({-3.0, 1.0}, {3.0, 1.0}), 0.997303, 1e-6);
    EXPECT_NEAR(sign_change_prob({5.0, 0.0}, {7.0, 0.0}), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(sign_change_prob({5.0, 0.0}, {-7.0, 0.0}), 1.0);
    RngStream rng(1, 1);
    for (int i = 0; i < 100; ++i) {
        const Posterior a{rng.uniform(-2, 2), rng.uniform(0, 2)}, b{rng.uniform(-2, 2), rng.uniform(0, 2)};
        EXPECT_DOUBLE_EQ(sign_change_prob(a, b), sign_change_prob(b, a));
        const double p = sign_change_prob(a, b);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
    }
}

TEST(RssStochastic, WorkedPair)
{
    // mu_a/sd_a = -mu_b/sd_b = z chosen so that P = 0.95 exactly:
    // P = Phi(z)^2 + Phi(-z)^2 with Phi(-z) = (1 - sqrt(0.9)) / 2.
    const double q = (1.0 - std::sqrt(0.9)) / 2.0;
    // invert the CDF by bisection
    double lo = 0, hi = 10;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(-mid) > q ? lo : hi) = mid;
    }
    const double z = 0.5 * (lo + hi);
    const std::vector<DesignPoint> X{pt({0, 0}), pt({1, 2})};
    const std::vector<Posterior> post{{-z, 1.0}, {z, 1.0}};
    ASSERT_NEAR(sign_change_prob(post[0], post[1]), 0.95, 1e-12);
    const auto r = rss_stochastic(X, post, 0.95 - 1e-9);
    ASSERT_TRUE(r.has_value());
    EXPECT_NEAR(r->volume, 0.1, 1e-9);
}

TEST(RssStochastic, NoQualifyingPair)
{
    const std::vector<DesignPoint> X{pt({0}), pt({1})};
    const std::vector<Posterior> post{{-0.1, 1.0}, {0.1, 1.0}};
    EXPECT_FALSE(rss_stochastic(X, post, 0.95).has_value());
}

TEST(RssStochastic, PicksSmallerScore)
{
    const std::vector<DesignPoint> X{pt({0.0}), pt({1.0}), pt({3.0})};
    // (0,1): extent 1, P ~ 1 -> tiny; (0,2): extent 3; (1,2): same sign
    const std::vector<Posterior> post{{-5.0, 0.01}, {5.0, 0.01}, {5.0, 0.01}};
    const auto r = rss_stochastic(X, post, 0.9);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->a, 0u);
    EXPECT_EQ(r->b, 1u);

    // qualifying pairs with scores 0.1 and 0.2
    const std::vector<DesignPoint> Y{pt({0.0}), pt({2.0}), pt({10.0}), pt({14.0})};
    const double z = 1.959963984540054;  // Phi(-z) = 0.025 -> P = 0.975^2 + 0.025^2
    const double p = sign_change_prob({-z, 1.0}, {z, 1.0});
    const std::vector<Posterior> post2{{-z, 1.0}, {z, 1.0}, {-z * 10, 1.0}, {z * 10, 1.0}};
    const auto r2 = rss_stochastic(Y, post2, 0.9);
    ASSERT_TRUE(r2.has_value());
    // pair (2,3) has P ~ 1 and score ~ 0, so it wins over (0,1) with score 2(1-p)
    EXPECT_EQ(r2->a, 2u);
    EXPECT_EQ(r2->b, 3u);
    EXPECT_GT(2.0 * (1.0 - p), r2->volume);
}
