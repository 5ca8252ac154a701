#include <gtest/gtest.h>

#include <cmath>

#include "glauber/stats.hpp"

using namespace glauber;

TEST(Stats, WilsonInterval) {
    // 40 of 100 at z = 1.96: centre (0.4 + 0.0192) / 1.0384, half-width 0.0942.
    const auto ci = wilson_interval(40, 100);
    EXPECT_NEAR(ci.estimate, 0.4, 1e-15);
    EXPECT_NEAR(ci.lo, 0.3094, 1e-4);
    EXPECT_NEAR(ci.hi, 0.4980, 1e-4);
    const auto zero = wilson_interval(0, 50);
    EXPECT_NEAR(zero.lo, 0.0, 1e-15);
    EXPECT_GT(zero.hi, 0.0);
}

TEST(Stats, QuantilesAndMedian) {
    const std::vector<double> xs{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(quantile_sorted(xs, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile_sorted(xs, 0.25), 1.75);
    EXPECT_DOUBLE_EQ(median({5, 1, 3}), 3.0);
    EXPECT_THROW(quantile_sorted(std::vector<double>{}, 0.5), invalid_input);
}

TEST(Stats, CensoredMedian) {
    const std::vector<double> obs{3, 1, 2};
    EXPECT_EQ(censored_median(obs, 0), 2.0);
    EXPECT_EQ(censored_median(obs, 1), 2.5);
    EXPECT_EQ(censored_median(obs, 2), 3.0);
    EXPECT_FALSE(censored_median(obs, 3).has_value());
    EXPECT_FALSE(censored_median(std::vector<double>{}, 0).has_value());
}

TEST(Stats, MedianIntervalBracketsMedian) {
    std::vector<double> xs;
    for (int i = 0; i < 101; ++i) xs.push_back(i);
    const auto ci = median_interval(xs, 0);
    EXPECT_EQ(ci.estimate, 50.0);
    EXPECT_LT(ci.lo, 50.0);
    EXPECT_GT(ci.hi, 50.0);
    EXPECT_EQ(median_interval(xs, 90).hi, HUGE_VAL);
}

TEST(Stats, LinearFitRecoversLine) {
    const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
    const auto f = linear_fit(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
    EXPECT_NEAR(f.slope_se, 0.0, 1e-7);
    EXPECT_THROW(linear_fit(std::vector<double>{1, 1}, std::vector<double>{0, 1}), invalid_input);
}

TEST(Stats, PoissonTailMatchesDirectSum) {
    for (double mu : {0.5, 2.0, 3.0, 7.5})
        for (long q = 0; q <= 15; ++q) {
            double below = 0, term = std::exp(-mu);
            for (long k = 0; k < q; ++k) {
                below += term;
                term *= mu / static_cast<double>(k + 1);
            }
            EXPECT_NEAR(poisson_upper_tail(mu, q), 1.0 - below, 1e-12);
        }
}

TEST(Stats, BootstrapIsDeterministicAndCoversPoint) {
    std::vector<double> xs;
    for (int i = 0; i < 200; ++i) xs.push_back(std::sin(i) * 10);
    auto stat = [&](const std::vector<std::size_t>& idx) {
        double s = 0;
        for (auto i : idx) s += xs[i];
        return s / static_cast<double>(idx.size());
    };
    const auto a = bootstrap_interval(xs.size(), 500, 3, stat), b = bootstrap_interval(xs.size(), 500, 3, stat);
    EXPECT_EQ(a.lo, b.lo);
    EXPECT_EQ(a.hi, b.hi);
    EXPECT_LE(a.lo, a.estimate);
    EXPECT_GE(a.hi, a.estimate);
}
