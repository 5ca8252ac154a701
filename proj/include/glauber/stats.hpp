#pragma once

// Small statistics toolkit: binomial intervals, censored medians, least squares,
// Poisson tails, bootstrap.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "glauber/errors.hpp"
#include "glauber/rng.hpp"

namespace glauber {

inline constexpr double z95 = 1.959963984540054;

struct Interval {
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double half_width() const noexcept { return 0.5 * (hi - lo); }
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = z95) {
    if (trials == 0) return {0.0, 0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

/// Linear-interpolated quantile of sorted data (type 7).
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw invalid_input("quantile of empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] + (pos - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

inline double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return quantile_sorted(xs, 0.5);
}

/// Median of a sample where censored entries are only known to exceed the cap.
/// They sort above every observed value; the median is undefined once half or
/// more of the sample is censored.
inline std::optional<double> censored_median(std::span<const double> observed, std::size_t censored) {
    const std::size_t total = observed.size() + censored;
    if (total == 0 || 2 * censored >= total) return std::nullopt;
    std::vector<double> xs(observed.begin(), observed.end());
    std::sort(xs.begin(), xs.end());
    // Positions are 0-based within the full sample; censored values occupy the top.
    auto at = [&](std::size_t k) -> std::optional<double> {
        if (k < xs.size()) return xs[k];
        return std::nullopt;
    };
    if (total % 2 == 1) return at(total / 2);
    const auto a = at(total / 2 - 1), b = at(total / 2);
    if (!a || !b) return std::nullopt;
    return 0.5 * (*a + *b);
}

/// Distribution-free CI for the median from order statistics (normal
/// approximation to the binomial ranks).  Censored entries are +infinity.
inline Interval median_interval(std::span<const double> observed, std::size_t censored, double z = z95) {
    const std::size_t total = observed.size() + censored;
    std::vector<double> xs(observed.begin(), observed.end());
    std::sort(xs.begin(), xs.end());
    xs.resize(total, HUGE_VAL);
    if (total == 0) return {HUGE_VAL, 0.0, HUGE_VAL};
    const double n = static_cast<double>(total);
    const double half = z * std::sqrt(n) / 2.0;
    const auto lo_rank = static_cast<long>(std::floor(n / 2.0 - half));
    const auto hi_rank = static_cast<long>(std::ceil(n / 2.0 + half));
    const auto clamp_rank = [&](long r) { return static_cast<std::size_t>(std::clamp<long>(r, 0, static_cast<long>(total) - 1)); };
    const auto m = censored_median(observed, censored);
    return {m.value_or(HUGE_VAL), xs[clamp_rank(lo_rank)], xs[clamp_rank(hi_rank)]};
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw invalid_input("linear fit needs >= 2 paired points");
    const double n = static_cast<double>(x.size());
    const double mx = mean(x), my = mean(y);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw invalid_input("linear fit with constant abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        rss += r * r;
    }
    f.r_squared = syy > 0 ? 1.0 - rss / syy : 1.0;
    if (x.size() > 2) {
        const double s2 = rss / (n - 2);
        f.slope_se = std::sqrt(s2 / sxx);
        f.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    }
    return f;
}

/// P(Po(mean) >= q).
inline double poisson_upper_tail(double mean_value, long q) {
    if (q <= 0) return 1.0;
    if (mean_value <= 0) return 0.0;
    return boost::math::gamma_p(static_cast<double>(q), mean_value);
}

/// Percentile bootstrap of a statistic over resampled indices.  `statistic`
/// receives a vector of indices (with repetition) into the original sample.
template <class Statistic>
Interval bootstrap_interval(std::size_t sample_size, std::size_t resamples, std::uint64_t seed, Statistic&& statistic,
                            double level = 0.95) {
    if (sample_size == 0 || resamples == 0) throw invalid_input("bootstrap needs data and resamples");
    std::vector<std::size_t> all(sample_size);
    for (std::size_t i = 0; i < sample_size; ++i) all[i] = i;
    const double point = statistic(all);
    philox_stream rng(seed, stream_tag::sampling_check, 0xB007u);
    std::vector<double> stats;
    stats.reserve(resamples);
    std::vector<std::size_t> idx(sample_size);
    for (std::size_t b = 0; b < resamples; ++b) {
        for (auto& i : idx) i = rng.below(sample_size);
        stats.push_back(statistic(idx));
    }
    std::sort(stats.begin(), stats.end());
    const double a = (1.0 - level) / 2.0;
    return {point, quantile_sorted(stats, a), quantile_sorted(stats, 1.0 - a)};
}

} // namespace glauber
