#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pnav/rng.hpp"

namespace pnav {

inline double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean_of: empty input");
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

inline double population_variance(const std::vector<double>& xs) {
    double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size());
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;

    bool ci_contains_zero() const { return ci95_low <= 0.0 && 0.0 <= ci95_high; }
};

// Least-squares line y ~ a + b*x with a normal-approximation 95% CI on b.
inline SlopeFit ols_slope(const std::vector<double>& ys) {
    std::size_t n = ys.size();
    if (n < 3) throw std::invalid_argument("ols_slope: need at least 3 points");
    double x_mean = (static_cast<double>(n) - 1.0) / 2.0;
    double y_mean = mean_of(ys);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = static_cast<double>(i) - x_mean;
        sxx += dx * dx;
        sxy += dx * (ys[i] - y_mean);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = y_mean - fit.slope * x_mean;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double resid = ys[i] - (fit.intercept + fit.slope * static_cast<double>(i));
        rss += resid * resid;
    }
    double sigma2 = rss / static_cast<double>(n - 2);
    fit.stderr_slope = std::sqrt(sigma2 / sxx);
    fit.ci95_low = fit.slope - 1.96 * fit.stderr_slope;
    fit.ci95_high = fit.slope + 1.96 * fit.stderr_slope;
    return fit;
}

// One-sided bootstrap test of mean(a) >= ratio * mean(b). Returns the
// fraction of resamples where the inequality fails, i.e. a p-value for the
// null "a falls short of ratio * b".
inline double bootstrap_ratio_pvalue(const std::vector<double>& a, const std::vector<double>& b,
                                     double ratio, int resamples = 10000, std::uint64_t seed = 0) {
    if (a.empty() || b.empty()) throw std::invalid_argument("bootstrap_ratio_pvalue: empty sample");
    Rng rng(seed_combine({fnv1a64("bootstrap"), seed}));
    int failures = 0;
    for (int r = 0; r < resamples; ++r) {
        double sum_a = 0.0, sum_b = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) sum_a += a[rng.uniform_index(a.size())];
        for (std::size_t i = 0; i < b.size(); ++i) sum_b += b[rng.uniform_index(b.size())];
        double mean_a = sum_a / static_cast<double>(a.size());
        double mean_b = sum_b / static_cast<double>(b.size());
        if (mean_a < ratio * mean_b) ++failures;
    }
    return static_cast<double>(failures) / static_cast<double>(resamples);
}

}  // namespace pnav
