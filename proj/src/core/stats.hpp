#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace evoscale {

struct MeanVar {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double stderr_mean() const;
    // standard error of the sample variance under approximate normality
    double stderr_variance() const;
};

struct McEstimate {
    double estimate = 0.0;
    double stderr_est = 0.0;
    long replicates = 0;
};

McEstimate binomial_estimate(long successes, long trials);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// one-sample KS against a continuous CDF; samples need not be sorted
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// two-sample KS
KsResult ks_test_2sample(std::vector<double> a, std::vector<double> b);

struct Chi2Result {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    int bins_used = 0;
};

// Goodness of fit of observed counts (category i, i = 0..) against expected
// probabilities. Trailing categories are merged until each expected count is
// at least min_expected; probs need not sum to one (remainder forms the last bin).
Chi2Result chi2_gof(const std::vector<long>& counts, const std::vector<double>& probs,
                    long total, double min_expected = 5.0);

}  // namespace evoscale
