#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "special.hpp"

namespace evoscale {

double MeanVar::stderr_mean() const {
    return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

double MeanVar::stderr_variance() const {
    return n > 1 ? variance() * std::sqrt(2.0 / static_cast<double>(n - 1)) : 0.0;
}

McEstimate binomial_estimate(long successes, long trials) {
    if (trials < 1) throw std::invalid_argument("binomial_estimate: trials < 1");
    McEstimate e;
    e.replicates = trials;
    e.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    e.stderr_est = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(trials));
    return e;
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_test: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    }
    const double sn = std::sqrt(n);
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
    return r;
}

KsResult ks_test_2sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_test_2sample: no samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
    return r;
}

Chi2Result chi2_gof(const std::vector<long>& counts, const std::vector<double>& probs,
                    long total, double min_expected) {
    if (counts.size() != probs.size() || counts.empty())
        throw std::invalid_argument("chi2_gof: size mismatch");
    // merge from the right until expected >= min_expected per bin
    std::vector<double> exp_bins;
    std::vector<long> obs_bins;
    double pe = 0.0;
    long oc = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        pe += probs[i] * static_cast<double>(total);
        oc += counts[i];
        if (pe >= min_expected) {
            exp_bins.push_back(pe);
            obs_bins.push_back(oc);
            pe = 0.0;
            oc = 0;
        }
    }
    // remainder of the distribution (tail beyond the provided categories)
    double listed = 0.0;
    for (double p : probs) listed += p;
    pe += (1.0 - listed) * static_cast<double>(total);
    if (pe > 0.0 || oc > 0) {
        if (!exp_bins.empty() && pe < min_expected) {
            exp_bins.back() += pe;
            obs_bins.back() += oc;
        } else {
            exp_bins.push_back(pe);
            obs_bins.push_back(oc);
        }
    }
    if (exp_bins.size() < 2) throw std::invalid_argument("chi2_gof: fewer than two bins");
    double stat = 0.0;
    for (std::size_t i = 0; i < exp_bins.size(); ++i) {
        const double diff = static_cast<double>(obs_bins[i]) - exp_bins[i];
        stat += diff * diff / exp_bins[i];
    }
    Chi2Result r;
    r.statistic = stat;
    r.bins_used = static_cast<int>(exp_bins.size());
    r.df = static_cast<int>(exp_bins.size()) - 1;
    r.p_value = chi2_sf(stat, r.df);
    return r;
}

}  // namespace evoscale
