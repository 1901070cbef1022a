#include "stationary.hpp"

#include <cmath>
#include <stdexcept>

namespace evoscale {

long DiscreteLaw::sample(double u) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return static_cast<long>(i + 1);
    }
    return static_cast<long>(p.size());
}

double zero_truncated_poisson_mean(double theta) {
    if (theta <= 0.0) throw std::invalid_argument("theta must be positive");
    return theta / -std::expm1(-theta);
}

DiscreteLaw stationary_law(double theta, double tail_tol) {
    if (theta <= 0.0) throw std::invalid_argument("theta must be positive");
    if (!(tail_tol > 0.0 && tail_tol < 1.0))
        throw std::invalid_argument("tail_tol must be in (0,1)");
    DiscreteLaw law;
    law.mean = zero_truncated_poisson_mean(theta);  // exact closed form
    const double denom = -std::expm1(-theta);       // 1 - e^{-theta}
    // P(xi = i) = e^{-theta} theta^i / ((1 - e^{-theta}) i!)
    double term = std::exp(-theta) * theta / denom;  // i = 1
    double cum = 0.0;
    long i = 1;
    for (;;) {
        law.p.push_back(term);
        cum += term;
        if (1.0 - cum < tail_tol && static_cast<double>(i) > theta) break;
        ++i;
        term *= theta / static_cast<double>(i);
        if (i > 100000) throw std::runtime_error("stationary_law: series did not converge");
    }
    return law;
}

DiscreteLaw alpha_stationary_law(double theta, double alpha_exp, double tail_tol) {
    if (theta <= 0.0) throw std::invalid_argument("theta must be positive");
    if (alpha_exp <= 0.0) throw std::invalid_argument("alpha_exp must be positive");
    if (!(tail_tol > 0.0 && tail_tol < 1.0))
        throw std::invalid_argument("tail_tol must be in (0,1)");
    DiscreteLaw law;
    // unnormalized w_i = theta^i / (i ((i-1)!)^alpha); ratio w_{i+1}/w_i =
    // theta * i / ((i+1) i^alpha), which vanishes for alpha > 0.
    std::vector<long double> w;
    long double wi = theta;  // i = 1
    long double sum = 0.0L;
    long i = 1;
    for (;;) {
        w.push_back(wi);
        sum += wi;
        const long double ratio =
            static_cast<long double>(theta) * static_cast<long double>(i) /
            (static_cast<long double>(i + 1) *
             std::pow(static_cast<long double>(i), static_cast<long double>(alpha_exp)));
        // geometric bound on the remaining mass once the ratio has dropped below 1/2
        if (ratio < 0.5L && wi * ratio * 2.0L < tail_tol * sum) break;
        wi *= ratio;
        ++i;
        if (i > 200000) throw std::runtime_error("alpha_stationary_law: series did not converge");
    }
    law.normalizer = static_cast<double>(1.0L / sum);
    law.p.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        law.p[k] = static_cast<double>(w[k] / sum);
        law.mean += law.p[k] * static_cast<double>(k + 1);
    }
    return law;
}

double mutant_production_rate(double mu, const std::function<double(long)>& birth_of_n,
                              double theta, double tail_tol) {
    const DiscreteLaw law = stationary_law(theta, tail_tol);
    double beta = 0.0;
    for (long n = 1; n <= law.max_size(); ++n)
        beta += static_cast<double>(n) * birth_of_n(n) * law.prob(n);
    return mu * beta;
}

double mutant_production_rate(double mu, double b, double theta) {
    return mu * b * zero_truncated_poisson_mean(theta);
}

std::vector<double> size_biased_weights(const std::function<double(long)>& birth_of_n,
                                        double theta, double tail_tol) {
    const DiscreteLaw law = stationary_law(theta, tail_tol);
    std::vector<double> w(law.p.size());
    double total = 0.0;
    for (long n = 1; n <= law.max_size(); ++n) {
        w[n - 1] = static_cast<double>(n) * birth_of_n(n) * law.prob(n);
        total += w[n - 1];
    }
    for (auto& x : w) x /= total;
    return w;
}

std::vector<double> size_biased_weights(double theta, double tail_tol) {
    // constant b: exp(-theta) theta^{n-1}/(n-1)!, i.e. 1 + Poisson(theta)
    std::vector<double> w;
    double term = std::exp(-theta);  // n = 1
    double cum = 0.0;
    long n = 1;
    for (;;) {
        w.push_back(term);
        cum += term;
        if (1.0 - cum < tail_tol && static_cast<double>(n) > theta) break;
        term *= theta / static_cast<double>(n);
        ++n;
        if (n > 100000) throw std::runtime_error("size_biased_weights: did not converge");
    }
    return w;
}

}  // namespace evoscale
