#pragma once

#include <functional>
#include <vector>

namespace evoscale {

// Discrete law on {1, 2, ...}; p[i] is the probability of size i+1.
struct DiscreteLaw {
    std::vector<double> p;
    double mean = 0.0;
    double normalizer = 1.0;  // for the alpha family: 1 / sum of unnormalized weights

    double prob(long k) const {
        return (k >= 1 && k <= static_cast<long>(p.size())) ? p[k - 1] : 0.0;
    }
    long max_size() const { return static_cast<long>(p.size()); }
    long sample(double u) const;  // inverse-CDF draw from a uniform u in [0,1)
};

// Stationary size of the (b, c, 0) logistic branching chain: a Poisson(theta)
// variable conditioned on being nonzero, theta = b/c. Truncated where the
// omitted tail mass is below tail_tol.
DiscreteLaw stationary_law(double theta, double tail_tol);

// Stationary size of the alpha-logistic chain: weights theta^i / (i ((i-1)!)^alpha),
// scaled to sum to one.
DiscreteLaw alpha_stationary_law(double theta, double alpha_exp, double tail_tol);

double zero_truncated_poisson_mean(double theta);

// beta = mu * E(xi * b(xi)) under the stationary law; birth_of_n gives the
// per-capita birth rate in a monomorphic population of size n.
double mutant_production_rate(double mu, const std::function<double(long)>& birth_of_n,
                              double theta, double tail_tol);

// constant-birth closed form mu * b * theta / (1 - exp(-theta))
double mutant_production_rate(double mu, double b, double theta);

// b(x,n)-size-biased stationary weights w_n (sum to 1), used by the invasion
// fitness mixture; for constant b they reduce to exp(-theta) theta^(n-1)/(n-1)!.
std::vector<double> size_biased_weights(const std::function<double(long)>& birth_of_n,
                                        double theta, double tail_tol);
std::vector<double> size_biased_weights(double theta, double tail_tol);

}  // namespace evoscale
