#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sequences.hpp"

namespace evoscale {

// q_n^{(k)}: probability that the first surviving k-tuple of the labeled
// neutral chain started from n distinctly labeled individuals has k distinct
// ancestral labels. q_k^{(k)} = 1 by definition.
struct GenealogyEstimate {
    BaseRates base;
    std::string method;            // "harmonic" or "monte_carlo"
    int n_max = 0;
    std::vector<double> q2, q2_err;  // index n, valid for n >= 2
    std::vector<double> q3, q3_err;  // index n, valid for n >= 3
    double kappa = 0.0;        // b (1 - 2 q3^{(2)}/3) + c + d
    double kappa_prime = 0.0;  // (b/2)(1 - q4^{(3)}/2) + c + d/2
    // max spread of the q extracted from different (n,m) on one diagonal,
    // a consistency diagnostic of the harmonic route
    double diagonal_spread = 0.0;

    double q2_at(long n) const { return q2[static_cast<std::size_t>(n)]; }
    double q3_at(long n) const { return q3[static_cast<std::size_t>(n)]; }

    // D^{(2)}_n = q_n^{(2)} / (kappa (n-1)) and D^{(3)}_n = q_n^{(3)}/(kappa' (n-1)(n-2)),
    // satisfying L D2 = dirac(2) and L' D3 = dirac(3)
    Seq d2_seq(int last) const;
    Seq d3_seq(int last) const;
};

// Exact route: the neutral harmonic systems with absorbing set
// {axes} U {total size = k}, boundary data 1 at (1,1) for k = 2 and +-2 at
// (2,1)/(1,2) for k = 3, inverted through
//   w_{n,m} = 2 n m/((n+m)(n+m-1)) q^{(2)}_{n+m}
//   w_{n,m} = 6 n m (n-m)/((n+m)(n+m-1)(n+m-2)) q^{(3)}_{n+m}.
// grid_n_max = 0 picks n_max plus a safety margin (the chain drifts down
// steeply, so the reflecting wall is invisible from the requested range).
GenealogyEstimate q_genealogy_harmonic(const BaseRates& base, int n_max, int grid_n_max = 0);

// Labeled Monte Carlo oracle: one trajectory from n labeled ancestors yields
// a q^{(3)} sample at the first passage through size 3 and a q^{(2)} sample
// at size 2.
GenealogyEstimate q_genealogy_mc(const BaseRates& base, int n_max, long replicates,
                                 uint64_t seed, int jobs = 1);

}  // namespace evoscale
