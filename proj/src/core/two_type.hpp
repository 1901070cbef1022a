#pragma once

#include <cstdint>

#include "rng.hpp"
#include "stats.hpp"

namespace evoscale {

// Additive deviations of the mutant from the resident (b, c, d), positive
// when they favor the mutant: fertility, defence, aggressiveness, isolation,
// survival.
struct SelectionCoefficients {
    double lambda = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    double epsilon = 0.0;
    double sigma = 0.0;

    bool is_zero() const {
        return lambda == 0.0 && delta == 0.0 && alpha == 0.0 && epsilon == 0.0 && sigma == 0.0;
    }
};

// Rate constants of the two-type logistic branching chain. Type 1 is the
// resident, type 2 the mutant; c_ij is the competition felt by an individual
// of type i from one of type j.
struct TwoTypeParams {
    double b1, b2;
    double c11, c12, c21, c22;
    double d1, d2;

    // B = b + (0, lambda)', C = c - [[0,0],[delta,delta]] + [[0,alpha],[0,alpha]]
    // - [[0,eps],[eps,0]], D = d - (0, sigma)'.
    static TwoTypeParams from_base(double b, double c, double d, const SelectionCoefficients& s);
    static TwoTypeParams neutral(double b, double c, double d = 0.0) {
        return from_base(b, c, d, SelectionCoefficients{});
    }
    bool is_neutral() const {
        return b1 == b2 && c11 == c12 && c11 == c21 && c11 == c22 && d1 == d2;
    }
};

struct TwoTypeRates {
    double birth1, birth2, death1, death2;
    double total() const { return birth1 + birth2 + death1 + death2; }
};

// Jump rates out of state (n, m): birth1 = b1 n, birth2 = b2 m,
// death1 = n (c11 (n-1) + c12 m + d1), death2 = m (c21 n + c22 (m-1) + d2).
// Throws if a computed rate is negative (params invalid for this state).
TwoTypeRates two_type_rates(long n, long m, const TwoTypeParams& p);

struct TwoTypeOutcome {
    bool mutant_fixed = false;
    double fixation_time = 0.0;
    long jump_count = 0;   // embedded-chain steps until absorption
    long final_size = 0;
};

// Exact simulation from (n0, m0) until one type count reaches zero.
TwoTypeOutcome two_type_run(long n0, long m0, const TwoTypeParams& p, Rng& rng);

// Fraction of runs absorbed on the mutant axis, with binomial standard error.
McEstimate mc_fixation(const TwoTypeParams& p, long n, long m, long replicates,
                       uint64_t seed, int jobs = 1);

}  // namespace evoscale
