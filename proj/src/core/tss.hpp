#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "fixation.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace evoscale {

// Fixation probability chi(x, y) of a single y-mutant entering a stationary
// x-population, behind an interface so the jump process can swap evaluation
// strategies.
class ChiProvider {
public:
    virtual ~ChiProvider() = default;
    virtual double chi(const Trait& x, const Trait& y) = 0;
    virtual const char* name() const = 0;
};

// Exact truncated-system evaluation with memoization keyed by the trait pair
// quantized at 1e-12 (proposals repeat the resident x between jumps).
// closed_form weights: exp(-theta) theta^{n-1}/(n-1)!; general weights:
// n b(n) P(xi=n)/E(xi b(xi)) (identical for the constant-b families).
class SolverChi : public ChiProvider {
public:
    enum class Weights { closed_form, general };
    SolverChi(const Model& model, SolverOptions opt, Weights weights = Weights::closed_form);
    double chi(const Trait& x, const Trait& y) override;
    const char* name() const override {
        return weights_ == Weights::closed_form ? "closed_form" : "solver";
    }
    std::size_t memo_size() const { return memo_.size(); }

private:
    const Model& model_;
    SolverOptions opt_;
    Weights weights_;
    bool validated_ = false;
    std::mutex mutex_;
    std::unordered_map<std::string, double> memo_;
};

// Monte Carlo evaluation: draw the entry size from the size-biased stationary
// law, add one mutant, simulate the two-type chain to absorption.
class McChi : public ChiProvider {
public:
    McChi(const Model& model, long replicates, uint64_t seed);
    double chi(const Trait& x, const Trait& y) override;
    const char* name() const override { return "mc"; }

private:
    const Model& model_;
    long replicates_;
    uint64_t seed_;
    uint64_t counter_ = 0;
};

// Bicubic surrogate over a rectangle of (x, y) pairs for 1-d traits, built
// from an exact provider and probe-validated; queries outside the box fall
// back to the exact provider. Ensemble-experiment plumbing.
class GridChi : public ChiProvider {
public:
    GridChi(SolverChi& exact, double x_lo, double x_hi, double y_lo, double y_hi, int nodes,
            int probes, uint64_t seed);
    double chi(const Trait& x, const Trait& y) override;
    const char* name() const override { return "solver_grid"; }
    double probe_error() const { return probe_error_; }

private:
    double lookup(double x, double y) const;
    SolverChi& exact_;
    double x_lo_, x_hi_, y_lo_, y_hi_;
    int nodes_;
    std::vector<double> table_;  // nodes_ x nodes_
    double probe_error_ = 0.0;
};

enum class TssConstruction { thinning, embedded };

struct TssOptions {
    double horizon = 10.0;
    TssConstruction construction = TssConstruction::thinning;
    double epsilon = 1.0;  // step contraction; time runs at beta/epsilon^2
    long max_proposals = 100000000L;
};

struct JumpRecord {
    double time;
    Trait from;
    Trait to;
    long proposal_count;  // proposals since the previous jump, this one included
};

struct TssPath {
    std::vector<JumpRecord> jumps;
    std::vector<double> proposal_times;   // all mutation proposals
    std::vector<Trait> accepted_steps;    // h of accepted proposals (unscaled)
    long total_proposals = 0;
    Trait final_state;
    double horizon = 0.0;
};

// Rare-mutation-limit jump process: wait Exp(beta(x)/eps^2), draw h from the
// kernel, accept the jump to x + eps h with probability chi(x, x + eps h).
// The embedded construction runs the proposal chain on a unit-rate Poisson
// clock in beta-transformed time; both agree in law.
TssPath simulate_tss(const Model& model, const Trait& x0, const TssOptions& options,
                     ChiProvider& provider, Rng& rng);

// q(x, h) density: beta(x) chi(x, x+h) m(x, h)
double tss_jump_rate_density(const Model& model, const Trait& x, const Trait& h,
                             ChiProvider& provider);

// mean mutant production rate of a stationary x-population
double tss_beta(const Model& model, const Trait& x);

}  // namespace evoscale
