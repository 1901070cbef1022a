#pragma once

#include <stdexcept>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace evoscale {

// Finite counting measure: distinct living traits with positive counts.
struct PopulationClass {
    int trait_id;  // index into the run's trait registry
    long count;
};

struct PopulationState {
    std::vector<PopulationClass> classes;
    double clock = 0.0;
    long total() const {
        long t = 0;
        for (const auto& c : classes) t += c.count;
        return t;
    }
};

enum class EventKind { birth, mutant_birth, death };

struct EventLogEntry {
    double time;
    EventKind kind;
    int trait_id;
};

// tau_n (n-th mutation time), rho_n (first monomorphic time after tau_n) and
// the surviving trait at rho_n.
struct Marker {
    double tau = 0.0;
    double rho = 0.0;
    int survivor_trait_id = -1;
};

struct SizeSample {
    double time;
    long size;
};

struct GillespieOptions {
    double horizon = 0.0;
    double gamma = 0.0;  // mutation probability scale; child mutates w.p. gamma*mu(x)
    long event_cap = 1000000000L;
    bool record_events = true;
    double sample_dt = 0.0;     // > 0: sample the total size on a regular grid
    double sample_start = 0.0;  // burn-in before size sampling
    bool stop_at_first_marker = false;  // end the run once rho_1 is known
};

struct GillespieResult {
    std::vector<Trait> trait_registry;
    std::vector<EventLogEntry> events;
    std::vector<Marker> markers;
    std::vector<double> open_taus;  // mutation times not yet resolved at the horizon
    std::vector<SizeSample> size_samples;
    PopulationState final_state;
    double final_time = 0.0;
    long event_count = 0;
    long mutant_births = 0;
    double time_avg_size_sq = 0.0;  // (1/T) integral of N_t^2
    bool extinct = false;

    const Trait& trait_of(int id) const { return trait_registry[static_cast<std::size_t>(id)]; }
};

struct EventCapExceeded : std::runtime_error {
    explicit EventCapExceeded(long cap)
        : std::runtime_error("gillespie_run: event cap exceeded (" + std::to_string(cap) + ")") {}
};

// Exact event-driven simulation of the structured birth-death process: each
// individual of trait x gives birth at rate b(x), the child mutates with
// probability gamma*mu(x) with a step drawn from the kernel, and dies at rate
// sum_y c(x,y)(nu - delta_x)(dy) + d.
GillespieResult gillespie_run(const Model& model, const std::vector<Trait>& initial_traits,
                              const std::vector<long>& initial_counts,
                              const GillespieOptions& options, Rng& rng);

}  // namespace evoscale
