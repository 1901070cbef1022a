#include "gillespie.hpp"

#include <algorithm>
#include <cmath>

namespace evoscale {

GillespieResult gillespie_run(const Model& model, const std::vector<Trait>& initial_traits,
                              const std::vector<long>& initial_counts,
                              const GillespieOptions& options, Rng& rng) {
    if (initial_traits.empty() || initial_traits.size() != initial_counts.size())
        throw std::invalid_argument("gillespie_run: invalid initial population");
    if (options.horizon <= 0.0) throw std::invalid_argument("gillespie_run: horizon must be > 0");

    GillespieResult res;
    PopulationState state;
    for (std::size_t i = 0; i < initial_traits.size(); ++i) {
        if (initial_counts[i] < 1) throw std::invalid_argument("gillespie_run: counts must be >= 1");
        res.trait_registry.push_back(initial_traits[i]);
        state.classes.push_back({static_cast<int>(i), initial_counts[i]});
    }

    double t = 0.0;
    double next_sample = options.sample_start;
    double size_sq_integral = 0.0;
    std::vector<double> weights;  // per class: birth then death
    std::vector<std::size_t> pending_mutations;  // indices into res.markers awaiting rho

    const auto record_sizes_until = [&](double until, long size) {
        if (options.sample_dt <= 0.0) return;
        while (next_sample <= until) {
            res.size_samples.push_back({next_sample, size});
            next_sample += options.sample_dt;
        }
    };

    while (t < options.horizon) {
        const std::size_t k = state.classes.size();
        if (k == 0) {
            res.extinct = true;
            break;
        }
        // per-class birth and death rates under the current measure
        weights.assign(2 * k, 0.0);
        double total_rate = 0.0;
        long total_count = 0;
        for (std::size_t i = 0; i < k; ++i) total_count += state.classes[i].count;
        for (std::size_t i = 0; i < k; ++i) {
            const Trait& xi = res.trait_of(state.classes[i].trait_id);
            const double ni = static_cast<double>(state.classes[i].count);
            double death_per_cap = model.natural_death - model.c(xi, xi);
            for (std::size_t j = 0; j < k; ++j)
                death_per_cap += model.c(xi, res.trait_of(state.classes[j].trait_id)) *
                                 static_cast<double>(state.classes[j].count);
            weights[2 * i] = model.b(xi) * ni;
            weights[2 * i + 1] = std::max(0.0, death_per_cap) * ni;
            total_rate += weights[2 * i] + weights[2 * i + 1];
        }
        if (total_rate <= 0.0) {
            // single immortal individual with b = 0 cannot happen (b > 0); guard anyway
            t = options.horizon;
            break;
        }
        const double dt = rng.exponential(total_rate);
        const double t_next = t + dt;
        if (t_next >= options.horizon) {
            record_sizes_until(options.horizon, total_count);
            size_sq_integral += static_cast<double>(total_count) * static_cast<double>(total_count) *
                                (options.horizon - t);
            t = options.horizon;
            break;
        }
        record_sizes_until(t_next, total_count);
        size_sq_integral +=
            static_cast<double>(total_count) * static_cast<double>(total_count) * dt;
        t = t_next;

        if (++res.event_count > options.event_cap) throw EventCapExceeded(options.event_cap);

        const std::size_t pick = rng.categorical(weights, total_rate);
        const std::size_t ci = pick / 2;
        const bool is_birth = (pick % 2) == 0;
        if (is_birth) {
            const Trait& xi = res.trait_of(state.classes[ci].trait_id);
            const double gm = options.gamma * model.mu(xi);
            if (gm > 0.0 && rng.uniform() < gm) {
                const Trait child = xi + model.kernel.sample(rng);
                res.trait_registry.push_back(child);
                const int id = static_cast<int>(res.trait_registry.size()) - 1;
                state.classes.push_back({id, 1});
                ++res.mutant_births;
                res.markers.push_back({t, -1.0, -1});
                pending_mutations.push_back(res.markers.size() - 1);
                if (options.record_events) res.events.push_back({t, EventKind::mutant_birth, id});
            } else {
                ++state.classes[ci].count;
                if (options.record_events)
                    res.events.push_back({t, EventKind::birth, state.classes[ci].trait_id});
            }
        } else {
            --state.classes[ci].count;
            if (options.record_events)
                res.events.push_back({t, EventKind::death, state.classes[ci].trait_id});
            if (state.classes[ci].count == 0) {
                state.classes[ci] = state.classes.back();
                state.classes.pop_back();
            }
        }
        if (!pending_mutations.empty() && state.classes.size() == 1) {
            for (std::size_t mi : pending_mutations) {
                res.markers[mi].rho = t;
                res.markers[mi].survivor_trait_id = state.classes[0].trait_id;
            }
            pending_mutations.clear();
            if (options.stop_at_first_marker) break;
        }
    }

    for (std::size_t mi : pending_mutations) res.open_taus.push_back(res.markers[mi].tau);
    res.markers.erase(std::remove_if(res.markers.begin(), res.markers.end(),
                                     [](const Marker& m) { return m.rho < 0.0; }),
                      res.markers.end());
    res.final_state = state;
    res.final_state.clock = t;
    res.final_time = t;
    res.time_avg_size_sq = t > 0.0 ? size_sq_integral / t : 0.0;
    return res;
}

}  // namespace evoscale
