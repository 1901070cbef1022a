#include "evoscale/evoscale.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#include "core/config.hpp"
#include "core/experiments.hpp"
#include "core/fixation.hpp"
#include "core/genealogy.hpp"
#include "core/gillespie.hpp"
#include "core/invasibility.hpp"
#include "core/stationary.hpp"
#include "core/two_type.hpp"

namespace {

thread_local std::string g_last_error;

evs_status fail(evs_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

// translate exceptions at the boundary; nothing may escape the C surface
template <class Fn>
evs_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const evoscale::ConfigError& e) {
        return fail(EVS_ERR_PARSE, e.what());
    } catch (const evoscale::EventCapExceeded& e) {
        return fail(EVS_ERR_EVENT_CAP, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(EVS_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(EVS_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(EVS_ERR_NUMERIC, e.what());
    }
}

evoscale::SelectionCoefficients selection_from_array(const double s[5]) {
    evoscale::SelectionCoefficients sel;
    if (s) {
        sel.lambda = s[0];
        sel.delta = s[1];
        sel.alpha = s[2];
        sel.epsilon = s[3];
        sel.sigma = s[4];
    }
    return sel;
}

evoscale::TwoTypeParams to_core(const evs_two_type_params& p) {
    evoscale::TwoTypeParams q;
    q.b1 = p.b1;
    q.b2 = p.b2;
    q.c11 = p.c11;
    q.c12 = p.c12;
    q.c21 = p.c21;
    q.c22 = p.c22;
    q.d1 = p.d1;
    q.d2 = p.d2;
    return q;
}

}  // namespace

struct evs_config {
    evoscale::ExperimentConfig cfg;
};

struct evs_fixation_table {
    evoscale::FixationTable table;
};

struct evs_report {
    evoscale::ValidationReport report;
};

extern "C" {

const char* evs_status_name(evs_status status) {
    switch (status) {
        case EVS_OK: return "ok";
        case EVS_ERR_INVALID_ARGUMENT: return "invalid argument";
        case EVS_ERR_PARSE: return "parse error";
        case EVS_ERR_NUMERIC: return "numeric failure";
        case EVS_ERR_IO: return "i/o error";
        case EVS_ERR_VALIDATION_FAILED: return "validation failed";
        case EVS_ERR_EVENT_CAP: return "event cap exceeded";
    }
    return "unknown";
}

const char* evs_last_error(void) { return g_last_error.c_str(); }

const char* evs_version(void) { return "1.0.0"; }

evs_status evs_config_from_file(const char* path, evs_config** out) {
    if (!path || !out) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        *out = new evs_config{evoscale::ExperimentConfig::from_file(path)};
        return EVS_OK;
    });
}

evs_status evs_config_from_string(const char* json_text, evs_config** out) {
    if (!json_text || !out) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        *out = new evs_config{evoscale::ExperimentConfig::from_string(json_text)};
        return EVS_OK;
    });
}

evs_status evs_config_override(evs_config* cfg, const char* assignment) {
    if (!cfg || !assignment) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        const std::string text =
            evoscale::ExperimentConfig::apply_override(cfg->cfg.json_text, assignment);
        cfg->cfg = evoscale::ExperimentConfig::from_string(text);
        return EVS_OK;
    });
}

evs_status evs_config_set_seed(evs_config* cfg, uint64_t seed) {
    if (!cfg) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        const std::string text = evoscale::ExperimentConfig::apply_override(
            cfg->cfg.json_text, "run.seed=" + std::to_string(seed));
        cfg->cfg = evoscale::ExperimentConfig::from_string(text);
        return EVS_OK;
    });
}

void evs_config_destroy(evs_config* cfg) { delete cfg; }

evs_status evs_stationary_law(double theta, double tail_tol, double* probs, size_t cap,
                              size_t* len, double* mean) {
    if (!probs || !len) return fail(EVS_ERR_INVALID_ARGUMENT, "null output");
    return guarded([&]() {
        const evoscale::DiscreteLaw law = evoscale::stationary_law(theta, tail_tol);
        *len = law.p.size();
        if (law.p.size() > cap)
            return fail(EVS_ERR_INVALID_ARGUMENT, "output buffer too small");
        std::memcpy(probs, law.p.data(), law.p.size() * sizeof(double));
        if (mean) *mean = law.mean;
        return EVS_OK;
    });
}

evs_status evs_alpha_stationary_law(double theta, double alpha_exp, double tail_tol,
                                    double* probs, size_t cap, size_t* len,
                                    double* normalizer) {
    if (!probs || !len) return fail(EVS_ERR_INVALID_ARGUMENT, "null output");
    return guarded([&]() {
        const evoscale::DiscreteLaw law =
            evoscale::alpha_stationary_law(theta, alpha_exp, tail_tol);
        *len = law.p.size();
        if (law.p.size() > cap)
            return fail(EVS_ERR_INVALID_ARGUMENT, "output buffer too small");
        std::memcpy(probs, law.p.data(), law.p.size() * sizeof(double));
        if (normalizer) *normalizer = law.normalizer;
        return EVS_OK;
    });
}

evs_status evs_mutant_production_rate(double mu, double b, double theta, double* beta) {
    if (!beta) return fail(EVS_ERR_INVALID_ARGUMENT, "null output");
    return guarded([&]() {
        *beta = evoscale::mutant_production_rate(mu, b, theta);
        return EVS_OK;
    });
}

evs_status evs_neutral_fitness(double theta, double* chi) {
    if (!chi) return fail(EVS_ERR_INVALID_ARGUMENT, "null output");
    if (theta <= 0.0) return fail(EVS_ERR_INVALID_ARGUMENT, "theta must be positive");
    *chi = (std::exp(-theta) - 1.0 + theta) / (theta * theta);
    return EVS_OK;
}

evs_status evs_two_type_from_base(double b, double c, double d, const double s[5],
                                  evs_two_type_params* out) {
    if (!out) return fail(EVS_ERR_INVALID_ARGUMENT, "null output");
    return guarded([&]() {
        const evoscale::TwoTypeParams p =
            evoscale::TwoTypeParams::from_base(b, c, d, selection_from_array(s));
        out->b1 = p.b1;
        out->b2 = p.b2;
        out->c11 = p.c11;
        out->c12 = p.c12;
        out->c21 = p.c21;
        out->c22 = p.c22;
        out->d1 = p.d1;
        out->d2 = p.d2;
        return EVS_OK;
    });
}

evs_status evs_two_type_rates(int64_t n, int64_t m, const evs_two_type_params* params,
                              double out[4]) {
    if (!params || !out) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        const evoscale::TwoTypeRates r = evoscale::two_type_rates(n, m, to_core(*params));
        out[0] = r.birth1;
        out[1] = r.birth2;
        out[2] = r.death1;
        out[3] = r.death2;
        return EVS_OK;
    });
}

evs_status evs_mc_fixation(const evs_two_type_params* params, int64_t n, int64_t m,
                           int64_t replicates, uint64_t seed, int jobs, double* estimate,
                           double* stderr_out) {
    if (!params || !estimate) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        const evoscale::McEstimate e =
            evoscale::mc_fixation(to_core(*params), n, m, replicates, seed, jobs);
        *estimate = e.estimate;
        if (stderr_out) *stderr_out = e.stderr_est;
        return EVS_OK;
    });
}

evs_status evs_fixation_solve(const evs_two_type_params* params, int n_max,
                              int requested_total, double tol, int sensitivity,
                              evs_fixation_table** out) {
    if (!params || !out) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        evoscale::FixationProblem prob;
        prob.params = to_core(*params);
        prob.n_max = n_max;
        prob.requested_total = requested_total > 0 ? requested_total : 20;
        prob.sensitivity_check = sensitivity != 0;
        *out = new evs_fixation_table{evoscale::solve_fixation(prob, tol)};
        return EVS_OK;
    });
}

evs_status evs_fixation_value(const evs_fixation_table* table, int n, int m, double* u) {
    if (!table || !u) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    if (n < 0 || m < 0 || n + m > table->table.grid.n_max || (n == 0 && m == 0))
        return fail(EVS_ERR_INVALID_ARGUMENT, "state outside the table");
    *u = table->table(n, m);
    return EVS_OK;
}

evs_status evs_fixation_info(const evs_fixation_table* table, int* n_max, double* residual,
                             double* sensitivity) {
    if (!table) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    if (n_max) *n_max = table->table.grid.n_max;
    if (residual) *residual = table->table.residual;
    if (sensitivity) *sensitivity = table->table.truncation_sensitivity;
    return EVS_OK;
}

evs_status evs_fixation_write_csv(const evs_fixation_table* table, const char* path) {
    if (!table || !path) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    std::ofstream os(path);
    if (!os) return fail(EVS_ERR_IO, std::string("cannot open ") + path);
    table->table.write_csv(os);
    return os ? EVS_OK : fail(EVS_ERR_IO, "write failed");
}

void evs_fixation_destroy(evs_fixation_table* table) { delete table; }

evs_status evs_invasibility_g(char iota, int64_t n, double b, double c, double d, int k_max,
                              double* out) {
    if (!out) return fail(EVS_ERR_INVALID_ARGUMENT, "null output");
    return guarded([&]() {
        evoscale::Iota which;
        switch (iota) {
            case 'l': which = evoscale::Iota::lambda; break;
            case 'd': which = evoscale::Iota::delta; break;
            case 'a': which = evoscale::Iota::alpha; break;
            case 'e': which = evoscale::Iota::epsilon; break;
            case 's': which = evoscale::Iota::sigma; break;
            default: return fail(EVS_ERR_INVALID_ARGUMENT, "iota must be l/d/a/e/s");
        }
        const evoscale::BaseRates base{b, c, d};
        const evoscale::InvasibilityDeps deps = evoscale::make_invasibility_deps(
            base, static_cast<int>(std::max<int64_t>(n + 4, 16)), k_max > 0 ? k_max : 10000);
        *out = evoscale::invasibility_g(which, n, deps);
        return EVS_OK;
    });
}

evs_status evs_adaptive_slopes(double b, double c, int k_max, double out[3]) {
    if (!out) return fail(EVS_ERR_INVALID_ARGUMENT, "null output");
    return guarded([&]() {
        const evoscale::InvasibilityDeps deps = evoscale::make_invasibility_deps(
            evoscale::BaseRates{b, c, 0.0}, 64, k_max > 0 ? k_max : 10000);
        const evoscale::AdaptiveSlopes slopes = evoscale::adaptive_slopes(deps);
        out[0] = slopes.a_lambda;
        out[1] = slopes.a_alpha;
        out[2] = slopes.a_delta;
        return EVS_OK;
    });
}

evs_status evs_genealogy(double b, double c, double d, int n_max, const char* method,
                         int64_t replicates, uint64_t seed, double* q2, double* q3,
                         double* kappa, double* kappa_prime) {
    if (!method) return fail(EVS_ERR_INVALID_ARGUMENT, "null method");
    return guarded([&]() {
        const evoscale::BaseRates base{b, c, d};
        evoscale::GenealogyEstimate est;
        if (std::strcmp(method, "harmonic") == 0)
            est = evoscale::q_genealogy_harmonic(base, n_max);
        else if (std::strcmp(method, "monte_carlo") == 0)
            est = evoscale::q_genealogy_mc(base, n_max, replicates, seed);
        else
            return fail(EVS_ERR_INVALID_ARGUMENT, "method must be harmonic or monte_carlo");
        if (q2)
            for (int i = 0; i <= n_max; ++i) q2[i] = i >= 2 ? est.q2_at(i) : 0.0;
        if (q3)
            for (int i = 0; i <= n_max; ++i) q3[i] = i >= 3 ? est.q3_at(i) : 0.0;
        if (kappa) *kappa = est.kappa;
        if (kappa_prime) *kappa_prime = est.kappa_prime;
        return EVS_OK;
    });
}

evs_status evs_run(const evs_config* cfg, const char* subcommand, const char* out_dir,
                   int jobs, evs_report** report_out) {
    if (!cfg || !subcommand) return fail(EVS_ERR_INVALID_ARGUMENT, "null argument");
    const std::string cmd = subcommand;
    const std::string dir = out_dir ? out_dir : "";
    const int effective_jobs = jobs > 0 ? jobs : cfg->cfg.run.jobs;
    return guarded([&]() {
        if (cmd == "simulate-micro") {
            evoscale::run_simulate_micro(cfg->cfg, dir);
        } else if (cmd == "fixation") {
            evoscale::run_fixation(cfg->cfg, dir);
        } else if (cmd == "invasibility") {
            evoscale::run_invasibility(cfg->cfg, dir);
        } else if (cmd == "tss") {
            evoscale::run_tss(cfg->cfg, dir);
        } else if (cmd == "diffusion") {
            evoscale::run_diffusion(cfg->cfg, dir, effective_jobs);
        } else if (cmd == "validate") {
            evoscale::ValidationReport report =
                evoscale::run_validate(cfg->cfg, dir, effective_jobs);
            const bool ok = report.all_passed();
            if (report_out) *report_out = new evs_report{std::move(report)};
            if (!ok) return fail(EVS_ERR_VALIDATION_FAILED, "validation checks failed");
            return EVS_OK;
        } else {
            return fail(EVS_ERR_INVALID_ARGUMENT, "unknown subcommand " + cmd);
        }
        if (report_out) *report_out = nullptr;
        return EVS_OK;
    });
}

size_t evs_report_size(const evs_report* report) {
    return report ? report->report.checks.size() : 0;
}

int evs_report_all_passed(const evs_report* report) {
    return report && report->report.all_passed() ? 1 : 0;
}

evs_status evs_report_entry(const evs_report* report, size_t index, const char** name,
                            const char** anchor, double* computed, double* reference,
                            double* tolerance, int* passed) {
    if (!report || index >= report->report.checks.size())
        return fail(EVS_ERR_INVALID_ARGUMENT, "bad report index");
    const evoscale::ValidationCheck& c = report->report.checks[index];
    if (name) *name = c.name.c_str();
    if (anchor) *anchor = c.anchor.c_str();
    if (computed) *computed = c.computed;
    if (reference) *reference = c.reference;
    if (tolerance) *tolerance = c.tolerance;
    if (passed) *passed = c.passed ? 1 : 0;
    return EVS_OK;
}

evs_status evs_report_print(const evs_report* report, const char* path_or_null) {
    if (!report) return fail(EVS_ERR_INVALID_ARGUMENT, "null report");
    if (path_or_null) {
        std::ofstream os(path_or_null);
        if (!os) return fail(EVS_ERR_IO, std::string("cannot open ") + path_or_null);
        report->report.print(os);
    } else {
        report->report.print(std::cout);
    }
    return EVS_OK;
}

void evs_report_destroy(evs_report* report) { delete report; }

}  // extern "C"
