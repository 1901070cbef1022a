/* evoscale C API
 *
 * Shared-library surface over the evolutionary-dynamics core: stationary laws
 * of the logistic branching chain, two-type fixation probabilities (exact
 * truncated solve and Monte Carlo), invasibility coefficients and adaptive
 * slopes, and the configured pipelines (microscopic simulation, substitution
 * jump process, trait diffusion, validation harness).
 *
 * Conventions: every function returns an evs_status; outputs go through
 * pointers. Objects are opaque handles released with their destroy function.
 * evs_last_error() returns a thread-local message for the last failure.
 */
#ifndef EVOSCALE_H
#define EVOSCALE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evs_status {
    EVS_OK = 0,
    EVS_ERR_INVALID_ARGUMENT = 1,
    EVS_ERR_PARSE = 2,
    EVS_ERR_NUMERIC = 3,
    EVS_ERR_IO = 4,
    EVS_ERR_VALIDATION_FAILED = 5,
    EVS_ERR_EVENT_CAP = 6
} evs_status;

const char* evs_status_name(evs_status status);
/* thread-local detail message for the most recent error */
const char* evs_last_error(void);
const char* evs_version(void);

/* ------------------------------------------------------------------ */
/* configuration                                                       */

typedef struct evs_config evs_config;

evs_status evs_config_from_file(const char* path, evs_config** out);
evs_status evs_config_from_string(const char* json_text, evs_config** out);
/* dotted-path override, e.g. "model.birth.intercept=1.2" */
evs_status evs_config_override(evs_config* cfg, const char* assignment);
evs_status evs_config_set_seed(evs_config* cfg, uint64_t seed);
void evs_config_destroy(evs_config* cfg);

/* ------------------------------------------------------------------ */
/* closed forms                                                        */

/* stationary law of the (b, c, 0) chain: probabilities of sizes 1..cap;
 * *len receives the truncated support size, *mean the exact mean */
evs_status evs_stationary_law(double theta, double tail_tol, double* probs, size_t cap,
                              size_t* len, double* mean);
evs_status evs_alpha_stationary_law(double theta, double alpha_exp, double tail_tol,
                                    double* probs, size_t cap, size_t* len,
                                    double* normalizer);
/* beta = mu b theta/(1 - e^-theta) */
evs_status evs_mutant_production_rate(double mu, double b, double theta, double* beta);
/* (e^-theta - 1 + theta)/theta^2 */
evs_status evs_neutral_fitness(double theta, double* chi);

/* ------------------------------------------------------------------ */
/* two-type chain                                                      */

typedef struct evs_two_type_params {
    double b1, b2;
    double c11, c12, c21, c22;
    double d1, d2;
} evs_two_type_params;

/* selection coefficients ordered lambda, delta, alpha, epsilon, sigma */
evs_status evs_two_type_from_base(double b, double c, double d, const double s[5],
                                  evs_two_type_params* out);
/* rates out of (n, m): birth1, birth2, death1, death2 */
evs_status evs_two_type_rates(int64_t n, int64_t m, const evs_two_type_params* params,
                              double out[4]);
evs_status evs_mc_fixation(const evs_two_type_params* params, int64_t n, int64_t m,
                           int64_t replicates, uint64_t seed, int jobs, double* estimate,
                           double* stderr_out);

/* ------------------------------------------------------------------ */
/* fixation table                                                      */

typedef struct evs_fixation_table evs_fixation_table;

/* n_max = 0 picks 8*max(theta, requested_total, 20); sensitivity != 0 adds
 * the doubled-truncation comparison */
evs_status evs_fixation_solve(const evs_two_type_params* params, int n_max,
                              int requested_total, double tol, int sensitivity,
                              evs_fixation_table** out);
evs_status evs_fixation_value(const evs_fixation_table* table, int n, int m, double* u);
evs_status evs_fixation_info(const evs_fixation_table* table, int* n_max, double* residual,
                             double* sensitivity);
evs_status evs_fixation_write_csv(const evs_fixation_table* table, const char* path);
void evs_fixation_destroy(evs_fixation_table* table);

/* ------------------------------------------------------------------ */
/* invasibility                                                        */

/* iota is one of 'l' (fertility), 'd' (defence), 'a' (aggressiveness),
 * 'e' (isolation), 's' (survival) */
evs_status evs_invasibility_g(char iota, int64_t n, double b, double c, double d, int k_max,
                              double* out);
/* adaptive slopes (a_lambda, a_alpha, a_delta) at resident (b, c, 0) */
evs_status evs_adaptive_slopes(double b, double c, int k_max, double out[3]);
/* genealogical distinctness probabilities q^(2), q^(3) up to n_max;
 * method "harmonic" or "monte_carlo" */
evs_status evs_genealogy(double b, double c, double d, int n_max, const char* method,
                         int64_t replicates, uint64_t seed, double* q2, double* q3,
                         double* kappa, double* kappa_prime);

/* ------------------------------------------------------------------ */
/* pipelines                                                           */

typedef struct evs_report evs_report;

/* subcommand is one of simulate-micro, fixation, invasibility, tss,
 * diffusion, validate; artifacts are written under out_dir. A report handle
 * is produced only by validate (pass report_out = NULL otherwise). */
evs_status evs_run(const evs_config* cfg, const char* subcommand, const char* out_dir,
                   int jobs, evs_report** report_out);

size_t evs_report_size(const evs_report* report);
int evs_report_all_passed(const evs_report* report);
evs_status evs_report_entry(const evs_report* report, size_t index, const char** name,
                            const char** anchor, double* computed, double* reference,
                            double* tolerance, int* passed);
evs_status evs_report_print(const evs_report* report, const char* path_or_null);
void evs_report_destroy(evs_report* report);

#ifdef __cplusplus
}
#endif

#endif /* EVOSCALE_H */
