#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <memory>
#include <ostream>

#include "csv.hpp"
#include "diffusion.hpp"
#include "fixation.hpp"
#include "gillespie.hpp"
#include "interp.hpp"
#include "invasibility.hpp"
#include "parallel.hpp"
#include "stats.hpp"
#include "tss.hpp"

namespace evoscale {

bool ValidationReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::size_t ValidationReport::failures() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.passed ? 0 : 1;
    return n;
}

void ValidationReport::append(const ValidationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

void ValidationReport::write_csv(std::ostream& os) const {
    CsvWriter w(os);
    w.metadata("checks", static_cast<long>(checks.size()));
    w.metadata("failures", static_cast<long>(failures()));
    w.header({"name", "anchor", "computed", "reference", "tolerance", "pass", "runtime_s",
              "details"});
    for (const auto& c : checks)
        w.row(c.name, c.anchor, c.computed, c.reference, c.tolerance,
              c.passed ? "pass" : "FAIL", c.runtime_s, c.details);
}

void ValidationReport::print(std::ostream& os) const {
    for (const auto& c : checks) {
        os << (c.passed ? "[pass] " : "[FAIL] ") << c.name << "  (" << c.anchor << ")  "
           << "computed=" << CsvWriter::format(c.computed)
           << " reference=" << CsvWriter::format(c.reference)
           << " tol=" << CsvWriter::format(c.tolerance);
        if (!c.details.empty()) os << "  " << c.details;
        os << "\n";
    }
    os << checks.size() << " checks, " << failures() << " failures\n";
}

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

ValidationCheck make_check(const std::string& name, const std::string& anchor, double computed,
                           double reference, double tolerance, bool passed, double runtime,
                           std::string details = "") {
    ValidationCheck c;
    c.name = name;
    c.anchor = anchor;
    c.computed = computed;
    c.reference = reference;
    c.tolerance = tolerance;
    c.passed = passed;
    c.runtime_s = runtime;
    c.details = std::move(details);
    return c;
}

// check that |computed - reference| <= tolerance
ValidationCheck abs_check(const std::string& name, const std::string& anchor, double computed,
                          double reference, double tolerance, double runtime,
                          std::string details = "") {
    return make_check(name, anchor, computed, reference, tolerance,
                      std::fabs(computed - reference) <= tolerance, runtime,
                      std::move(details));
}

// state of a piecewise-constant jump path at time t
double tss_state_at(const TssPath& path, double x0, double t) {
    double x = x0;
    for (const auto& j : path.jumps) {
        if (j.time > t) break;
        x = j.to[0];
    }
    return x;
}

std::ofstream open_artifact(const std::string& out_dir, const std::string& file) {
    std::filesystem::create_directories(out_dir);
    std::ofstream os(std::filesystem::path(out_dir) / file);
    if (!os) throw std::runtime_error("cannot create artifact " + file + " in " + out_dir);
    return os;
}

}  // namespace

ValidationReport experiment_rare_mutation(const ExperimentConfig& cfg, int jobs,
                                          const std::string& out_dir) {
    ValidationReport report;
    const Model& model = cfg.model;
    const Trait x0 = cfg.initial_trait();
    const double beta = tss_beta(model, x0);
    std::vector<double> gammas = cfg.scale.gamma;
    if (gammas.empty()) gammas = {1e-2, 1e-3};
    std::sort(gammas.begin(), gammas.end(), std::greater<double>());

    Stopwatch total;
    if (beta == 0.0) {
        // no mutations at all: both scales must stay put
        GillespieOptions opt;
        opt.horizon = 100.0;
        opt.gamma = gammas.back();
        Rng rng(cfg.run.seed, 555);
        const GillespieResult res = gillespie_run(model, {x0}, {2}, opt, rng);
        report.checks.push_back(make_check(
            "rare_mutation/no_mutations_without_mu", "vanishing mutant production rate",
            static_cast<double>(res.mutant_births), 0.0, 0.0, res.mutant_births == 0,
            total.seconds()));
        return report;
    }

    // reference jump process at the resident: exact solver fitness behind a
    // probe-validated curve in the mutant trait
    SolverChi exact(model, SolverOptions{});
    const double sd = model.kernel.sd[0];
    auto chi_curve = std::make_shared<Curve1D>(
        [&](double y) {
            Trait ty(1);
            ty[0] = y;
            return exact.chi(x0, ty);
        },
        x0[0] - 6.5 * sd, x0[0] + 6.5 * sd, 64, 16);
    if (chi_curve->probe_error() > 1e-6)
        throw std::runtime_error("rare_mutation: fitness curve validation failed");

    const long tss_draws = 10000;
    std::vector<double> tss_times(tss_draws);
    std::vector<double> tss_steps;
    long tss_accepted = 0;
    {
        Rng rng(cfg.run.seed, 1000001);
        for (long i = 0; i < tss_draws; ++i) {
            tss_times[static_cast<std::size_t>(i)] = rng.exponential(beta);
            const Trait h = model.kernel.sample(rng);
            if (rng.uniform() < (*chi_curve)(x0[0] + h[0])) {
                ++tss_accepted;
                tss_steps.push_back(h[0]);
            }
        }
    }
    MeanVar tss_time_mv;
    for (double t : tss_times) tss_time_mv.add(t);

    const long micro_reps = 1000;
    struct MicroOut {
        double scaled_rho = -1.0;
        double step = 0.0;
        bool substituted = false;
        bool resolved = false;
    };

    double prev_ks = -1.0;
    bool trend_ok = true;
    double smallest_gamma_mean = 0.0, smallest_gamma_se = 0.0;
    double micro_accept_frac = 0.0, micro_accept_se = 0.0;
    std::vector<double> micro_steps_smallest;
    long unresolved_total = 0;

    std::ofstream csv;
    if (!out_dir.empty()) {
        csv = open_artifact(out_dir, "rare_mutation.csv");
        csv << "# experiment: rare-mutation limit of first substitutions\n";
        csv << "gamma,replicate,scaled_rho1,substituted,step\n";
    }

    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        const double gamma = gammas[gi];
        std::vector<MicroOut> outs(static_cast<std::size_t>(micro_reps));
        parallel_for(static_cast<std::size_t>(micro_reps), jobs, [&](std::size_t r) {
            GillespieOptions opt;
            opt.gamma = gamma;
            opt.horizon = 60.0 / (gamma * beta);
            opt.record_events = false;
            opt.stop_at_first_marker = true;
            opt.event_cap = cfg.run.event_cap;
            Rng rng(cfg.run.seed, 2000000 + gi * 1000000 + r);
            const GillespieResult res = gillespie_run(model, {x0}, {2}, opt, rng);
            MicroOut& o = outs[r];
            if (!res.markers.empty()) {
                const Marker& mk = res.markers.front();
                o.resolved = true;
                o.scaled_rho = gamma * mk.rho;
                const Trait& v = res.trait_of(mk.survivor_trait_id);
                o.substituted = mk.survivor_trait_id != 0;
                o.step = v[0] - x0[0];
            }
        });
        std::vector<double> scaled;
        long accepted = 0, resolved = 0;
        std::vector<double> steps;
        for (long r = 0; r < micro_reps; ++r) {
            const MicroOut& o = outs[static_cast<std::size_t>(r)];
            if (!o.resolved) continue;
            ++resolved;
            scaled.push_back(o.scaled_rho);
            if (o.substituted) {
                ++accepted;
                steps.push_back(o.step);
            }
            if (csv) csv << CsvWriter::format(gamma) << ',' << r << ','
                         << CsvWriter::format(o.scaled_rho) << ',' << (o.substituted ? 1 : 0)
                         << ',' << CsvWriter::format(o.step) << '\n';
        }
        unresolved_total += micro_reps - resolved;
        const double ks = ks_test(scaled, [beta](double t) { return -std::expm1(-beta * t); })
                              .statistic;
        if (prev_ks >= 0.0 && ks > prev_ks) trend_ok = false;
        prev_ks = ks;
        if (gi + 1 == gammas.size()) {
            MeanVar mv;
            for (double t : scaled) mv.add(t);
            smallest_gamma_mean = mv.mean;
            smallest_gamma_se = mv.stderr_mean();
            const McEstimate acc = binomial_estimate(accepted, resolved);
            micro_accept_frac = acc.estimate;
            micro_accept_se = acc.stderr_est;
            micro_steps_smallest = steps;
        }
    }

    const double combined_se = std::hypot(smallest_gamma_se, tss_time_mv.stderr_mean());
    report.checks.push_back(abs_check(
        "rare_mutation/mean_waiting_time", "rare-mutation limit: first-substitution time",
        smallest_gamma_mean, tss_time_mv.mean, 3.0 * combined_se, total.seconds(),
        "gamma=" + CsvWriter::format(gammas.back()) +
            (unresolved_total ? " unresolved=" + std::to_string(unresolved_total) : "")));
    report.checks.push_back(make_check(
        "rare_mutation/ks_distance_decreases", "rare-mutation limit: convergence trend",
        prev_ks, prev_ks, 0.0, trend_ok && unresolved_total == 0, total.seconds(),
        "ks at smallest gamma"));
    const McEstimate tss_acc = binomial_estimate(tss_accepted, tss_draws);
    report.checks.push_back(abs_check(
        "rare_mutation/substitution_fraction", "fixation-weighted jump kernel",
        micro_accept_frac, tss_acc.estimate,
        3.0 * std::hypot(micro_accept_se, tss_acc.stderr_est), total.seconds()));
    const KsResult step_ks = ks_test_2sample(micro_steps_smallest, tss_steps);
    report.checks.push_back(make_check(
        "rare_mutation/accepted_step_law", "fixation-weighted jump kernel (step sizes)",
        step_ks.p_value, 0.01, 0.0, step_ks.p_value > 0.01, total.seconds(),
        "two-sample ks p-value"));
    return report;
}

ValidationReport experiment_small_steps(const ExperimentConfig& cfg, int jobs,
                                        const std::string& out_dir) {
    ValidationReport report;
    const Model& model = cfg.model;
    const Trait x0 = cfg.initial_trait();
    std::vector<double> epsilons = cfg.scale.epsilon;
    if (epsilons.empty()) epsilons = {0.1, 0.05};
    const double eps = *std::min_element(epsilons.begin(), epsilons.end());
    const long paths = 10000;
    const double horizon = 1.0;
    const std::vector<double> t_grid{0.5, 1.0};

    Stopwatch total;
    const double beta_chi0 = beta_chi_checked(model, x0);
    const double sd = model.kernel.sd[0];
    const double wander = 6.0 * std::sqrt(beta_chi0 * horizon) * sd + 0.1;
    const double x_lo = x0[0] - wander, x_hi = x0[0] + wander;

    // diffusion reference ensemble
    const DiffusionCoefficients coeffs =
        build_coefficients(model, SlopeSource::closed_form, SolverOptions{}, x_lo - 0.05,
                           x_hi + 0.05, 96);
    std::vector<std::vector<double>> em_at(t_grid.size(),
                                           std::vector<double>(static_cast<std::size_t>(paths)));
    parallel_for(static_cast<std::size_t>(paths), jobs, [&](std::size_t p) {
        Rng rng(cfg.run.seed, 3000000 + p);
        const DiffusionPath path = euler_maruyama(coeffs, x0, 1e-3, horizon, rng);
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti)
            em_at[ti][p] = path.at_time(t_grid[ti])[0] - x0[0];
    });

    // rescaled jump-process ensemble on a validated fitness surface
    SolverChi exact(model, SolverOptions{});
    const double y_margin = 8.0 * eps * sd;
    GridChi surface(exact, x_lo, x_hi, x_lo - y_margin, x_hi + y_margin, 48, 24,
                    cfg.run.seed ^ 0xABCDEF);
    std::vector<std::vector<double>> tss_at(t_grid.size(),
                                            std::vector<double>(static_cast<std::size_t>(paths)));
    parallel_for(static_cast<std::size_t>(paths), jobs, [&](std::size_t p) {
        Rng rng(cfg.run.seed, 4000000 + p);
        TssOptions opt;
        opt.horizon = horizon;
        opt.epsilon = eps;
        opt.construction = TssConstruction::thinning;
        const TssPath path = simulate_tss(model, x0, opt, surface, rng);
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti)
            tss_at[ti][p] = tss_state_at(path, x0[0], t_grid[ti]) - x0[0];
    });

    if (!out_dir.empty()) {
        std::ofstream csv = open_artifact(out_dir, "small_steps.csv");
        csv << "# experiment: small-step limit, displacement moments\n";
        csv << "t,ensemble,mean,variance,paths\n";
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
            MeanVar a, b;
            for (double v : tss_at[ti]) a.add(v);
            for (double v : em_at[ti]) b.add(v);
            csv << t_grid[ti] << ",substitution," << CsvWriter::format(a.mean) << ','
                << CsvWriter::format(a.variance()) << ',' << paths << '\n';
            csv << t_grid[ti] << ",diffusion," << CsvWriter::format(b.mean) << ','
                << CsvWriter::format(b.variance()) << ',' << paths << '\n';
        }
    }

    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        MeanVar tssm, emm;
        for (double v : tss_at[ti]) tssm.add(v);
        for (double v : em_at[ti]) emm.add(v);
        const std::string at = "t=" + CsvWriter::format(t_grid[ti]);
        report.checks.push_back(abs_check(
            "small_steps/mean_displacement_" + at, "small-step diffusion limit (mean)",
            tssm.mean, emm.mean, 3.0 * std::hypot(tssm.stderr_mean(), emm.stderr_mean()),
            total.seconds(), "eps=" + CsvWriter::format(eps)));
        report.checks.push_back(abs_check(
            "small_steps/variance_displacement_" + at, "small-step diffusion limit (variance)",
            tssm.variance(), emm.variance(),
            3.0 * std::hypot(tssm.stderr_variance(), emm.stderr_variance()), total.seconds(),
            "variance ratio=" + CsvWriter::format(tssm.variance() / emm.variance())));
    }

    // generator consistency at the starting point: first and second moment
    // rates against the analytic drift and noise-squared
    {
        MeanVar tssm;
        for (double v : tss_at.back()) tssm.add(v);
        const double drift0 = coeffs.drift(x0)[0];
        report.checks.push_back(abs_check(
            "small_steps/moment_rate_first", "limiting generator, first moment", tssm.mean,
            drift0 * horizon, 3.0 * tssm.stderr_mean(), total.seconds()));
        const double var_rate = beta_chi0 * sd * sd;
        report.checks.push_back(abs_check(
            "small_steps/moment_rate_second", "limiting generator, second moment",
            tssm.variance(), var_rate * horizon, 3.0 * tssm.stderr_variance(),
            total.seconds()));
    }
    return report;
}

ValidationReport experiment_theorem51(const ExperimentConfig& cfg, int jobs,
                                      const std::string& out_dir) {
    (void)jobs;
    ValidationReport report;
    Stopwatch total;
    const BaseRates base{1.0, 1.0, 0.0};
    const InvasibilityDeps deps = make_invasibility_deps(base, 64, cfg.solver.k_max);
    const int top = 12;
    const double h = 1e-4;

    std::ofstream csv;
    if (!out_dir.empty()) {
        csv = open_artifact(out_dir, "selection_gradients.csv");
        csv << "# experiment: weak-selection gradient factorization\n";
        csv << "iota,n,m,fd,reference,rel_err\n";
    }

    const Iota iotas[] = {Iota::lambda, Iota::delta, Iota::alpha, Iota::epsilon, Iota::sigma};
    double worst_overall = 0.0;
    for (const Iota iota : iotas) {
        SelectionCoefficients plus, minus;
        double* fp[5] = {&plus.lambda, &plus.delta, &plus.alpha, &plus.epsilon, &plus.sigma};
        double* fm[5] = {&minus.lambda, &minus.delta, &minus.alpha, &minus.epsilon,
                         &minus.sigma};
        *fp[static_cast<int>(iota)] = h;
        *fm[static_cast<int>(iota)] = -h;
        FixationProblem pp;
        pp.params = TwoTypeParams::from_base(base.b, base.c, base.d, plus);
        pp.requested_total = top;
        pp.sensitivity_check = false;
        FixationProblem pm = pp;
        pm.params = TwoTypeParams::from_base(base.b, base.c, base.d, minus);
        const FixationTable tp = solve_fixation(pp, 1e-11);
        const FixationTable tm = solve_fixation(pm, 1e-11);

        double worst = 0.0;
        double worst_ratio_spread = 0.0;
        double worst_antisym = 0.0;
        for (int s = 2; s <= top; ++s) {
            double ratio_lo = 1e300, ratio_hi = -1e300;
            for (int n = 1; n <= s - 1; ++n) {
                const int m = s - n;
                const double fd = (tp(n, m) - tm(n, m)) / (2.0 * h);
                const double ref = selection_gradient_v(iota, n, m, deps);
                if (csv) {
                    const double rel =
                        std::fabs(ref) > 1e-12 ? std::fabs(fd - ref) / std::fabs(ref) : 0.0;
                    csv << iota_name(iota) << ',' << n << ',' << m << ','
                        << CsvWriter::format(fd) << ',' << CsvWriter::format(ref) << ','
                        << CsvWriter::format(rel) << '\n';
                }
                if (std::fabs(ref) > 1e-12)
                    worst = std::max(worst, std::fabs(fd - ref) / std::fabs(ref));
                else
                    worst = std::max(worst, std::fabs(fd) / 1e-3);
                const double p = static_cast<double>(m) / s;
                if (iota != Iota::epsilon) {
                    const double ratio = fd / (p * (1.0 - p));
                    ratio_lo = std::min(ratio_lo, ratio);
                    ratio_hi = std::max(ratio_hi, ratio);
                } else if (n > m) {
                    const double fd_swapped = (tp(m, n) - tm(m, n)) / (2.0 * h);
                    worst_antisym = std::max(
                        worst_antisym,
                        std::fabs(fd + fd_swapped) / std::max(std::fabs(fd), 1e-9));
                }
            }
            if (iota != Iota::epsilon && s >= 3)
                worst_ratio_spread = std::max(
                    worst_ratio_spread, (ratio_hi - ratio_lo) / std::fabs(ratio_hi));
        }
        report.checks.push_back(make_check(
            std::string("theorem51/fd_vs_factorized_") + iota_name(iota),
            "weak-selection gradient p(1-p) g_{n+m}", worst, 0.0, 0.01, worst <= 0.01,
            total.seconds(), "max relative error over n+m<=12"));
        if (iota != Iota::epsilon)
            report.checks.push_back(make_check(
                std::string("theorem51/ratio_constancy_") + iota_name(iota),
                "invasibility coefficient depends on total size only", worst_ratio_spread, 0.0,
                0.01, worst_ratio_spread <= 0.01, total.seconds()));
        else
            report.checks.push_back(make_check(
                "theorem51/epsilon_antisymmetry", "isolation gradient antisymmetry",
                worst_antisym, 0.0, 0.02, worst_antisym <= 0.02, total.seconds()));
        worst_overall = std::max(worst_overall, worst);
    }

    // alpha and sigma coincide exactly in the closed forms
    double ga_gs = 0.0;
    for (long n = 2; n <= 60; ++n)
        ga_gs = std::max(ga_gs, std::fabs(invasibility_g(Iota::alpha, n, deps) -
                                          invasibility_g(Iota::sigma, n, deps)));
    report.checks.push_back(make_check("theorem51/alpha_equals_sigma",
                                       "aggressiveness and survival invasibilities coincide",
                                       ga_gs, 0.0, 0.0, ga_gs == 0.0, total.seconds()));
    return report;
}

// ---------------------------------------------------------------------------
// CLI pipelines

void run_simulate_micro(const ExperimentConfig& cfg, const std::string& out_dir) {
    const Model& model = cfg.model;
    GillespieOptions opt;
    opt.horizon = cfg.run.horizon;
    opt.gamma = cfg.scale.gamma.empty() ? 0.0 : cfg.scale.gamma.front();
    opt.event_cap = cfg.run.event_cap;
    opt.sample_dt = cfg.run.horizon / 1000.0;
    Rng rng(cfg.run.seed, 0);
    const GillespieResult res = gillespie_run(model, {cfg.initial_trait()}, {2}, opt, rng);

    {
        std::ofstream os = open_artifact(out_dir, "events.csv");
        CsvWriter w(os);
        w.metadata("seed", static_cast<long>(cfg.run.seed));
        w.metadata("gamma", opt.gamma);
        w.metadata("horizon", opt.horizon);
        w.header({"time", "event", "trait"});
        for (const auto& ev : res.events) {
            const char* kind = ev.kind == EventKind::birth
                                   ? "birth"
                                   : (ev.kind == EventKind::mutant_birth ? "mutant-birth"
                                                                         : "death");
            w.row(ev.time, kind, res.trait_of(ev.trait_id)[0]);
        }
    }
    {
        std::ofstream os = open_artifact(out_dir, "sizes.csv");
        CsvWriter w(os);
        w.metadata("sample_dt", opt.sample_dt);
        w.header({"time", "size"});
        for (const auto& s : res.size_samples) w.row(s.time, s.size);
    }
    {
        std::ofstream os = open_artifact(out_dir, "substitutions.csv");
        CsvWriter w(os);
        w.header({"tau", "rho", "survivor"});
        for (const auto& mk : res.markers)
            w.row(mk.tau, mk.rho, res.trait_of(mk.survivor_trait_id)[0]);
    }
}

void run_fixation(const ExperimentConfig& cfg, const std::string& out_dir) {
    const Model& model = cfg.model;
    const Trait x = cfg.initial_trait();
    Trait y = x;
    y[0] += model.kernel.sd[0];  // representative mutant one kernel step uphill
    FixationProblem prob;
    prob.params = params_from_traits(model, x, y);
    prob.n_max = cfg.solver.n_max;
    prob.requested_total = 100;
    prob.sensitivity_check = cfg.solver.sensitivity;
    const FixationTable table = solve_fixation(prob, cfg.solver.residual_tol);
    std::ofstream os = open_artifact(out_dir, "fixation.csv");
    table.write_csv(os);
}

void run_invasibility(const ExperimentConfig& cfg, const std::string& out_dir) {
    const Model& model = cfg.model;
    const Trait x = cfg.initial_trait();
    const BaseRates base{model.b(x), model.c(x, x), model.natural_death};
    const InvasibilityDeps deps = make_invasibility_deps(base, 200, cfg.solver.k_max);

    {
        std::ofstream os = open_artifact(out_dir, "invasibility.csv");
        CsvWriter w(os);
        w.metadata("b", base.b);
        w.metadata("c", base.c);
        w.metadata("d", base.d);
        w.metadata("k_max", cfg.solver.k_max);
        w.metadata("kappa", deps.genealogy.kappa);
        w.metadata("kappa_prime", deps.genealogy.kappa_prime);
        w.header({"n", "g_lambda", "g_delta", "g_alpha", "g_epsilon", "g_sigma"});
        for (long n = 2; n <= 200; ++n) {
            const double ge = n >= 3 ? invasibility_g(Iota::epsilon, n, deps) : 0.0;
            w.row(n, invasibility_g(Iota::lambda, n, deps),
                  base.d == 0.0 ? invasibility_g(Iota::delta, n, deps) : 0.0,
                  invasibility_g(Iota::alpha, n, deps), ge,
                  invasibility_g(Iota::sigma, n, deps));
        }
    }
    {
        std::ofstream os = open_artifact(out_dir, "genealogy.csv");
        CsvWriter w(os);
        w.metadata("method", deps.genealogy.method);
        w.metadata("kappa", deps.genealogy.kappa);
        w.metadata("kappa_prime", deps.genealogy.kappa_prime);
        w.header({"n", "q2", "q2_stderr", "q3", "q3_stderr"});
        for (int n = 2; n <= deps.genealogy.n_max; ++n)
            w.row(n, deps.genealogy.q2_at(n), deps.genealogy.q2_err[static_cast<std::size_t>(n)],
                  n >= 3 ? deps.genealogy.q3_at(n) : 0.0,
                  deps.genealogy.q3_err[static_cast<std::size_t>(n)]);
    }
    if (base.d == 0.0) {
        const AdaptiveSlopes slopes = adaptive_slopes(deps);
        std::ofstream os = open_artifact(out_dir, "slopes.csv");
        CsvWriter w(os);
        w.header({"a_lambda", "a_alpha", "a_delta"});
        w.row(slopes.a_lambda, slopes.a_alpha, slopes.a_delta);
    }
}

void run_tss(const ExperimentConfig& cfg, const std::string& out_dir) {
    const Model& model = cfg.model;
    const Trait x0 = cfg.initial_trait();
    SolverChi provider(model, SolverOptions{});
    TssOptions opt;
    opt.horizon = cfg.run.horizon;
    Rng rng(cfg.run.seed, 0);
    const TssPath path = simulate_tss(model, x0, opt, provider, rng);

    std::ofstream os = open_artifact(out_dir, "tss_path.csv");
    CsvWriter w(os);
    w.metadata("seed", static_cast<long>(cfg.run.seed));
    w.metadata("horizon", opt.horizon);
    w.metadata("proposals", path.total_proposals);
    w.header({"time", "trait", "event"});
    w.row(0.0, x0[0], "start");
    for (const auto& j : path.jumps) w.row(j.time, j.to[0], "jump");
    w.row(path.horizon, path.final_state[0], "end");
}

void run_diffusion(const ExperimentConfig& cfg, const std::string& out_dir, int jobs) {
    const Model& model = cfg.model;
    const Trait x0 = cfg.initial_trait();
    const DiffusionCoefficients coeffs = build_coefficients(
        model, SlopeSource::closed_form, SolverOptions{}, x0[0] - 1.0, x0[0] + 1.0, 96);
    const double dt = 1e-3;
    {
        Rng rng(cfg.run.seed, 0);
        const DiffusionPath path = euler_maruyama(coeffs, x0, dt, cfg.run.horizon, rng);
        std::ofstream os = open_artifact(out_dir, "diffusion_path.csv");
        CsvWriter w(os);
        w.metadata("seed", static_cast<long>(cfg.run.seed));
        w.metadata("dt", dt);
        w.header({"time", "trait"});
        for (std::size_t i = 0; i < path.times.size(); i += 10)
            w.row(path.times[i], path.states[i][0]);
    }
    {
        const long paths = std::max(100L, cfg.run.replicates);
        const int points = 20;
        std::vector<std::vector<double>> ens(static_cast<std::size_t>(points + 1),
                                             std::vector<double>(static_cast<std::size_t>(paths)));
        parallel_for(static_cast<std::size_t>(paths), jobs, [&](std::size_t p) {
            Rng rng(cfg.run.seed, 100 + p);
            const DiffusionPath path = euler_maruyama(coeffs, x0, dt, cfg.run.horizon, rng);
            for (int k = 0; k <= points; ++k)
                ens[static_cast<std::size_t>(k)][p] =
                    path.at_time(cfg.run.horizon * k / points)[0];
        });
        std::ofstream os = open_artifact(out_dir, "diffusion_ensemble.csv");
        CsvWriter w(os);
        w.metadata("paths", paths);
        w.header({"time", "mean", "variance"});
        for (int k = 0; k <= points; ++k) {
            MeanVar mv;
            for (double v : ens[static_cast<std::size_t>(k)]) mv.add(v);
            w.row(cfg.run.horizon * k / points, mv.mean, mv.variance());
        }
    }
}

ValidationReport run_validate(const ExperimentConfig& cfg, const std::string& out_dir,
                              int jobs) {
    const ValidationReport report = validate_criteria(cfg, jobs, 0);
    if (!out_dir.empty()) {
        std::ofstream os = open_artifact(out_dir, "report.csv");
        report.write_csv(os);
    }
    return report;
}

}  // namespace evoscale
