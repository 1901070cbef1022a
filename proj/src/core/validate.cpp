#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "diffusion.hpp"
#include "experiments.hpp"
#include "fixation.hpp"
#include "gillespie.hpp"
#include "invasibility.hpp"
#include "parallel.hpp"
#include "stationary.hpp"
#include "stats.hpp"
#include "tss.hpp"

namespace evoscale {

namespace {

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void add(ValidationReport& report, const std::string& name, const std::string& anchor,
         double computed, double reference, double tolerance, double runtime,
         std::string details = "") {
    ValidationCheck c;
    c.name = name;
    c.anchor = anchor;
    c.computed = computed;
    c.reference = reference;
    c.tolerance = tolerance;
    c.passed = std::fabs(computed - reference) <= tolerance;
    c.runtime_s = runtime;
    c.details = std::move(details);
    report.checks.push_back(std::move(c));
}

void add_flag(ValidationReport& report, const std::string& name, const std::string& anchor,
              bool passed, double computed, double runtime, std::string details = "") {
    ValidationCheck c;
    c.name = name;
    c.anchor = anchor;
    c.computed = computed;
    c.reference = computed;
    c.tolerance = 0.0;
    c.passed = passed;
    c.runtime_s = runtime;
    c.details = std::move(details);
    report.checks.push_back(std::move(c));
}

// C1: neutral fixation probabilities are exactly the mutant frequency
ValidationReport criterion1() {
    ValidationReport r;
    Stopwatch sw;
    FixationProblem prob;
    prob.params = TwoTypeParams::neutral(1.0, 1.0);
    prob.n_max = 400;
    prob.requested_total = 100;
    prob.sensitivity_check = false;
    const FixationTable t = solve_fixation(prob, 1e-10);
    double worst = 0.0;
    for (int s = 2; s <= 100; ++s)
        for (int n = 1; n <= s - 1; ++n)
            worst = std::max(worst, std::fabs(t(n, s - n) - static_cast<double>(s - n) / s));
    add(r, "c1/neutral_exactness", "neutral fixation probability m/(n+m)", worst, 0.0, 1e-6,
        sw.seconds(), "n_max=400, grid n+m<=100");
    return r;
}

// C2: closed form of the neutral invasion fitness
ValidationReport criterion2() {
    ValidationReport r;
    for (double theta : {0.5, 1.0, 2.0, 5.0}) {
        Stopwatch sw;
        std::vector<double> col(600);
        for (std::size_t i = 0; i < col.size(); ++i)
            col[i] = 1.0 / (static_cast<double>(i) + 2.0);
        const double series = invasion_fitness(theta, col, 1e-13);
        const double closed = (std::exp(-theta) - 1.0 + theta) / (theta * theta);
        add(r, "c2/chi_series_theta=" + fmt_g(theta),
            "neutral fitness as a size-biased mixture", series, closed, 1e-10, sw.seconds());
    }
    Stopwatch sw;
    Model model;
    model.dim = 1;
    model.birth.intercept = 1.0;
    model.competition.c0 = 1.0;
    model.kernel.sd = Eigen::VectorXd::Constant(1, 0.1);
    model.kernel.mean = Eigen::VectorXd::Zero(1);
    const Trait x = model.trait(0.0);
    add(r, "c2/chi_solver_neutral_value", "neutral fitness value at theta = 1",
        chi_solver(model, x, x, SolverOptions{}), std::exp(-1.0), 1e-8, sw.seconds());
    return r;
}

// C3: pointwise operator identities on the 1/(n+k) sequences
ValidationReport criterion3() {
    ValidationReport r;
    Stopwatch sw;
    Rng rng(31415);
    const int last = 202;
    double worst28 = 0.0, worst29 = 0.0, worst30 = 0.0, worst31 = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        BaseRates br;
        br.b = 0.2 + 2.8 * rng.uniform();
        br.c = 0.2 + 2.8 * rng.uniform();
        br.d = 3.0 * rng.uniform();
        const auto dev = [&](const Seq& lhs, const Seq& rhs) {
            double worst = 0.0;
            for (int n = lhs.first; n <= std::min(lhs.last(), rhs.last()); ++n)
                worst = std::max(worst, std::fabs(lhs.at(n) - rhs.at(n)));
            return worst;
        };
        for (int k : {1, 2, 3, 7}) {
            const Seq lhs = apply_L(e_seq(k, 2, last + 1), br);
            Seq rhs = Seq::zeros(2, last);
            for (int n = 2; n <= last; ++n)
                rhs.at(n) = -br.b / k / (n + 1.0) + br.d / k / (n - 1.0) -
                            br.b * (k - 1.0) / k / (n + k + 1.0) +
                            (br.b - (k + 1.0) * br.c + br.d) / (n + k) +
                            (k + 1.0) * (br.c - br.d / k) / (n + k - 1.0);
            worst28 = std::max(worst28, dev(lhs, rhs));
        }
        {
            const Seq lhs = apply_L(e_seq(-1, 2, last + 1), br);
            Seq rhs = Seq::zeros(2, last);
            for (int n = 2; n <= last; ++n)
                rhs.at(n) = -2.0 * br.b / n + br.b / (n + 1.0) + br.b / (n - 1.0) +
                            (n == 2 ? br.c + br.d : 0.0);
            worst29 = std::max(worst29, dev(lhs, rhs));
        }
        for (int k : {-1, 1, 2, 5}) {
            const Seq lhs = apply_Lprime(e_seq(k, 3, last + 1), br);
            Seq rhs = Seq::zeros(3, last);
            for (int n = 3; n <= last; ++n)
                rhs.at(n) = -2.0 * br.b / k / (n + 1.0) + 2.0 * br.d / k / (n - 1.0) -
                            br.b * (k - 2.0) / k / (n + k + 1.0) +
                            (br.b - (k + 1.0) * br.c + br.d) / (n + k) +
                            (k + 2.0) * (br.c - br.d / k) / (n + k - 1.0);
            worst30 = std::max(worst30, dev(lhs, rhs));
        }
        {
            // corrected low-index identity: the e^{(-1)} coefficient is -(2b+d)
            const Seq lhs = apply_Lprime(e_seq(-2, 3, last + 1), br);
            Seq rhs = Seq::zeros(3, last);
            for (int n = 3; n <= last; ++n)
                rhs.at(n) = -(2.0 * br.b + br.d) / (n - 1.0) + br.b / (n + 1.0) +
                            (br.b + br.c + br.d) / (n - 2.0) +
                            (n == 3 ? br.c + br.d / 2.0 : 0.0);
            worst31 = std::max(worst31, dev(lhs, rhs));
        }
    }
    add(r, "c3/identity_generic_L", "operator image of 1/(n+k) sequences", worst28, 0.0, 1e-12,
        sw.seconds(), "three randomized rate triples, n<=200");
    add(r, "c3/identity_boundary_L", "operator image of 1/(n-1) with point mass", worst29, 0.0,
        1e-12, sw.seconds());
    add(r, "c3/identity_generic_Lprime", "second operator image of 1/(n+k)", worst30, 0.0,
        1e-12, sw.seconds());
    add(r, "c3/identity_boundary_Lprime", "second operator image of 1/(n-2) with point mass",
        worst31, 0.0, 1e-12, sw.seconds());
    return r;
}

// C4: recursion-limit identities of the defence and isolation tables
ValidationReport criterion4(int k_max) {
    ValidationReport r;
    for (double theta : {0.5, 1.0, 2.0, 5.0}) {
        Stopwatch sw;
        const PhiTable phi = phi_sequence(theta, 1.0, k_max);
        add(r, "c4/phi_sum_identity_theta=" + fmt_g(theta),
            "defence recursion: 3c - bS = c Phi_inf",
            std::fabs(3.0 - theta * phi.S - phi.Phi_inf), 0.0, 1e-6, sw.seconds(),
            "k_max=" + std::to_string(k_max));
        Stopwatch sw2;
        const PsiTable psi = psi_sequence(theta, 1.0, k_max);
        add(r, "c4/psi_sum_identity_a_theta=" + fmt_g(theta),
            "isolation recursion: Sigma + 2 theta S = 5",
            std::fabs(psi.Sigma + 2.0 * theta * psi.S - 5.0), 0.0, 1e-6, sw2.seconds());
        add(r, "c4/psi_sum_identity_b_theta=" + fmt_g(theta),
            "isolation recursion: Psi_inf + (theta-3) Sigma = 5",
            std::fabs(psi.Psi_inf + (theta - 3.0) * psi.Sigma - 5.0), 0.0, 1e-6,
            sw2.seconds());
    }
    return r;
}

// C6: genealogical probabilities, exact route against labeled simulation
ValidationReport criterion6(uint64_t seed, int jobs) {
    ValidationReport r;
    Stopwatch sw;
    const BaseRates base{1.0, 1.0, 0.0};
    const int n_max = 30;
    const GenealogyEstimate h = q_genealogy_harmonic(base, n_max);
    const GenealogyEstimate mc = q_genealogy_mc(base, n_max, 100000, seed, jobs);
    double worst_z2 = 0.0, worst_z3 = 0.0;
    for (int n = 3; n <= n_max; ++n) {
        worst_z2 = std::max(worst_z2, std::fabs(h.q2_at(n) - mc.q2_at(n)) /
                                          std::max(mc.q2_err[static_cast<std::size_t>(n)], 1e-9));
        if (n >= 4)
            worst_z3 =
                std::max(worst_z3, std::fabs(h.q3_at(n) - mc.q3_at(n)) /
                                       std::max(mc.q3_err[static_cast<std::size_t>(n)], 1e-9));
    }
    add(r, "c6/q2_exact_vs_mc", "pair-distinctness probabilities, two routes", worst_z2, 0.0,
        3.0, sw.seconds(), "max |z| over n in 3..30, 1e5 replicates");
    add(r, "c6/q3_exact_vs_mc", "triple-distinctness probabilities, two routes", worst_z3, 0.0,
        3.0, sw.seconds());
    add_flag(r, "c6/defining_values", "distinctness at the defining sizes equals one",
             h.q2_at(2) == 1.0 && h.q3_at(3) == 1.0 && mc.q2_at(2) == 1.0 &&
                 mc.q3_at(3) == 1.0,
             h.q2_at(2), sw.seconds());
    Stopwatch sw2;
    const GenealogyEstimate plateau = q_genealogy_harmonic(base, 200);
    const double late = std::fabs(plateau.q2_at(200) - plateau.q2_at(100));
    const double early = std::fabs(plateau.q2_at(20) - plateau.q2_at(10));
    add_flag(r, "c6/q2_nonzero_plateau", "pair distinctness has a nonzero limit",
             plateau.q2_at(200) > 0.1 && late < 0.25 * early, plateau.q2_at(200),
             sw2.seconds(),
             "late increment " + std::to_string(late) + " vs early " + std::to_string(early));
    return r;
}

// C7: adaptive slopes
ValidationReport criterion7(int k_max) {
    ValidationReport r;
    Stopwatch sw;
    add(r, "c7/a_lambda_value", "fertility slope at theta = 1", a_lambda_closed(1.0, 1.0),
        (2.0 * std::exp(1.0) - 5.0) / 2.0, 1e-12, sw.seconds());
    double worst_series = 0.0;
    for (double theta : {0.5, 1.0, 2.0, 5.0})
        worst_series = std::max(worst_series, std::fabs(a_lambda_closed(theta, theta) -
                                                        a_lambda_series(theta, 1.0)));
    add(r, "c7/a_lambda_series", "fertility slope: closed form equals series", worst_series,
        0.0, 1e-8, sw.seconds());
    Stopwatch sw2;
    double worst_delta = 0.0;
    for (double theta : {0.5, 1.0, 2.0}) {
        const InvasibilityDeps deps = make_invasibility_deps(BaseRates{theta, 1.0, 0.0}, 64,
                                                             k_max);
        worst_delta = std::max(worst_delta, std::fabs(a_delta_series_route(deps) -
                                                      a_delta_integral_route(deps)));
    }
    add(r, "c7/a_delta_two_routes", "defence slope: series route equals quadrature route",
        worst_delta, 0.0, 1e-6, sw2.seconds());
    Stopwatch sw3;
    double worst_ode = 0.0;
    for (double theta : {0.5, 1.0, 2.0}) {
        const PhiTable phi = phi_sequence(theta, 1.0, k_max);
        std::vector<double> grid;
        for (int i = 0; i <= 90; ++i) grid.push_back(0.01 * i);
        worst_ode = std::max(worst_ode, pi_ode_residual_max(phi, theta, grid));
    }
    add(r, "c7/pi_ode_residual", "generating function of the defence table solves its ode",
        worst_ode, 0.0, 1e-6, sw3.seconds(), "grid [0, 0.9]");
    return r;
}

// C8: coefficient identity and the closed-form fitness gradient
ValidationReport criterion8(const ExperimentConfig& cfg) {
    ValidationReport r;
    Stopwatch sw;
    const Model& model = cfg.model;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        Trait x = cfg.initial_trait();
        x[0] += -0.5 + 1.0 * i / 49.0;
        const double theta = model.theta(x);
        const double lhs = mutant_production_rate(model.mu(x), model.b(x), theta) *
                           (std::exp(-theta) - 1.0 + theta) / (theta * theta);
        const double rhs =
            model.mu(x) * model.c(x, x) * (zero_truncated_poisson_mean(theta) - 1.0);
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    add(r, "c8/beta_chi_identity", "jump intensity product identity", worst, 0.0, 1e-10,
        sw.seconds(), "50-point trait grid");

    Stopwatch sw2;
    // two-term landscape: affine birth and competition with nonzero diagonal
    // gradients, so every slope term is exercised
    Model two;
    two.dim = 1;
    two.birth.intercept = 1.0;
    two.birth.slope = Eigen::VectorXd::Constant(1, 0.1);
    two.competition.kind = CompetitionFamily::Kind::log_affine;
    two.competition.c0 = 1.0;
    two.competition.g1 = Eigen::VectorXd::Constant(1, 0.15);
    two.competition.g2 = Eigen::VectorXd::Constant(1, -0.1);
    two.kernel.sd = Eigen::VectorXd::Constant(1, 0.1);
    two.kernel.mean = Eigen::VectorXd::Zero(1);
    double worst_rel = 0.0;
    for (double x0 : {-0.2, 0.0, 0.3}) {
        const Trait x = two.trait(x0);
        const InvasibilityDeps deps = make_invasibility_deps(
            BaseRates{two.theta(x), 1.0, 0.0}, 64, cfg.solver.k_max);
        AdaptiveSlopes slopes = adaptive_slopes(deps);
        const double c_here = two.c(x, x);
        slopes.a_lambda /= c_here;
        slopes.a_alpha /= c_here;
        slopes.a_delta /= c_here;
        const Eigen::VectorXd closed = grad2_chi_closed(two.grad_b(x), two.grad1_c(x),
                                                        two.grad2_c(x), slopes, two.theta(x));
        Trait dir(1);
        dir[0] = 1.0;
        const FdGradient fd = chi_gradient_fd(two, x, dir, 1e-4, SolverOptions{});
        worst_rel = std::max(worst_rel, std::fabs(closed[0] - fd.value) /
                                            std::max(std::fabs(fd.value), 1e-12));
    }
    add(r, "c8/grad2_chi_closed_vs_fd", "fitness gradient decomposition into adaptive slopes",
        worst_rel, 0.0, 0.01, sw2.seconds(), "two-term landscape, three trait points");
    return r;
}

// C11: stationary size law of the microscopic simulator
ValidationReport criterion11(const ExperimentConfig& cfg) {
    ValidationReport r;
    Stopwatch sw;
    const Model& model = cfg.model;
    const Trait x0 = cfg.initial_trait();
    GillespieOptions opt;
    opt.gamma = 0.0;
    opt.record_events = false;
    opt.sample_dt = 5.0;
    opt.sample_start = 50.0;
    opt.horizon = 50.0 + 5.0 * 100000.0;
    Rng rng(cfg.run.seed, 77);
    const GillespieResult res = gillespie_run(model, {x0}, {2}, opt, rng);
    const DiscreteLaw law = stationary_law(model.theta(x0), 1e-12);
    std::vector<long> counts(static_cast<std::size_t>(law.max_size()), 0);
    long total = 0;
    for (const auto& s : res.size_samples) {
        if (s.size <= law.max_size()) ++counts[static_cast<std::size_t>(s.size - 1)];
        ++total;
    }
    const Chi2Result gof = chi2_gof(counts, law.p, total);
    add_flag(r, "c11/stationary_size_law", "conditional size law is zero-truncated poisson",
             gof.p_value > 0.01, gof.p_value, sw.seconds(),
             "chi-square p with " + std::to_string(total) + " samples, stat=" +
                 std::to_string(gof.statistic));
    return r;
}

// C12: scaling properties
ValidationReport criterion12(const ExperimentConfig& cfg, int jobs) {
    ValidationReport r;
    Stopwatch sw;
    const TwoTypeParams neutral = TwoTypeParams::neutral(1.0, 1.0);
    std::vector<double> ratios;
    for (int size = 10; size <= 200; size += 10) {
        const long reps = 2000;
        std::vector<long> jumps(static_cast<std::size_t>(reps));
        parallel_for(static_cast<std::size_t>(reps), jobs, [&](std::size_t rep) {
            Rng rng(cfg.run.seed ^ (static_cast<uint64_t>(size) << 32), rep);
            jumps[rep] = two_type_run(size / 2, size - size / 2, neutral, rng).jump_count;
        });
        MeanVar mv;
        for (long j : jumps) mv.add(static_cast<double>(j));
        ratios.push_back(mv.mean / size);
    }
    const double first = ratios.front();
    double worst = 0.0;
    for (double v : ratios) worst = std::max(worst, v);
    add_flag(r, "c12/jump_count_linear_bound", "embedded-chain absorption time grows linearly",
             worst <= 1.10 * first, worst / first, sw.seconds(),
             "max ratio over n+m in 10..200 relative to the smallest size");

    Stopwatch sw2;
    const InvasibilityDeps deps = make_invasibility_deps(BaseRates{1.0, 1.0, 0.0}, 64);
    double max_after_knee = 0.0, at_knee = 0.0;
    bool monotone = true;
    for (const Iota iota : {Iota::lambda, Iota::delta, Iota::alpha, Iota::epsilon, Iota::sigma}) {
        double prev = 1e300;
        for (int s = 20; s <= 60; ++s) {
            double peak = 0.0;
            for (int n = 1; n <= s - 1; ++n)
                peak = std::max(peak,
                                std::fabs(selection_gradient_v(iota, n, s - n, deps)) / s);
            if (s == 20) at_knee = std::max(at_knee, peak);
            if (peak > prev * 1.0000001) monotone = false;
            prev = peak;
            max_after_knee = std::max(max_after_knee, peak);
        }
    }
    add_flag(r, "c12/gradient_sublinearity", "selection gradient grows sublinearly in size",
             monotone && max_after_knee <= at_knee + 1e-12, max_after_knee, sw2.seconds(),
             "max |v|/(n+m) non-increasing for n+m in 20..60");
    return r;
}

}  // namespace

ValidationReport validate_criteria(const ExperimentConfig& cfg, int jobs, int criterion) {
    ValidationReport report;
    const auto want = [criterion](int c) { return criterion == 0 || criterion == c; };
    if (want(1)) report.append(criterion1());
    if (want(2)) report.append(criterion2());
    if (want(3)) report.append(criterion3());
    if (want(4)) report.append(criterion4(cfg.solver.k_max));
    if (want(5)) report.append(experiment_theorem51(cfg, jobs));
    if (want(6)) report.append(criterion6(cfg.run.seed, jobs));
    if (want(7)) report.append(criterion7(cfg.solver.k_max));
    if (want(8)) report.append(criterion8(cfg));
    if (want(9)) report.append(experiment_rare_mutation(cfg, jobs));
    if (want(10)) report.append(experiment_small_steps(cfg, jobs));
    if (want(11)) report.append(criterion11(cfg));
    if (want(12)) report.append(criterion12(cfg, jobs));
    return report;
}

}  // namespace evoscale
