#include "tss.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "interp.hpp"
#include "stationary.hpp"

namespace evoscale {

namespace {

std::string quantized_key(const Trait& x, const Trait& y) {
    // 1e-12 absolute quantum
    std::string key;
    key.reserve(static_cast<std::size_t>(x.size() + y.size()) * 20);
    char buf[32];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%lld,", static_cast<long long>(std::llround(x[i] * 1e12)));
        key += buf;
    }
    key += '|';
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%lld,", static_cast<long long>(std::llround(y[i] * 1e12)));
        key += buf;
    }
    return key;
}

}  // namespace

SolverChi::SolverChi(const Model& model, SolverOptions opt, Weights weights)
    : model_(model), opt_(opt), weights_(weights) {}

double SolverChi::chi(const Trait& x, const Trait& y) {
    const std::string key = quantized_key(x, y);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    {
        // one-time truncation probe: doubling the wall must not move chi
        std::lock_guard<std::mutex> lock(mutex_);
        if (!validated_) {
            validated_ = true;
            const double theta = model_.theta(x);
            const int cols =
                static_cast<int>(size_biased_weights(theta, opt_.tail_tol).size());
            SolverOptions tight = opt_;
            tight.n_max = opt_.n_max > 0 ? opt_.n_max : chi_auto_n_max(theta, cols);
            SolverOptions wide = tight;
            wide.n_max *= 2;
            const double a = chi_solver(model_, x, y, tight);
            const double b = chi_solver(model_, x, y, wide);
            if (std::fabs(a - b) > 1e-9)
                throw std::runtime_error("SolverChi: truncation probe failed");
        }
    }
    double value;
    if (weights_ == Weights::closed_form) {
        value = chi_solver(model_, x, y, opt_);
    } else {
        const double theta = model_.theta(x);
        const double bx = model_.b(x);
        const std::vector<double> w =
            size_biased_weights([bx](long) { return bx; }, theta, opt_.tail_tol);
        FixationProblem problem;
        problem.params = params_from_traits(model_, x, y);
        problem.requested_total = static_cast<int>(w.size()) + 1;
        problem.n_max = opt_.n_max > 0 ? opt_.n_max
                                       : chi_auto_n_max(theta, static_cast<int>(w.size()));
        problem.sensitivity_check = false;
        const FixationTable table = solve_fixation(problem, opt_.residual_tol);
        value = invasion_fitness([bx](long) { return bx; }, theta,
                                 table.mutant_column(static_cast<int>(w.size())), opt_.tail_tol);
    }
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(key, value);
    return value;
}

McChi::McChi(const Model& model, long replicates, uint64_t seed)
    : model_(model), replicates_(replicates), seed_(seed) {}

double McChi::chi(const Trait& x, const Trait& y) {
    const double theta = model_.theta(x);
    const DiscreteLaw law = stationary_law(theta, 1e-12);
    const std::vector<double> weights = size_biased_weights(theta, 1e-12);
    const TwoTypeParams params = params_from_traits(model_, x, y);
    Rng rng(seed_, counter_++);
    long fixed = 0;
    for (long r = 0; r < replicates_; ++r) {
        // entry size n from the size-biased law, then one mutant on top
        double u = rng.uniform();
        long n = static_cast<long>(weights.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) {
                n = static_cast<long>(i + 1);
                break;
            }
        }
        if (two_type_run(n, 1, params, rng).mutant_fixed) ++fixed;
    }
    return static_cast<double>(fixed) / static_cast<double>(replicates_);
}

GridChi::GridChi(SolverChi& exact, double x_lo, double x_hi, double y_lo, double y_hi,
                 int nodes, int probes, uint64_t seed)
    : exact_(exact), x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), nodes_(nodes) {
    if (nodes < 8) throw std::invalid_argument("GridChi: need at least 8 nodes");
    table_.resize(static_cast<std::size_t>(nodes) * nodes);
    Trait x(1), y(1);
    for (int i = 0; i < nodes; ++i) {
        x[0] = x_lo_ + (x_hi_ - x_lo_) * i / (nodes - 1.0);
        for (int j = 0; j < nodes; ++j) {
            y[0] = y_lo_ + (y_hi_ - y_lo_) * j / (nodes - 1.0);
            table_[static_cast<std::size_t>(i) * nodes + j] = exact_.chi(x, y);
        }
    }
    Rng rng(seed);
    for (int p = 0; p < probes; ++p) {
        x[0] = x_lo_ + (x_hi_ - x_lo_) * rng.uniform();
        y[0] = y_lo_ + (y_hi_ - y_lo_) * rng.uniform();
        probe_error_ =
            std::max(probe_error_, std::fabs(lookup(x[0], y[0]) - exact_.chi(x, y)));
    }
    if (probe_error_ > 1e-6)
        throw std::runtime_error("GridChi: probe validation failed (error above 1e-6)");
}

double GridChi::lookup(double x, double y) const {
    const double fx = (x - x_lo_) / (x_hi_ - x_lo_) * (nodes_ - 1.0);
    const double fy = (y - y_lo_) / (y_hi_ - y_lo_) * (nodes_ - 1.0);
    int ix = static_cast<int>(std::floor(fx));
    int iy = static_cast<int>(std::floor(fy));
    ix = std::min(std::max(ix, 1), nodes_ - 3);
    iy = std::min(std::max(iy, 1), nodes_ - 3);
    const double tx = fx - ix;
    const double ty = fy - iy;
    double rows[4];
    for (int r = -1; r <= 2; ++r) {
        const double* row = &table_[static_cast<std::size_t>(ix + r) * nodes_];
        rows[r + 1] = catmull_rom(row[iy - 1], row[iy], row[iy + 1], row[iy + 2], ty);
    }
    return catmull_rom(rows[0], rows[1], rows[2], rows[3], tx);
}

double GridChi::chi(const Trait& x, const Trait& y) {
    if (x.size() != 1 || y.size() != 1)
        throw std::invalid_argument("GridChi: 1-d traits only");
    if (x[0] < x_lo_ || x[0] > x_hi_ || y[0] < y_lo_ || y[0] > y_hi_)
        return exact_.chi(x, y);
    return lookup(x[0], y[0]);
}

double tss_beta(const Model& model, const Trait& x) {
    return mutant_production_rate(model.mu(x), model.b(x), model.theta(x));
}

TssPath simulate_tss(const Model& model, const Trait& x0, const TssOptions& options,
                     ChiProvider& provider, Rng& rng) {
    if (options.horizon <= 0.0) throw std::invalid_argument("simulate_tss: horizon must be > 0");
    if (options.epsilon <= 0.0) throw std::invalid_argument("simulate_tss: epsilon must be > 0");
    TssPath path;
    path.horizon = options.horizon;
    Trait x = x0;
    double t = 0.0;
    const double eps = options.epsilon;
    const bool embedded = options.construction == TssConstruction::embedded;
    long since_jump = 0;
    for (;;) {
        const double beta = tss_beta(model, x) / (eps * eps);
        if (beta <= 0.0) break;  // mu = 0: no proposals ever
        // thinning waits Exp(beta) directly; the embedded construction drives
        // the proposal chain with a unit-rate Poisson clock in transformed time
        const double wait = embedded ? rng.exponential(1.0) / beta : rng.exponential(beta);
        t += wait;
        if (t >= options.horizon) break;
        if (++path.total_proposals > options.max_proposals)
            throw std::runtime_error("simulate_tss: proposal cap exceeded");
        ++since_jump;
        path.proposal_times.push_back(t);
        const Trait h = model.kernel.sample(rng);
        const Trait y = x + eps * h;
        const double acceptance = provider.chi(x, y);
        if (rng.uniform() < acceptance) {
            path.jumps.push_back({t, x, y, since_jump});
            path.accepted_steps.push_back(h);
            x = y;
            since_jump = 0;
        }
    }
    path.final_state = x;
    return path;
}

double tss_jump_rate_density(const Model& model, const Trait& x, const Trait& h,
                             ChiProvider& provider) {
    const double density = model.kernel.density(h);
    if (density == 0.0) return 0.0;
    return tss_beta(model, x) * provider.chi(x, x + h) * density;
}

}  // namespace evoscale
