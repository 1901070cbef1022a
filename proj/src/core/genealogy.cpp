#include "genealogy.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace evoscale {

namespace {

// Solution of the neutral harmonic system with absorbing set {axes} U
// {n+m = k}; unknowns live on diagonals s = k+1 .. grid_n.
struct HarmonicSolution {
    int k = 2;
    int grid_n = 0;
    std::vector<double> w;

    long index(int n, int m) const {
        const int s = n + m;
        return static_cast<long>(s - 1) * (s - 2) / 2 -
               static_cast<long>(k) * (k - 1) / 2 + (n - 1);
    }
    double at(int n, int m) const { return w[static_cast<std::size_t>(index(n, m))]; }
};

HarmonicSolution solve_harmonic(const BaseRates& base, int k, int grid_n,
                                const std::function<double(int, int)>& target) {
    HarmonicSolution sol;
    sol.k = k;
    sol.grid_n = grid_n;
    const long count = sol.index(grid_n - 1, 1) + 1;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(count) * 5);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
    for (int s = k + 1; s <= grid_n; ++s) {
        for (int n = 1; n <= s - 1; ++n) {
            const int m = s - n;
            const long row = sol.index(n, m);
            const double birth1 = base.b * n;
            const double birth2 = base.b * m;
            const double per_cap_death = base.c * (s - 1.0) + base.d;
            const double death1 = n * per_cap_death;
            const double death2 = m * per_cap_death;
            double diag = death1 + death2;
            if (s < grid_n) {  // reflecting truncation
                diag += birth1 + birth2;
                trip.emplace_back(row, sol.index(n + 1, m), -birth1);
                trip.emplace_back(row, sol.index(n, m + 1), -birth2);
            }
            // deaths onto the axes carry value 0
            if (n > 1) {
                if (s - 1 == k)
                    rhs[row] += death1 * target(n - 1, m);
                else
                    trip.emplace_back(row, sol.index(n - 1, m), -death1);
            }
            if (m > 1) {
                if (s - 1 == k)
                    rhs[row] += death2 * target(n, m - 1);
                else
                    trip.emplace_back(row, sol.index(n, m - 1), -death2);
            }
            trip.emplace_back(row, row, diag);
        }
    }
    Eigen::SparseMatrix<double> A(count, count);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("q_genealogy: harmonic system factorization failed");
    const Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("q_genealogy: harmonic system solve failed");
    sol.w.assign(static_cast<std::size_t>(count), 0.0);
    for (long i = 0; i < count; ++i) sol.w[static_cast<std::size_t>(i)] = x[i];
    return sol;
}

}  // namespace

Seq GenealogyEstimate::d2_seq(int last) const {
    if (last > n_max) throw std::invalid_argument("d2_seq: beyond estimated range");
    Seq s = Seq::zeros(2, last);
    for (int n = 2; n <= last; ++n) s.at(n) = q2_at(n) / (kappa * (n - 1.0));
    return s;
}

Seq GenealogyEstimate::d3_seq(int last) const {
    if (last > n_max) throw std::invalid_argument("d3_seq: beyond estimated range");
    Seq s = Seq::zeros(3, last);
    for (int n = 3; n <= last; ++n)
        s.at(n) = q3_at(n) / (kappa_prime * (n - 1.0) * (n - 2.0));
    return s;
}

GenealogyEstimate q_genealogy_harmonic(const BaseRates& base, int n_max, int grid_n_max) {
    if (n_max < 4) throw std::invalid_argument("q_genealogy: n_max must be >= 4");
    // the size process drifts down at rate ~ c s^2; a modest reflecting margin
    // above the requested range is invisible from it (validated by doubling)
    const int margin = std::max(64, static_cast<int>(std::ceil(8.0 * base.theta())));
    const int grid_n = grid_n_max > 0 ? grid_n_max : n_max + margin;
    if (grid_n < n_max + 8) throw std::invalid_argument("q_genealogy: grid too small");

    GenealogyEstimate est;
    est.base = base;
    est.method = "harmonic";
    est.n_max = n_max;
    est.q2.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    est.q2_err.assign(est.q2.size(), 0.0);
    est.q3.assign(est.q2.size(), 0.0);
    est.q3_err.assign(est.q2.size(), 0.0);
    est.q2[2] = 1.0;
    est.q3[3] = 1.0;

    const HarmonicSolution w2 = solve_harmonic(
        base, 2, grid_n, [](int n, int m) { return (n == 1 && m == 1) ? 1.0 : 0.0; });
    double spread = 0.0;
    for (int s = 3; s <= n_max; ++s) {
        // w_{n,m} = 2 n m q_s / (s (s-1)): the same q from every (n,m)
        double lo = 2.0, hi = -1.0;
        for (int n = 1; n <= s - 1; ++n) {
            const int m = s - n;
            const double q = w2.at(n, m) * s * (s - 1.0) / (2.0 * n * m);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        const int nb = s / 2;
        est.q2[static_cast<std::size_t>(s)] =
            w2.at(nb, s - nb) * s * (s - 1.0) / (2.0 * nb * (s - nb));
        spread = std::max(spread, hi - lo);
    }

    const HarmonicSolution w3 = solve_harmonic(base, 3, grid_n, [](int n, int m) {
        if (n == 2 && m == 1) return 2.0;
        if (n == 1 && m == 2) return -2.0;
        return 0.0;
    });
    for (int s = 4; s <= n_max; ++s) {
        double lo = 2.0, hi = -1.0;
        for (int n = 1; n <= s - 1; ++n) {
            const int m = s - n;
            if (n == m) continue;
            const double q =
                w3.at(n, m) * s * (s - 1.0) * (s - 2.0) / (6.0 * n * m * (n - m));
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        int n_pick = s / 2;
        if (2 * n_pick == s) ++n_pick;
        const int m_pick = s - n_pick;
        est.q3[static_cast<std::size_t>(s)] =
            w3.at(n_pick, m_pick) * s * (s - 1.0) * (s - 2.0) /
            (6.0 * n_pick * m_pick * (n_pick - m_pick));
        spread = std::max(spread, hi - lo);
    }
    est.diagonal_spread = spread;
    est.kappa = base.b * (1.0 - 2.0 * est.q2[3] / 3.0) + base.c + base.d;
    est.kappa_prime = 0.5 * base.b * (1.0 - est.q3[4] / 2.0) + base.c + 0.5 * base.d;
    return est;
}

namespace {

// One labeled neutral trajectory from n distinct ancestors. Samples the
// distinctness of the survivors at the first passages through sizes 3 and 2.
void run_labeled(const BaseRates& base, int n, Rng& rng, bool& distinct3, bool& distinct2) {
    std::vector<long> counts(static_cast<std::size_t>(n), 1);
    long size = n;
    long nonzero = n;
    bool need3 = n > 3;
    bool need2 = true;
    distinct3 = (n == 3);
    distinct2 = false;
    while (need3 || need2) {
        const double p_birth = base.b / (base.b + base.c * (size - 1.0) + base.d);
        // individual chosen uniformly; find its label
        long pick = static_cast<long>(rng.below(static_cast<uint64_t>(size)));
        std::size_t label = 0;
        while (pick >= counts[label]) {
            pick -= counts[label];
            ++label;
        }
        if (rng.uniform() < p_birth) {
            ++counts[label];
            ++size;
        } else {
            if (counts[label] == 1) --nonzero;
            --counts[label];
            --size;
            if (size == 3 && need3) {
                distinct3 = (nonzero == 3);
                need3 = false;
            }
            if (size == 2 && need2) {
                distinct2 = (nonzero == 2);
                need2 = false;
            }
        }
    }
}

}  // namespace

GenealogyEstimate q_genealogy_mc(const BaseRates& base, int n_max, long replicates,
                                 uint64_t seed, int jobs) {
    if (n_max < 4) throw std::invalid_argument("q_genealogy_mc: n_max must be >= 4");
    if (replicates < 100) throw std::invalid_argument("q_genealogy_mc: too few replicates");
    GenealogyEstimate est;
    est.base = base;
    est.method = "monte_carlo";
    est.n_max = n_max;
    est.q2.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    est.q2_err.assign(est.q2.size(), 0.0);
    est.q3.assign(est.q2.size(), 0.0);
    est.q3_err.assign(est.q2.size(), 0.0);
    est.q2[2] = 1.0;
    est.q3[3] = 1.0;

    for (int n = 3; n <= n_max; ++n) {
        std::vector<unsigned char> d2(static_cast<std::size_t>(replicates));
        std::vector<unsigned char> d3(static_cast<std::size_t>(replicates));
        parallel_for(static_cast<std::size_t>(replicates), jobs, [&](std::size_t r) {
            Rng rng(seed ^ (static_cast<uint64_t>(n) * 0x9E3779B97F4A7C15ULL),
                    static_cast<uint64_t>(r));
            bool dist3 = false, dist2 = false;
            run_labeled(base, n, rng, dist3, dist2);
            d2[r] = dist2 ? 1 : 0;
            d3[r] = dist3 ? 1 : 0;
        });
        long hits2 = 0, hits3 = 0;
        for (long r = 0; r < replicates; ++r) {
            hits2 += d2[static_cast<std::size_t>(r)];
            hits3 += d3[static_cast<std::size_t>(r)];
        }
        const McEstimate e2 = binomial_estimate(hits2, replicates);
        est.q2[static_cast<std::size_t>(n)] = e2.estimate;
        est.q2_err[static_cast<std::size_t>(n)] = e2.stderr_est;
        if (n >= 4) {
            const McEstimate e3 = binomial_estimate(hits3, replicates);
            est.q3[static_cast<std::size_t>(n)] = e3.estimate;
            est.q3_err[static_cast<std::size_t>(n)] = e3.stderr_est;
        }
    }
    est.kappa = base.b * (1.0 - 2.0 * est.q2[3] / 3.0) + base.c + base.d;
    est.kappa_prime = 0.5 * base.b * (1.0 - est.q3[4] / 2.0) + base.c + 0.5 * base.d;
    return est;
}

}  // namespace evoscale
