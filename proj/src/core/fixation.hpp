#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <vector>

#include "model.hpp"
#include "two_type.hpp"

namespace evoscale {

// Triangular grid {(n,m): n,m >= 0, n+m <= n_max}, enumerated by diagonal
// s = n+m and then by n. Interior states are those with n,m >= 1.
struct TriGrid {
    int n_max = 0;
    static long size_full(int n_max) {
        return static_cast<long>(n_max + 1) * (n_max + 2) / 2;
    }
    long full_index(int n, int m) const {
        const int s = n + m;
        return static_cast<long>(s) * (s + 1) / 2 + n;
    }
    long interior_index(int n, int m) const {
        // diagonals s = 2..n_max, n = 1..s-1
        const int s = n + m;
        return static_cast<long>(s - 1) * (s - 2) / 2 + (n - 1);
    }
    long interior_count() const { return static_cast<long>(n_max) * (n_max - 1) / 2; }
};

struct FixationProblem {
    TwoTypeParams params;
    int n_max = 0;           // 0: derived from requested_total and theta
    int requested_total = 20;  // largest n+m the caller needs accurately
    bool sensitivity_check = true;
    double residual_tol = 1e-10;

    // default truncation: 8 * max(theta, requested n+m, 20)
    static int auto_n_max(double theta, int requested_total);
    int effective_n_max() const;
};

// One equation per interior state; boundary values (0 on the resident axis,
// 1 on the mutant axis) are folded into the right-hand side, and birth terms
// are dropped at n+m = n_max with the diagonal reduced to match (reflecting
// truncation; rows keep zero sum against the absorbed mass).
struct AssembledSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    TriGrid grid;
};

AssembledSystem assemble_system(const FixationProblem& problem);

struct FixationTable {
    TriGrid grid;
    std::vector<double> u;  // full triangular array incl. boundaries
    TwoTypeParams params;
    double residual = 0.0;                 // max |Delta u| / r over interior states
    double truncation_sensitivity = -1.0;  // max change on the requested sub-grid at 2 n_max
    int requested_total = 0;

    double operator()(int n, int m) const { return u[grid.full_index(n, m)]; }
    // u_{n,1} for n = 1..count
    std::vector<double> mutant_column(int count) const;
    void write_csv(std::ostream& os) const;
};

FixationTable solve_fixation(const FixationProblem& problem, double tol = 1e-10);

// Size-biased mixture of u_{n,1} over the stationary law (constant-b weights).
// Throws if the column is too short to cover the requested tail tolerance.
double invasion_fitness(double resident_theta, const std::vector<double>& u_column,
                        double tail_tol);

// General-weights variant (state-dependent birth b(n)).
double invasion_fitness(const std::function<double(long)>& birth_of_n, double resident_theta,
                        const std::vector<double>& u_column, double tail_tol);

struct SolverOptions {
    double tail_tol = 1e-12;
    double residual_tol = 1e-10;
    int n_max = 0;  // 0: auto
};

// Two-type params for a resident at x and a mutant at y under the model's
// landscape (d = natural_death for both types).
TwoTypeParams params_from_traits(const Model& model, const Trait& x, const Trait& y);

// truncation for a u_{n,1} column evaluation; much tighter than the full-table
// default because the entry states sit far below the wall
int chi_auto_n_max(double theta, int column_length);

// chi(x, y): probability that a single y-mutant entering a stationary x
// population fixes, evaluated through the truncated harmonic system.
double chi_solver(const Model& model, const Trait& x, const Trait& y, const SolverOptions& opt);

struct FdGradient {
    double value = 0.0;       // central difference at step h
    double halved = 0.0;      // same at step h/2 (Richardson companion)
    double step = 0.0;
    double richardson_gap() const { return halved - value; }
};

// Directional derivative of y -> chi(x, y) at y = x along dir, resident side
// held fixed. rel_step is scaled by max(1, |x|_inf).
FdGradient chi_gradient_fd(const Model& model, const Trait& x, const Trait& dir,
                           double rel_step, const SolverOptions& opt);

}  // namespace evoscale
