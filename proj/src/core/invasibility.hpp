#pragma once

#include <Eigen/Dense>
#include <vector>

#include "genealogy.hpp"
#include "sequences.hpp"

namespace evoscale {

enum class Iota { lambda, delta, alpha, epsilon, sigma };

const char* iota_name(Iota iota);

// Everything the closed forms consume: genealogical probabilities with kappa
// and kappa', and the Phi/Psi tables (the latter two only defined for d = 0).
struct InvasibilityDeps {
    BaseRates base;
    GenealogyEstimate genealogy;
    PhiTable phi;  // valid when base.d == 0
    PsiTable psi;  // valid when base.d == 0
    bool tables_valid = false;
};

InvasibilityDeps make_invasibility_deps(const BaseRates& base, int genealogy_n_max = 64,
                                        int k_max = 10000);

// Invasibility coefficient g_n^iota of a pure resident population of size n.
// Requires n >= 2 (n >= 3 for epsilon); delta and epsilon require d = 0.
double invasibility_g(Iota iota, long n, const InvasibilityDeps& deps);

// Weak-selection gradient v^iota_{n,m}: p(1-p) g_{n+m} with p = m/(n+m), and
// the extra (1-2p) factor for epsilon.
double selection_gradient_v(Iota iota, long n, long m, const InvasibilityDeps& deps);

// u^iota sequences solving (L u)_n = rhs (Prop. 5.8/5.9/5.11/5.13), used by
// the operator-identity checks: g_n = n u_n (n^2 u_n for epsilon).
Seq u_iota_seq(Iota iota, const InvasibilityDeps& deps, int last);

struct AdaptiveSlopes {
    double a_lambda = 0.0;
    double a_alpha = 0.0;
    double a_delta = 0.0;
};

double a_lambda_closed(double theta, double b);
double a_lambda_series(double theta, double c);
double a_alpha_closed(const InvasibilityDeps& deps);
// the two evaluation routes for a_delta: partial-fraction series of the
// integrals, and direct quadrature of the generating function
double a_delta_series_route(const InvasibilityDeps& deps);
double a_delta_integral_route(const InvasibilityDeps& deps, double quad_tol = 1e-9);

AdaptiveSlopes adaptive_slopes(const InvasibilityDeps& deps);

// grad_2 chi(x,x) = e^{-theta} (a_lambda grad b - a_delta grad_1 c + a_alpha grad_2 c)
Eigen::VectorXd grad2_chi_closed(const Eigen::VectorXd& grad_b,
                                 const Eigen::VectorXd& grad1_c,
                                 const Eigen::VectorXd& grad2_c, const AdaptiveSlopes& slopes,
                                 double theta);

// Max residual of u^2(1-u) pi'' + u(theta u(1-u) + 2 - 3u) pi' - 2 pi + theta/b
// over the given grid in [0, 0.95].
double pi_ode_residual_max(const PhiTable& phi, double b, const std::vector<double>& u_grid);

}  // namespace evoscale
