#pragma once

#include <functional>
#include <vector>

#include "fixation.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace evoscale {

// Drift beta(x) sigma^2(x) grad_2 chi(x,x) and noise sqrt(beta(x) chi(x,x)) sigma(x)
// of the trait diffusion.
struct DiffusionCoefficients {
    int dim = 1;
    std::function<Eigen::VectorXd(const Trait&)> drift;
    std::function<Eigen::MatrixXd(const Trait&)> noise;
    std::function<double(const Trait&)> beta_chi;              // checked product
    std::function<Eigen::VectorXd(const Trait&)> kernel_mean;  // for the biased-mutation ODE
};

enum class SlopeSource { closed_form, fd_on_solver };

// Assembles the coefficients from the landscape. closed_form uses the
// adaptive slopes (d = 0 logistic model); fd_on_solver differentiates the
// solver-evaluated fitness. For 1-d traits the per-x quantities are cached on
// a validated interpolation grid; other dimensions evaluate directly.
// beta(x) chi(x,x) is computed by two routes (mixture and
// mu c (theta/(1-e^-theta) - 1)) and must agree to 1e-10.
DiffusionCoefficients build_coefficients(const Model& model, SlopeSource source,
                                         const SolverOptions& opt = SolverOptions{},
                                         double grid_lo = -1.0, double grid_hi = 1.0,
                                         int grid_nodes = 0);

struct DiffusionPath {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    double dt = 0.0;

    const Eigen::VectorXd& at_time(double t) const;
};

// Euler-Maruyama with fixed step: Z += drift dt + noise sqrt(dt) xi.
// Aborts if a coordinate leaves [-1e6, 1e6].
DiffusionPath euler_maruyama(const DiffusionCoefficients& coeffs, const Trait& z0, double dt,
                             double horizon, Rng& rng);

// Classic fixed-step 4th-order integration of dz/dt = beta chi(z,z) * kernel mean.
DiffusionPath biased_ode(const DiffusionCoefficients& coeffs, const Trait& z0, double dt,
                         double horizon);

// beta(x) chi(x,x) with the built-in consistency check of the two closed forms
double beta_chi_checked(const Model& model, const Trait& x, double tol = 1e-10);

}  // namespace evoscale
