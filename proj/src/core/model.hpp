#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "rng.hpp"

namespace evoscale {

using Trait = Eigen::VectorXd;

// Birth-rate families over the trait space.
struct BirthFamily {
    enum class Kind { affine } kind = Kind::affine;
    double intercept = 1.0;
    Eigen::VectorXd slope;  // empty means constant

    double operator()(const Trait& x) const;
    Eigen::VectorXd gradient(const Trait& x) const;
};

// Competition kernels c(x, y) > 0 felt by x from y.
struct CompetitionFamily {
    enum class Kind {
        constant,      // c0
        gaussian_diff, // c0 * exp(-|x-y|^2 / (2 w^2)), symmetric, zero diagonal gradients
        log_affine     // c0 * exp(g1 . x + g2 . y), nonzero diagonal gradients
    } kind = Kind::constant;
    double c0 = 1.0;
    double width = 1.0;
    Eigen::VectorXd g1, g2;

    double operator()(const Trait& x, const Trait& y) const;
    Eigen::VectorXd grad1(const Trait& x, const Trait& y) const;
    Eigen::VectorXd grad2(const Trait& x, const Trait& y) const;
};

// Gaussian mutation step law: mean (usually zero) plus diagonal covariance
// sd_i^2. The symmetric square root is diag(sd).
struct GaussianKernel {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;

    Eigen::VectorXd sample(Rng& rng) const;
    double density(const Eigen::VectorXd& h) const;
    Eigen::MatrixXd covariance() const;
    Eigen::MatrixXd sqrt_covariance() const;
};

// The logistic landscape: trait-indexed birth b(x), competition c(x,y),
// mutation probability mu(x) and step law. Natural death is zero in every
// stationary-regime computation; a nonzero value is carried only for the
// two-type analytics that allow it.
class Model {
public:
    int dim = 1;
    BirthFamily birth;
    CompetitionFamily competition;
    double mu_const = 0.0;
    GaussianKernel kernel;
    double natural_death = 0.0;

    double b(const Trait& x) const;
    double c(const Trait& x, const Trait& y) const;
    double mu(const Trait&) const { return mu_const; }
    double theta(const Trait& x) const { return b(x) / c(x, x); }

    Eigen::VectorXd grad_b(const Trait& x) const { return birth.gradient(x); }
    Eigen::VectorXd grad1_c(const Trait& x) const { return competition.grad1(x, x); }
    Eigen::VectorXd grad2_c(const Trait& x) const { return competition.grad2(x, x); }

    Trait trait(double x0) const;          // convenience for 1-d landscapes
    Trait trait(std::initializer_list<double> v) const;
};

}  // namespace evoscale
