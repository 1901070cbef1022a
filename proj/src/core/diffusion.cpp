#include "diffusion.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <unordered_map>

#include "interp.hpp"
#include "invasibility.hpp"
#include "stationary.hpp"

namespace evoscale {

double beta_chi_checked(const Model& model, const Trait& x, double tol) {
    const double theta = model.theta(x);
    const double mu = model.mu(x);
    const double beta = mutant_production_rate(mu, model.b(x), theta);
    const double chi = (std::exp(-theta) - 1.0 + theta) / (theta * theta);
    const double product = beta * chi;
    const double alt = mu * model.c(x, x) * (zero_truncated_poisson_mean(theta) - 1.0);
    if (std::fabs(product - alt) > tol * std::max(1.0, std::fabs(alt)))
        throw std::runtime_error("beta_chi_checked: coefficient identity violated");
    return product;
}

namespace {

// per-theta cache of adaptive slopes; the genealogy and Phi tables only
// depend on theta (and scale in b, c), so landscapes reuse them heavily
class SlopeCache {
public:
    AdaptiveSlopes get(double b, double c) {
        const double theta = b / c;
        const long long key = std::llround(theta * 1e12);
        const auto it = cache_.find(key);
        if (it != cache_.end()) return rescale(it->second, c);
        const InvasibilityDeps deps = make_invasibility_deps(BaseRates{theta, 1.0, 0.0}, 64);
        const AdaptiveSlopes unit = adaptive_slopes(deps);  // at b = theta, c = 1
        cache_.emplace(key, unit);
        return rescale(unit, c);
    }

private:
    static AdaptiveSlopes rescale(const AdaptiveSlopes& unit, double c) {
        // a_iota carries one inverse rate unit: a(b, c) = a(theta, 1)/c
        AdaptiveSlopes s = unit;
        s.a_lambda /= c;
        s.a_alpha /= c;
        s.a_delta /= c;
        return s;
    }
    std::unordered_map<long long, AdaptiveSlopes> cache_;
};

}  // namespace

DiffusionCoefficients build_coefficients(const Model& model, SlopeSource source,
                                         const SolverOptions& opt, double grid_lo,
                                         double grid_hi, int grid_nodes) {
    DiffusionCoefficients coeffs;
    coeffs.dim = model.dim;

    const auto slope_cache = std::make_shared<SlopeCache>();
    const Model* m = &model;

    const auto grad2_chi = [m, slope_cache, source, opt](const Trait& x) -> Eigen::VectorXd {
        if (source == SlopeSource::closed_form) {
            if (m->natural_death != 0.0)
                throw std::invalid_argument("closed_form slopes require d = 0");
            const AdaptiveSlopes slopes = slope_cache->get(m->b(x), m->c(x, x));
            return grad2_chi_closed(m->grad_b(x), m->grad1_c(x), m->grad2_c(x), slopes,
                                    m->theta(x));
        }
        Eigen::VectorXd g(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            Eigen::VectorXd dir = Eigen::VectorXd::Zero(x.size());
            dir[i] = 1.0;
            g[i] = chi_gradient_fd(*m, x, dir, 1e-4, opt).value;
        }
        return g;
    };

    const auto drift_exact = [m, grad2_chi](const Trait& x) -> Eigen::VectorXd {
        const double beta = mutant_production_rate(m->mu(x), m->b(x), m->theta(x));
        if (beta == 0.0) return Eigen::VectorXd::Zero(x.size());
        return beta * (m->kernel.covariance() * grad2_chi(x));
    };
    const auto noise_exact = [m](const Trait& x) -> Eigen::MatrixXd {
        if (m->mu(x) == 0.0)
            return Eigen::MatrixXd::Zero(x.size(), x.size());
        return std::sqrt(beta_chi_checked(*m, x)) * m->kernel.sqrt_covariance();
    };

    if (model.dim == 1 && grid_nodes >= 8) {
        // tabulated scalar coefficients with probe validation
        auto drift_curve = std::make_shared<Curve1D>(
            [drift_exact](double x) {
                Trait t(1);
                t[0] = x;
                return drift_exact(t)[0];
            },
            grid_lo, grid_hi, grid_nodes, 16);
        auto noise_curve = std::make_shared<Curve1D>(
            [noise_exact](double x) {
                Trait t(1);
                t[0] = x;
                return noise_exact(t)(0, 0);
            },
            grid_lo, grid_hi, grid_nodes, 16);
        if (drift_curve->probe_error() > 1e-8 || noise_curve->probe_error() > 1e-8)
            throw std::runtime_error("build_coefficients: interpolation validation failed");
        coeffs.drift = [drift_curve](const Trait& x) {
            Eigen::VectorXd v(1);
            v[0] = (*drift_curve)(x[0]);
            return v;
        };
        coeffs.noise = [noise_curve](const Trait& x) {
            Eigen::MatrixXd n(1, 1);
            n(0, 0) = (*noise_curve)(x[0]);
            return n;
        };
    } else {
        coeffs.drift = drift_exact;
        coeffs.noise = noise_exact;
    }
    coeffs.beta_chi = [m](const Trait& x) {
        return m->mu(x) == 0.0 ? 0.0 : beta_chi_checked(*m, x);
    };
    coeffs.kernel_mean = [m](const Trait& x) -> Eigen::VectorXd {
        const double beta = mutant_production_rate(m->mu(x), m->b(x), m->theta(x));
        if (beta == 0.0 || m->kernel.mean.size() == 0)
            return Eigen::VectorXd::Zero(x.size());
        return m->kernel.mean;
    };
    return coeffs;
}

const Eigen::VectorXd& DiffusionPath::at_time(double t) const {
    const std::size_t idx = std::min(
        states.size() - 1, static_cast<std::size_t>(std::llround(t / dt)));
    return states[idx];
}

namespace {

void check_finite(const Eigen::VectorXd& z) {
    for (Eigen::Index i = 0; i < z.size(); ++i)
        if (!std::isfinite(z[i]) || std::fabs(z[i]) > 1e6)
            throw std::runtime_error("diffusion path blew up");
}

}  // namespace

DiffusionPath euler_maruyama(const DiffusionCoefficients& coeffs, const Trait& z0, double dt,
                             double horizon, Rng& rng) {
    if (dt <= 0.0 || horizon <= 0.0)
        throw std::invalid_argument("euler_maruyama: dt and horizon must be positive");
    DiffusionPath path;
    path.dt = dt;
    const long steps = static_cast<long>(std::ceil(horizon / dt));
    path.times.reserve(static_cast<std::size_t>(steps) + 1);
    path.states.reserve(static_cast<std::size_t>(steps) + 1);
    Eigen::VectorXd z = z0;
    path.times.push_back(0.0);
    path.states.push_back(z);
    const double sqdt = std::sqrt(dt);
    Eigen::VectorXd xi(z0.size());
    for (long s = 1; s <= steps; ++s) {
        for (Eigen::Index i = 0; i < xi.size(); ++i) xi[i] = rng.normal();
        z += coeffs.drift(z) * dt + coeffs.noise(z) * (sqdt * xi);
        check_finite(z);
        path.times.push_back(static_cast<double>(s) * dt);
        path.states.push_back(z);
    }
    return path;
}

DiffusionPath biased_ode(const DiffusionCoefficients& coeffs, const Trait& z0, double dt,
                         double horizon) {
    if (dt <= 0.0 || horizon <= 0.0)
        throw std::invalid_argument("biased_ode: dt and horizon must be positive");
    const auto f = [&coeffs](const Trait& z) -> Eigen::VectorXd {
        return coeffs.beta_chi(z) * coeffs.kernel_mean(z);
    };
    DiffusionPath path;
    path.dt = dt;
    const long steps = static_cast<long>(std::ceil(horizon / dt));
    Eigen::VectorXd z = z0;
    path.times.push_back(0.0);
    path.states.push_back(z);
    for (long s = 1; s <= steps; ++s) {
        const Eigen::VectorXd k1 = f(z);
        const Eigen::VectorXd k2 = f(z + 0.5 * dt * k1);
        const Eigen::VectorXd k3 = f(z + 0.5 * dt * k2);
        const Eigen::VectorXd k4 = f(z + dt * k3);
        z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_finite(z);
        path.times.push_back(static_cast<double>(s) * dt);
        path.states.push_back(z);
    }
    return path;
}

}  // namespace evoscale
