#include "invasibility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "special.hpp"

namespace evoscale {

const char* iota_name(Iota iota) {
    switch (iota) {
        case Iota::lambda: return "lambda";
        case Iota::delta: return "delta";
        case Iota::alpha: return "alpha";
        case Iota::epsilon: return "epsilon";
        case Iota::sigma: return "sigma";
    }
    return "?";
}

InvasibilityDeps make_invasibility_deps(const BaseRates& base, int genealogy_n_max, int k_max) {
    InvasibilityDeps deps;
    deps.base = base;
    deps.genealogy = q_genealogy_harmonic(base, genealogy_n_max);
    if (base.d == 0.0) {
        deps.phi = phi_sequence(base.theta(), base.c, k_max);
        deps.psi = psi_sequence(base.theta(), base.c, k_max);
        deps.tables_valid = true;
    }
    return deps;
}

namespace {

// sum_{k>K} n phi_k/(n+k) with phi_k ~ 1/(ck) + alpha/k^2
double g_delta_tail(const PhiTable& phi, long n, long K) {
    const double dn = static_cast<double>(n);
    const double dpsi = digamma(static_cast<double>(K) + 1.0 + dn) -
                        digamma(static_cast<double>(K) + 1.0);
    const double alpha = phi.tail_a / (phi.c * phi.Phi_inf);
    const double t2 = tail_inv_square(static_cast<double>(K));
    return dpsi / phi.c + alpha * (t2 - dpsi / dn);
}

double g_delta(const PhiTable& phi, long n) {
    long double sum = 0.0L;
    for (long k = 1; k <= phi.k_max; ++k)
        sum += static_cast<long double>(n) * phi.phi[static_cast<std::size_t>(k)] / (n + k);
    return static_cast<double>(sum) + g_delta_tail(phi, n, phi.k_max);
}

// sum_{k>K} n^2 psi_k/(n+k) with psi_k ~ -(1/(ck^2) + alpha/k^3)
double g_eps_tail(const PsiTable& psi, long n, long K) {
    const double dn = static_cast<double>(n);
    const double dK = static_cast<double>(K);
    const double dpsi = digamma(dK + 1.0 + dn) - digamma(dK + 1.0);
    const double t2 = tail_inv_square(dK);
    const double t3 = tail_inv_cube(dK);
    const double alpha = psi.tail_a / (psi.c * psi.Psi_inf);
    // sum 1/(k^2 (k+n)) = t2/n - dpsi/n^2 ; sum 1/(k^3(k+n)) = t3/n - t2/n^2 + dpsi/n^3
    const double s2 = t2 / dn - dpsi / (dn * dn);
    const double s3 = t3 / dn - t2 / (dn * dn) + dpsi / (dn * dn * dn);
    return -(dn * dn) * (s2 / psi.c + alpha * s3);
}

double g_epsilon(const PsiTable& psi, const GenealogyEstimate& gen, double theta, long n) {
    const double dn = static_cast<double>(n);
    long double sum = 0.0L;
    sum += dn * dn * psi.psi_m2 / (dn - 2.0);
    sum += dn * dn * psi.psi_m1 / (dn - 1.0);
    sum += dn * dn * psi.psi_1 / (dn + 1.0);
    sum += dn * dn * psi.psi_2 / (dn + 2.0);
    for (long k = 3; k <= psi.k_max; ++k)
        sum += dn * dn * psi.psi[static_cast<std::size_t>(k)] / (dn + k);
    const double genealogical = gen.q3_at(n) * dn * dn /
                                (gen.kappa_prime * theta * (theta + 3.0) * (dn - 1.0) *
                                 (dn - 2.0));
    return static_cast<double>(sum) + g_eps_tail(psi, n, psi.k_max) + genealogical;
}

}  // namespace

double invasibility_g(Iota iota, long n, const InvasibilityDeps& deps) {
    const double b = deps.base.b, c = deps.base.c, d = deps.base.d;
    const double dn = static_cast<double>(n);
    switch (iota) {
        case Iota::lambda: {
            if (n < 2) throw std::invalid_argument("invasibility_g: need n >= 2");
            if (n > deps.genealogy.n_max && d != 0.0)
                throw std::invalid_argument("invasibility_g: genealogy table too short");
            double g = dn / (2.0 * c * (dn + 1.0));
            if (d != 0.0) {
                const double q2 = deps.genealogy.q2_at(n);
                g += -d * dn / (2.0 * b * c * (dn - 1.0)) +
                     d * (c + d) / (2.0 * b * c * deps.genealogy.kappa) * dn * q2 / (dn - 1.0);
            }
            return g;
        }
        case Iota::alpha:
        case Iota::sigma: {
            if (n < 2) throw std::invalid_argument("invasibility_g: need n >= 2");
            if (n > deps.genealogy.n_max)
                throw std::invalid_argument("invasibility_g: genealogy table too short");
            const double q2 = deps.genealogy.q2_at(n);
            return (2.0 * c - d) * dn / (2.0 * b * c * (dn - 1.0)) -
                   (2.0 * c - d) * (c + d) / (2.0 * b * c * deps.genealogy.kappa) * dn * q2 /
                       (dn - 1.0) +
                   dn / (2.0 * c * (dn + 1.0));
        }
        case Iota::delta: {
            if (d != 0.0) throw std::invalid_argument("invasibility_g: delta requires d = 0");
            if (n < 2) throw std::invalid_argument("invasibility_g: need n >= 2");
            if (!deps.tables_valid) throw std::invalid_argument("invasibility_g: missing tables");
            return g_delta(deps.phi, n);
        }
        case Iota::epsilon: {
            if (d != 0.0) throw std::invalid_argument("invasibility_g: epsilon requires d = 0");
            if (n < 3) throw std::invalid_argument("invasibility_g: need n >= 3 for epsilon");
            if (!deps.tables_valid) throw std::invalid_argument("invasibility_g: missing tables");
            if (n > deps.genealogy.n_max)
                throw std::invalid_argument("invasibility_g: genealogy table too short");
            return g_epsilon(deps.psi, deps.genealogy, deps.base.theta(), n);
        }
    }
    throw std::logic_error("invasibility_g: unreachable");
}

double selection_gradient_v(Iota iota, long n, long m, const InvasibilityDeps& deps) {
    if (n < 0 || m < 0 || n + m < 2)
        throw std::invalid_argument("selection_gradient_v: need n+m >= 2");
    if (n == 0 || m == 0) return 0.0;  // p(1-p) vanishes on the axes
    const double p = static_cast<double>(m) / static_cast<double>(n + m);
    const double base_factor = p * (1.0 - p);
    if (iota == Iota::epsilon) {
        if (n == m) return 0.0;
        return base_factor * (1.0 - 2.0 * p) * invasibility_g(iota, n + m, deps);
    }
    return base_factor * invasibility_g(iota, n + m, deps);
}

Seq u_iota_seq(Iota iota, const InvasibilityDeps& deps, int last) {
    const double b = deps.base.b, c = deps.base.c, d = deps.base.d;
    switch (iota) {
        case Iota::lambda: {
            // u^lambda = -(d/2bc) e^{(-1)} + (d(c+d)/2bc) D^{(2)} + (1/2c) e^{(1)}
            Seq u = Seq::zeros(2, last);
            const Seq em1 = e_seq(-1, 2, last);
            const Seq e1 = e_seq(1, 2, last);
            const Seq d2 = deps.genealogy.d2_seq(last);
            for (int n = 2; n <= last; ++n)
                u.at(n) = -d / (2.0 * b * c) * em1.at(n) +
                          d * (c + d) / (2.0 * b * c) * d2.at(n) + e1.at(n) / (2.0 * c);
            return u;
        }
        case Iota::alpha:
        case Iota::sigma: {
            Seq u = Seq::zeros(2, last);
            const Seq em1 = e_seq(-1, 2, last);
            const Seq e1 = e_seq(1, 2, last);
            const Seq d2 = deps.genealogy.d2_seq(last);
            for (int n = 2; n <= last; ++n)
                u.at(n) = (2.0 * c - d) / (2.0 * b * c) * em1.at(n) -
                          (2.0 * c - d) * (c + d) / (2.0 * b * c) * d2.at(n) +
                          e1.at(n) / (2.0 * c);
            return u;
        }
        case Iota::delta: {
            if (!deps.tables_valid) throw std::invalid_argument("u_iota_seq: missing tables");
            Seq u = Seq::zeros(2, last);
            for (int n = 2; n <= last; ++n) u.at(n) = g_delta(deps.phi, n) / n;
            return u;
        }
        case Iota::epsilon: {
            if (!deps.tables_valid) throw std::invalid_argument("u_iota_seq: missing tables");
            Seq u = Seq::zeros(3, last);
            for (int n = 3; n <= last; ++n)
                u.at(n) =
                    g_epsilon(deps.psi, deps.genealogy, deps.base.theta(), n) / (static_cast<double>(n) * n);
            return u;
        }
    }
    throw std::logic_error("u_iota_seq: unreachable");
}

double a_lambda_closed(double theta, double b) {
    return (std::exp(theta) * (theta * theta - 3.0 * theta + 4.0) - theta - 4.0) /
           (2.0 * b * theta * theta);
}

double a_lambda_series(double theta, double c) {
    // sum_n n theta^{n-1} / (2c (n+2)(n+1)(n-1)!)
    long double sum = 0.0L;
    long double pw = 1.0L;     // theta^{n-1}
    long double fact = 1.0L;   // (n-1)!
    for (int n = 1; n < 400; ++n) {
        const long double term = n * pw / (2.0L * c * (n + 2.0L) * (n + 1.0L) * fact);
        sum += term;
        if (n > theta && term < sum * 1e-19L) break;
        pw *= theta;
        fact *= n;
    }
    return static_cast<double>(sum);
}

double a_alpha_closed(const InvasibilityDeps& deps) {
    const double theta = deps.base.theta();
    const double b = deps.base.b;
    const double closed =
        (std::exp(theta) * (theta * theta - theta + 2.0) - theta - 2.0) /
        (2.0 * b * theta * theta);
    // (1/(kappa theta)) sum_n n q^{(2)}_{n+1} theta^{n-1} / (n+1)!
    long double sum = 0.0L;
    long double pw = 1.0L;
    long double fact = 2.0L;  // (n+1)! at n = 1
    for (int n = 1; n + 1 <= deps.genealogy.n_max; ++n) {
        const long double term = n * deps.genealogy.q2_at(n + 1) * pw / fact;
        sum += term;
        pw *= theta;
        fact *= (n + 2);
        if (n > theta && n * pw / fact < 1e-18L) break;
    }
    return closed - static_cast<double>(sum) / (deps.genealogy.kappa * theta);
}

double a_delta_series_route(const InvasibilityDeps& deps) {
    if (!deps.tables_valid) throw std::invalid_argument("a_delta: requires d = 0 tables");
    const PhiTable& phi = deps.phi;
    const double theta = phi.theta;
    long double sum = 0.0L;
    double last_term = 0.0;
    const long K = phi.k_max;
    for (long k = 1; k <= K; ++k) {
        last_term = phi.phi[static_cast<std::size_t>(k)] * slope_integral_scaled(static_cast<int>(k), theta);
        sum += last_term;
    }
    // terms fall like alpha/k^2
    const double alpha = last_term * static_cast<double>(K) * static_cast<double>(K);
    return static_cast<double>(sum) + alpha * tail_inv_square(static_cast<double>(K));
}

namespace {

double gfun(double u) { return std::exp(u) * (u * u - u + 1.0) - 1.0; }

// adaptive Simpson on [a,b]
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) return left + right + delta / 15.0;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double a_delta_integral_route(const InvasibilityDeps& deps, double quad_tol) {
    if (!deps.tables_valid) throw std::invalid_argument("a_delta: requires d = 0 tables");
    const PhiTable& phi = deps.phi;
    const double theta = phi.theta;
    // (1/theta^3) int_0^theta g(u) pi(u/theta) du with u = theta(1 - e^{-w});
    // the log singularity of pi at u = theta becomes linear growth times e^{-w}
    const auto integrand = [&](double w) {
        const double v = -std::expm1(-w);  // 1 - e^{-w}
        if (v >= 1.0) return 0.0;
        const double u = theta * v;
        return gfun(u) * pi_eval(phi, v) * theta * std::exp(-w);
    };
    const double integral = adaptive_simpson(integrand, 0.0, 45.0, quad_tol);
    return integral / (theta * theta * theta);
}

AdaptiveSlopes adaptive_slopes(const InvasibilityDeps& deps) {
    if (deps.base.d != 0.0)
        throw std::invalid_argument("adaptive_slopes: requires d = 0");
    AdaptiveSlopes s;
    s.a_lambda = a_lambda_closed(deps.base.theta(), deps.base.b);
    s.a_alpha = a_alpha_closed(deps);
    s.a_delta = a_delta_integral_route(deps);
    return s;
}

Eigen::VectorXd grad2_chi_closed(const Eigen::VectorXd& grad_b,
                                 const Eigen::VectorXd& grad1_c,
                                 const Eigen::VectorXd& grad2_c, const AdaptiveSlopes& slopes,
                                 double theta) {
    return std::exp(-theta) *
           (slopes.a_lambda * grad_b - slopes.a_delta * grad1_c + slopes.a_alpha * grad2_c);
}

double pi_ode_residual_max(const PhiTable& phi, double b, const std::vector<double>& u_grid) {
    const double theta = phi.theta;
    double worst = 0.0;
    for (double u : u_grid) {
        if (u < 0.0 || u > 0.95)
            throw std::invalid_argument("pi_ode_residual_max: grid must lie in [0, 0.95]");
        const double p0 = pi_eval(phi, u);
        const double p1 = pi_eval_d1(phi, u);
        const double p2 = pi_eval_d2(phi, u);
        const double res = u * u * (1.0 - u) * p2 +
                           u * (theta * u * (1.0 - u) + 2.0 - 3.0 * u) * p1 - 2.0 * p0 +
                           theta / b;
        worst = std::max(worst, std::fabs(res));
    }
    return worst;
}

}  // namespace evoscale
