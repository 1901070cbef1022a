#include "sequences.hpp"

#include <cmath>
#include <stdexcept>

#include "special.hpp"

namespace evoscale {

Seq apply_L(const Seq& w, const BaseRates& r) {
    if (w.first != 2) throw std::invalid_argument("apply_L: sequence must start at n = 2");
    if (w.last() < 3) throw std::invalid_argument("apply_L: sequence too short");
    Seq out = Seq::zeros(2, w.last() - 1);
    for (int n = 2; n <= out.last(); ++n) {
        const double up = -r.b * (n + 2.0) / (n + 1.0) * w.at(n + 1);
        const double mid = (r.b + r.c * (n - 1.0) + r.d) * w.at(n);
        const double down =
            n == 2 ? 0.0 : -(n - 2.0) * (r.c + r.d / (n - 1.0)) * w.at(n - 1);
        out.at(n) = up + mid + down;
    }
    return out;
}

Seq apply_Lprime(const Seq& w, const BaseRates& r) {
    if (w.first != 3) throw std::invalid_argument("apply_Lprime: sequence must start at n = 3");
    if (w.last() < 4) throw std::invalid_argument("apply_Lprime: sequence too short");
    Seq out = Seq::zeros(3, w.last() - 1);
    for (int n = 3; n <= out.last(); ++n) {
        const double up = -r.b * (n + 3.0) / (n + 1.0) * w.at(n + 1);
        const double mid = (r.b + r.c * (n - 1.0) + r.d) * w.at(n);
        const double down =
            n == 3 ? 0.0 : -(n - 3.0) * (r.c + r.d / (n - 1.0)) * w.at(n - 1);
        out.at(n) = up + mid + down;
    }
    return out;
}

Seq e_seq(int k, int first, int last) {
    if (first + k < 1) throw std::invalid_argument("e_seq: index underflow");
    Seq s = Seq::zeros(first, last);
    for (int n = first; n <= last; ++n) s.at(n) = 1.0 / (n + k);
    return s;
}

Seq dirac_seq(int at, int first, int last) {
    Seq s = Seq::zeros(first, last);
    if (at >= first && at <= last) s.at(at) = 1.0;
    return s;
}

namespace {

// quadratic extrapolation in 1/n through three (n, x) nodes, value at 1/n = 0
double richardson3(double n1, long double x1, double n2, long double x2, double n3,
                   long double x3) {
    const long double h1 = 1.0L / n1, h2 = 1.0L / n2, h3 = 1.0L / n3;
    const long double l1 = (h2 * h3) / ((h1 - h2) * (h1 - h3));
    const long double l2 = (h1 * h3) / ((h2 - h1) * (h2 - h3));
    const long double l3 = (h1 * h2) / ((h3 - h1) * (h3 - h2));
    return static_cast<double>(l1 * x1 + l2 * x2 + l3 * x3);
}

// sum_{k>n} k^{-4}
double tail_inv_quart(double n) {
    double x = n + 1.0;
    double result = 0.0;
    while (x < 10.0) {
        result += 1.0 / (x * x * x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv3 = inv * inv * inv;
    result += inv3 * (1.0 / 3.0 + 0.5 * inv + inv * inv / 3.0);
    return result;
}

// dilogarithm on [0,1)
double li2(double x) {
    if (x < 0.0 || x >= 1.0) throw std::domain_error("li2: x must be in [0,1)");
    if (x > 0.5) {
        const double pi2_6 = 1.6449340668482264365;
        return pi2_6 - std::log(x) * std::log1p(-x) - li2(1.0 - x);
    }
    double sum = 0.0;
    double pw = x;
    for (int k = 1; k < 200; ++k) {
        const double term = pw / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18) break;
        pw *= x;
    }
    return sum;
}

}  // namespace

PhiTable phi_sequence(double theta, double c, int k_max) {
    if (theta <= 0.0 || c <= 0.0) throw std::invalid_argument("phi_sequence: need theta, c > 0");
    if (k_max < 100) throw std::invalid_argument("phi_sequence: k_max must be >= 100");
    PhiTable t;
    t.theta = theta;
    t.c = c;
    t.k_max = k_max;

    std::vector<long double> Phi(static_cast<std::size_t>(k_max) + 1, 0.0L);
    Phi[2] = 1.0L;
    long double S = Phi[2] / 2.0L;
    const long double th = theta;
    long double x_q = 0.0L, x_h = 0.0L;
    for (int n = 2; n < k_max; ++n) {
        // (n+2) Phi_{n+1} = (n+1-theta) Phi_n + theta (n-2)/(n-1) Phi_{n-1}
        Phi[static_cast<std::size_t>(n) + 1] =
            ((n + 1.0L - th) * Phi[n] + th * (n - 2.0L) / (n - 1.0L) * Phi[n - 1]) / (n + 2.0L);
        const int np = n + 1;
        S += Phi[np] / np;
        if (np > k_max / 2 && Phi[np] * Phi[np - 1] < 0.0L)
            throw std::runtime_error("phi_sequence: sign oscillation past k_max/2");
        if (np == k_max / 4) x_q = static_cast<long double>(np) * Phi[np];
        if (np == k_max / 2) x_h = static_cast<long double>(np) * Phi[np];
    }
    const long double x_K =
        static_cast<long double>(k_max) * Phi[static_cast<std::size_t>(k_max)];
    t.Phi_inf = richardson3(k_max / 4, x_q, k_max / 2, x_h, k_max, x_K);
    if (t.Phi_inf == 0.0) throw std::runtime_error("phi_sequence: vanishing limit");
    t.tail_a = static_cast<double>((x_K - static_cast<long double>(t.Phi_inf)) * k_max);
    // S tail from Phi_n ~ Phi_inf/n + tail_a/n^2
    t.S = static_cast<double>(S) + t.Phi_inf * tail_inv_square(k_max) +
          t.tail_a * tail_inv_cube(k_max);

    t.phi.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
    t.phi[1] = 1.0 / (2.0 * c);
    const long double scale = 1.0L / (static_cast<long double>(c) * t.Phi_inf);
    for (int k = 2; k <= k_max; ++k)
        t.phi[static_cast<std::size_t>(k)] = static_cast<double>(Phi[k] * scale);
    return t;
}

double PhiTable::phi_at(long k) const {
    if (k >= 1 && k <= k_max) return phi[static_cast<std::size_t>(k)];
    const double kk = static_cast<double>(k);
    return (Phi_inf + tail_a / kk) / (kk * c * Phi_inf);
}

PsiTable psi_sequence(double theta, double c, int k_max) {
    if (theta <= 0.0 || c <= 0.0) throw std::invalid_argument("psi_sequence: need theta, c > 0");
    if (k_max < 100) throw std::invalid_argument("psi_sequence: k_max must be >= 100");
    PsiTable t;
    t.theta = theta;
    t.c = c;
    t.k_max = k_max;

    std::vector<long double> Psi(static_cast<std::size_t>(k_max) + 1, 0.0L);
    Psi[3] = 1.0L;
    long double S = Psi[3] / 3.0L;
    long double Sigma = Psi[3];
    const long double th = theta;
    long double x_q = 0.0L, x_h = 0.0L;
    for (int n = 3; n < k_max; ++n) {
        // (n+3) Psi_{n+1} = (n+1-theta) Psi_n + theta (n-3)/(n-1) Psi_{n-1}
        Psi[static_cast<std::size_t>(n) + 1] =
            ((n + 1.0L - th) * Psi[n] + th * (n - 3.0L) / (n - 1.0L) * Psi[n - 1]) / (n + 3.0L);
        const int np = n + 1;
        S += Psi[np] / np;
        Sigma += Psi[np];
        if (np > k_max / 2 && Psi[np] * Psi[np - 1] < 0.0L)
            throw std::runtime_error("psi_sequence: sign oscillation past k_max/2");
        if (np == k_max / 4) x_q = static_cast<long double>(np) * np * Psi[np];
        if (np == k_max / 2) x_h = static_cast<long double>(np) * np * Psi[np];
    }
    const long double x_K =
        static_cast<long double>(k_max) * k_max * Psi[static_cast<std::size_t>(k_max)];
    t.Psi_inf = richardson3(k_max / 4, x_q, k_max / 2, x_h, k_max, x_K);
    if (t.Psi_inf == 0.0) throw std::runtime_error("psi_sequence: vanishing limit");
    t.tail_a = static_cast<double>((x_K - static_cast<long double>(t.Psi_inf)) * k_max);
    // Psi_n ~ Psi_inf/n^2 + tail_a/n^3
    t.S = static_cast<double>(S) + t.Psi_inf * tail_inv_cube(k_max) +
          t.tail_a * tail_inv_quart(k_max);
    t.Sigma = static_cast<double>(Sigma) + t.Psi_inf * tail_inv_square(k_max) +
              t.tail_a * tail_inv_cube(k_max);

    t.psi.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
    const long double scale = -1.0L / (static_cast<long double>(c) * t.Psi_inf);
    for (int k = 3; k <= k_max; ++k)
        t.psi[static_cast<std::size_t>(k)] = static_cast<double>(Psi[k] * scale);

    const double th3 = theta + 3.0;
    const double b = theta * c;
    t.psi_m2 = -1.0 / (b * th3);
    t.psi_m1 = (theta + 1.0) / (b * th3);
    t.psi_1 = 2.0 * theta / (3.0 * c * th3);
    t.psi_2 = t.Sigma / (c * t.Psi_inf) - (2.0 * theta + 3.0) / (3.0 * c * th3);
    return t;
}

double PsiTable::psi_at(long k) const {
    if (k >= 3 && k <= k_max) return psi[static_cast<std::size_t>(k)];
    const double kk = static_cast<double>(k);
    return -(Psi_inf + tail_a / kk) / (kk * kk * c * Psi_inf);
}

double slope_integral(int k, double theta) {
    return slope_integral_scaled(k, theta) * std::pow(theta, k + 2);
}

double slope_integral_scaled(int k, double theta) {
    if (k < 1 || theta <= 0.0) throw std::invalid_argument("slope_integral: bad arguments");
    // I_k / theta^{k+2} = sum_{m>=1} (m-1)^2 theta^{m-2} / (m! (m+k)); positive terms
    long double sum = 0.0L;
    long double pw = 1.0L / theta;  // theta^{m-2} at m = 1
    long double mfact = 1.0L;
    for (int m = 1; m < 500; ++m) {
        mfact *= m;
        const long double term =
            static_cast<long double>(m - 1) * (m - 1) * pw / (mfact * (m + k));
        sum += term;
        pw *= theta;
        if (m > theta && term < sum * 1e-19L && m > 2) break;
    }
    return static_cast<double>(sum);
}

double slope_integral_closed(int k, double theta) {
    // e^t (t^{k+1} - (k+2) t^k + (k+1)^2 (k-1)! sum_{i=0}^{k-1} (-1)^i t^{k-i-1}/(k-i-1)!)
    //   - (-1)^{k-1} (k+1)^2 (k-1)! - t^k / k;  cancels badly for large k
    long double fact_km1 = 1.0L;
    for (int j = 2; j < k; ++j) fact_km1 *= j;
    const long double t = theta;
    long double alt = 0.0L;
    long double sign = 1.0L;
    for (int i = 0; i <= k - 1; ++i) {
        long double f = 1.0L;
        for (int j = 2; j <= k - i - 1; ++j) f *= j;
        alt += sign * std::pow(t, k - i - 1) / f;
        sign = -sign;
    }
    const long double kp1sq = static_cast<long double>(k + 1) * (k + 1);
    const long double inner =
        std::pow(t, k + 1) - (k + 2.0L) * std::pow(t, k) + kp1sq * fact_km1 * alt;
    const long double result = std::exp(t) * inner -
                               ((k - 1) % 2 == 0 ? 1.0L : -1.0L) * kp1sq * fact_km1 -
                               std::pow(t, k) / k;
    return static_cast<double>(result);
}

double pi_eval(const PhiTable& t, double v) {
    if (v < 0.0 || v >= 1.0) throw std::domain_error("pi_eval: v must be in [0,1)");
    if (v == 0.0) return t.phi[1];
    // sum_k phi_k v^{k-1} = -ln(1-v)/(c v) + sum_k (phi_k - 1/(ck)) v^{k-1};
    // the residual r_k decays like alpha/k^2 so its series is summable at v = 1
    const double log_part = -std::log1p(-v) / (t.c * v);
    long double rest = 0.0L;
    long double partial2 = 0.0L;  // sum_{k<=K} v^k / k^2
    long double vpow = 1.0L;
    long k = 1;
    for (; k <= t.k_max; ++k) {
        const long double rk = t.phi[static_cast<std::size_t>(k)] - 1.0 / (t.c * k);
        rest += rk * vpow;
        partial2 += vpow * v / (static_cast<long double>(k) * k);
        vpow *= v;
        if (vpow < 1e-22L) break;
    }
    double tail = 0.0;
    if (k > t.k_max) {
        // continue with r_k ~ alpha/k^2: sum_{k>K} v^{k-1}/k^2 = (Li2(v) - partial)/v
        const double alpha = t.tail_a / (t.c * t.Phi_inf);
        tail = alpha * (li2(v) - static_cast<double>(partial2)) / v;
    }
    return log_part + static_cast<double>(rest) + tail;
}

double pi_eval_d1(const PhiTable& t, double v) {
    long double sum = 0.0L;
    long double vpow = 1.0L;  // v^{k-2}
    for (long k = 2; k <= t.k_max; ++k) {
        sum += t.phi[static_cast<std::size_t>(k)] * (k - 1) * vpow;
        vpow *= v;
        if (vpow * static_cast<long double>(k) * k < 1e-22L) break;
    }
    return static_cast<double>(sum);
}

double pi_eval_d2(const PhiTable& t, double v) {
    long double sum = 0.0L;
    long double vpow = 1.0L;  // v^{k-3}
    for (long k = 3; k <= t.k_max; ++k) {
        sum += t.phi[static_cast<std::size_t>(k)] * (k - 1) * (k - 2) * vpow;
        vpow *= v;
        if (vpow * static_cast<long double>(k) * k * k < 1e-22L) break;
    }
    return static_cast<double>(sum);
}

}  // namespace evoscale
