#pragma once

#include <vector>

namespace evoscale {

// Resident rate constants (b, c, d) of the neutral chain.
struct BaseRates {
    double b = 1.0;
    double c = 1.0;
    double d = 0.0;
    double theta() const { return b / c; }
};

// Real sequence indexed from `first` (2 for L2, 3 for L3) to last().
struct Seq {
    int first = 2;
    std::vector<double> v;

    static Seq zeros(int first, int last) {
        Seq s;
        s.first = first;
        s.v.assign(static_cast<std::size_t>(last - first + 1), 0.0);
        return s;
    }
    double& at(int n) { return v[static_cast<std::size_t>(n - first)]; }
    double at(int n) const { return v[static_cast<std::size_t>(n - first)]; }
    int last() const { return first + static_cast<int>(v.size()) - 1; }
};

// (L w)_n = -b (n+2)/(n+1) w_{n+1} + [b + c(n-1) + d] w_n - (n-2)(c + d/(n-1)) w_{n-1},
// n >= 2; the w_1 coefficient vanishes at n = 2. Result covers n = 2..w.last()-1.
Seq apply_L(const Seq& w, const BaseRates& r);

// (L' w)_n with -b (n+3)/(n+1) w_{n+1} and -(n-3)(c + d/(n-1)) w_{n-1}, n >= 3.
Seq apply_Lprime(const Seq& w, const BaseRates& r);

// e^{(k)}_n = 1/(n+k); requires first + k >= 1.
Seq e_seq(int k, int first, int last);
// Dirac mass at position `at`.
Seq dirac_seq(int at, int first, int last);

// Recursion c(n+2) Phi_{n+1} + [b - c(n+1)] Phi_n - b (n-2)/(n-1) Phi_{n-1} = 0,
// Phi_2 = 1, together with the limit Phi_inf = lim n Phi_n (3-point Richardson
// in 1/n at K/4, K/2, K), the tail-corrected sum S = sum n^{-1} Phi_n and the
// normalized sequence phi_k = Phi_k / (c Phi_inf), phi_1 = 1/(2c).
struct PhiTable {
    double theta = 1.0;
    double c = 1.0;
    int k_max = 0;
    std::vector<double> phi;  // phi[k] for k = 1..k_max (slot 0 unused)
    double Phi_inf = 0.0;
    double S = 0.0;
    double tail_a = 0.0;  // n Phi_n ~ Phi_inf + tail_a / n

    double phi_at(long k) const;  // asymptotic continuation beyond k_max
};
PhiTable phi_sequence(double theta, double c, int k_max);

// Recursion c(n+3) Psi_{n+1} + [b - c(n+1)] Psi_n - b (n-3)/(n-1) Psi_{n-1} = 0,
// Psi_3 = 1; limit Psi_inf = lim n^2 Psi_n, sums S = sum n^{-1} Psi_n and
// Sigma = sum Psi_n (tail corrected), psi_k = -Psi_k / (c Psi_inf) plus the
// four special values psi_{-2}, psi_{-1}, psi_1, psi_2.
struct PsiTable {
    double theta = 1.0;
    double c = 1.0;
    int k_max = 0;
    std::vector<double> psi;  // psi[k] for k = 3..k_max (slots 0..2 unused)
    double Psi_inf = 0.0;
    double S = 0.0;
    double Sigma = 0.0;
    double tail_a = 0.0;  // n^2 Psi_n ~ Psi_inf + tail_a / n
    double psi_m2 = 0.0, psi_m1 = 0.0, psi_1 = 0.0, psi_2 = 0.0;

    double psi_at(long k) const;
};
PsiTable psi_sequence(double theta, double c, int k_max);

// I_k(theta) = int_0^theta u^{k-1} (e^u (u^2 - u + 1) - 1) du, by the
// positive series sum_m (m-1)^2 theta^{m+k} / (m! (m+k)).
double slope_integral(int k, double theta);
// I_k / theta^{k+2}; stays bounded for large k (the raw integral overflows).
double slope_integral_scaled(int k, double theta);
// Primitive-based closed form of the same integral; suffers cancellation for
// large k, intended as a small-k cross-check.
double slope_integral_closed(int k, double theta);

// pi_x(v) = sum_{k>=1} phi_k v^{k-1} on [0,1). The 1/(ck) part is summed in
// closed form (-ln(1-v)/(cv)) so the evaluation stays accurate as v -> 1.
double pi_eval(const PhiTable& t, double v);
// term-wise derivatives, for grids bounded away from 1
double pi_eval_d1(const PhiTable& t, double v);
double pi_eval_d2(const PhiTable& t, double v);

}  // namespace evoscale
