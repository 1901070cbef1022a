#pragma once

// Small special-function kit used by the statistics helpers and the tail
// corrections of the invasibility series.

namespace evoscale {

double digamma(double x);
double trigamma(double x);

// regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x)
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// survival function of the chi-square distribution with df degrees of freedom
double chi2_sf(double stat, int df);

// Kolmogorov distribution survival Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_sf(double lambda);

// sum_{k>n} k^{-2} and sum_{k>n} k^{-3}, via polygamma
double tail_inv_square(double n);
double tail_inv_cube(double n);

}  // namespace evoscale
