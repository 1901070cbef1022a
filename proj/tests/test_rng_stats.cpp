#include <cmath>

#include "core/rng.hpp"
#include "core/special.hpp"
#include "core/stats.hpp"
#include "doctest.h"

using namespace evoscale;

TEST_CASE("streams are reproducible and distinct") {
    Rng a(42, 0), b(42, 0), c(42, 1);
    bool all_equal = true, any_equal_cross = true;
    for (int i = 0; i < 100; ++i) {
        const uint64_t x = a.next_u64();
        all_equal &= (x == b.next_u64());
        any_equal_cross &= (x == c.next_u64());
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_cross);
}

TEST_CASE("uniform moments") {
    Rng rng(7);
    MeanVar mv;
    for (int i = 0; i < 200000; ++i) mv.add(rng.uniform());
    CHECK(std::fabs(mv.mean - 0.5) < 4.0 * mv.stderr_mean());
    CHECK(mv.variance() == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("exponential and normal samplers") {
    Rng rng(11);
    MeanVar ex, nm;
    for (int i = 0; i < 200000; ++i) {
        ex.add(rng.exponential(2.5));
        nm.add(rng.normal());
    }
    CHECK(std::fabs(ex.mean - 0.4) < 4.0 * ex.stderr_mean());
    CHECK(std::fabs(nm.mean) < 4.0 * nm.stderr_mean());
    CHECK(nm.variance() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("special function reference values") {
    // references: SciPy 1.x
    CHECK(digamma(10001.0) == doctest::Approx(9.21039037114284940).epsilon(1e-12));
    CHECK(digamma(5.5) == doctest::Approx(1.61109314858175112).epsilon(1e-12));
    CHECK(trigamma(10001.0) == doctest::Approx(9.99950001666666663e-5).epsilon(1e-12));
    CHECK(trigamma(3.25) == doctest::Approx(0.359798290309579875).epsilon(1e-12));
    CHECK(gamma_q(1.5, 2.0) == doctest::Approx(0.26146412994911117).epsilon(1e-12));
    CHECK(chi2_sf(12.5, 7) == doctest::Approx(0.08526927515826925).epsilon(1e-12));
    CHECK(chi2_sf(3.2, 4) == doctest::Approx(0.5249309467861041).epsilon(1e-12));
    CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-10));
    CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-10));
    CHECK(kolmogorov_sf(1.5) == doctest::Approx(0.022217962616525127).epsilon(1e-10));
}

TEST_CASE("polygamma tails match brute force") {
    double brute2 = 0.0, brute3 = 0.0;
    for (long k = 501; k <= 3000000; ++k) {
        brute2 += 1.0 / (static_cast<double>(k) * k);
        brute3 += 1.0 / (static_cast<double>(k) * k * k);
    }
    brute2 += 1.0 / 2999999.5;  // integral remainder beyond the brute cutoff
    CHECK(tail_inv_square(500.0) == doctest::Approx(brute2).epsilon(1e-9));
    CHECK(tail_inv_cube(500.0) == doctest::Approx(brute3).epsilon(1e-9));
}

TEST_CASE("ks test calibration") {
    // uniform samples against the uniform CDF: p should not be extreme
    Rng rng(1234);
    std::vector<double> xs(2000);
    for (auto& x : xs) x = rng.uniform();
    const KsResult r = ks_test(xs, [](double x) { return x; });
    CHECK(r.p_value > 0.01);
    // shifted CDF must be rejected
    const KsResult bad = ks_test(xs, [](double x) { return x * x; });
    CHECK(bad.p_value < 1e-6);
}

TEST_CASE("two-sample ks") {
    Rng rng(99);
    std::vector<double> a(3000), b(3000), c(3000);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal();
    for (auto& x : c) x = rng.normal() + 0.5;
    CHECK(ks_test_2sample(a, b).p_value > 0.01);
    CHECK(ks_test_2sample(a, c).p_value < 1e-6);
}

TEST_CASE("chi2 gof calibration") {
    Rng rng(5);
    std::vector<double> probs{0.2, 0.3, 0.4, 0.1};
    std::vector<long> counts(4, 0);
    const long total = 20000;
    for (long i = 0; i < total; ++i) {
        const double u = rng.uniform();
        if (u < 0.2) ++counts[0];
        else if (u < 0.5) ++counts[1];
        else if (u < 0.9) ++counts[2];
        else ++counts[3];
    }
    CHECK(chi2_gof(counts, probs, total).p_value > 0.01);
    std::vector<double> wrong{0.25, 0.25, 0.4, 0.1};
    CHECK(chi2_gof(counts, wrong, total).p_value < 1e-4);
}
