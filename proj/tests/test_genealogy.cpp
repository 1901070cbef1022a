#include <cmath>

#include "core/genealogy.hpp"
#include "doctest.h"

using namespace evoscale;

TEST_CASE("definition pins q2(2) = q3(3) = 1") {
    const BaseRates base{1.0, 1.0, 0.0};
    const GenealogyEstimate h = q_genealogy_harmonic(base, 12);
    CHECK(h.q2_at(2) == 1.0);
    CHECK(h.q3_at(3) == 1.0);
    const GenealogyEstimate mc = q_genealogy_mc(base, 6, 2000, 9, 2);
    CHECK(mc.q2_at(2) == 1.0);
    CHECK(mc.q3_at(3) == 1.0);
}

TEST_CASE("harmonic route is internally consistent across the diagonal") {
    const BaseRates base{1.7, 0.6, 0.0};
    const GenealogyEstimate h = q_genealogy_harmonic(base, 40);
    CHECK(h.diagonal_spread < 1e-9);
    for (int n = 2; n <= 40; ++n) {
        CHECK(h.q2_at(n) >= 0.0);
        CHECK(h.q2_at(n) <= 1.0 + 1e-12);
    }
}

TEST_CASE("harmonic route is stable under grid doubling") {
    const BaseRates base{1.0, 1.0, 0.0};
    const GenealogyEstimate a = q_genealogy_harmonic(base, 30);
    const GenealogyEstimate b = q_genealogy_harmonic(base, 30, 30 + 128);
    for (int n = 3; n <= 30; ++n) {
        CHECK(a.q2_at(n) == doctest::Approx(b.q2_at(n)).epsilon(1e-10));
        if (n >= 4) CHECK(a.q3_at(n) == doctest::Approx(b.q3_at(n)).epsilon(1e-10));
    }
}

TEST_CASE("monte carlo and harmonic agree within 3 sigma") {
    const BaseRates base{1.0, 1.0, 0.0};
    const int n_max = 12;
    const GenealogyEstimate h = q_genealogy_harmonic(base, n_max);
    const GenealogyEstimate mc = q_genealogy_mc(base, n_max, 20000, 314, 4);
    for (int n = 3; n <= n_max; ++n) {
        CHECK(std::fabs(h.q2_at(n) - mc.q2_at(n)) <
              3.5 * std::max(mc.q2_err[static_cast<std::size_t>(n)], 1e-4));
        if (n >= 4)
            CHECK(std::fabs(h.q3_at(n) - mc.q3_at(n)) <
                  3.5 * std::max(mc.q3_err[static_cast<std::size_t>(n)], 1e-4));
    }
}

TEST_CASE("agreement also holds with natural death") {
    const BaseRates base{1.0, 0.8, 0.4};
    const GenealogyEstimate h = q_genealogy_harmonic(base, 8);
    const GenealogyEstimate mc = q_genealogy_mc(base, 8, 20000, 2718, 4);
    for (int n = 3; n <= 8; ++n)
        CHECK(std::fabs(h.q2_at(n) - mc.q2_at(n)) <
              3.5 * std::max(mc.q2_err[static_cast<std::size_t>(n)], 1e-4));
}

TEST_CASE("q2 plateaus at a nonzero level") {
    const BaseRates base{1.0, 1.0, 0.0};
    const GenealogyEstimate h = q_genealogy_harmonic(base, 200);
    CHECK(h.q2_at(200) > 0.1);
    // late increments shrink: plateau, not drift to zero
    CHECK(std::fabs(h.q2_at(200) - h.q2_at(100)) <
          0.1 * std::fabs(h.q2_at(20) - h.q2_at(10)) + 1e-6);
}

TEST_CASE("kappa values follow their defining formulas") {
    const BaseRates base{1.3, 0.9, 0.2};
    const GenealogyEstimate h = q_genealogy_harmonic(base, 10);
    CHECK(h.kappa ==
          doctest::Approx(base.b * (1.0 - 2.0 * h.q2_at(3) / 3.0) + base.c + base.d));
    CHECK(h.kappa_prime ==
          doctest::Approx(0.5 * base.b * (1.0 - h.q3_at(4) / 2.0) + base.c + 0.5 * base.d));
}

TEST_CASE("genealogical sequences satisfy L D2 = dirac(2) and L' D3 = dirac(3)") {
    for (const BaseRates base : {BaseRates{1.0, 1.0, 0.0}, BaseRates{2.0, 0.7, 0.5}}) {
        const GenealogyEstimate h = q_genealogy_harmonic(base, 60);
        const Seq d2 = h.d2_seq(60);
        const Seq ld2 = apply_L(d2, base);
        for (int n = 2; n <= ld2.last(); ++n)
            CHECK(std::fabs(ld2.at(n) - (n == 2 ? 1.0 : 0.0)) < 1e-8);
        const Seq d3 = h.d3_seq(60);
        const Seq ld3 = apply_Lprime(d3, base);
        for (int n = 3; n <= ld3.last(); ++n)
            CHECK(std::fabs(ld3.at(n) - (n == 3 ? 1.0 : 0.0)) < 1e-8);
    }
}

TEST_CASE("input validation") {
    const BaseRates base{1.0, 1.0, 0.0};
    CHECK_THROWS(q_genealogy_harmonic(base, 3));
    CHECK_THROWS(q_genealogy_mc(base, 10, 10, 1));
}
