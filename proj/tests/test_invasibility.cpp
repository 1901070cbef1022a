#include <cmath>

#include "core/fixation.hpp"
#include "core/invasibility.hpp"
#include "doctest.h"

using namespace evoscale;

namespace {

const InvasibilityDeps& unit_deps() {
    static const InvasibilityDeps deps = make_invasibility_deps(BaseRates{1.0, 1.0, 0.0}, 120);
    return deps;
}

}  // namespace

TEST_CASE("g_lambda closed form at d = 0") {
    const auto& deps = unit_deps();
    // g_n = n/(2c(n+1)): n = 2, c = 1 -> 1/3
    CHECK(invasibility_g(Iota::lambda, 2, deps) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(invasibility_g(Iota::lambda, 10, deps) ==
          doctest::Approx(10.0 / 22.0).epsilon(1e-12));
}

TEST_CASE("aggressiveness and survival invasibilities coincide") {
    const auto& deps = unit_deps();
    for (long n : {2L, 5L, 17L, 60L})
        CHECK(invasibility_g(Iota::alpha, n, deps) ==
              invasibility_g(Iota::sigma, n, deps));
}

TEST_CASE("g_delta frozen oracle values (high-precision series)") {
    struct Ref { double theta; long n; double value; };
    const Ref refs[] = {{0.5, 2, 1.0578875431343}, {0.5, 10, 2.2450355752212},
                        {1.0, 2, 1.1204904895839}, {1.0, 10, 2.3530679582017},
                        {2.0, 2, 1.2599419318074}, {2.0, 10, 2.5876981606265},
                        {5.0, 2, 1.7857781857114}, {5.0, 10, 3.4251452159746}};
    for (const auto& r : refs) {
        const InvasibilityDeps deps =
            make_invasibility_deps(BaseRates{r.theta, 1.0, 0.0}, 16);
        CHECK(invasibility_g(Iota::delta, r.n, deps) ==
              doctest::Approx(r.value).epsilon(1e-8));
    }
}

TEST_CASE("g_delta grows like (1/c) ln n") {
    const auto& deps = unit_deps();
    const double g1e4 = invasibility_g(Iota::delta, 10000, deps);
    CHECK(std::fabs(g1e4 / std::log(1e4) - 1.0) < 0.05);
    // increments isolate the log constant: g_{2n} - g_n -> ln 2
    const double inc = invasibility_g(Iota::delta, 8192, deps) -
                       invasibility_g(Iota::delta, 4096, deps);
    CHECK(inc == doctest::Approx(std::log(2.0)).epsilon(0.01));
}

TEST_CASE("g_epsilon grows like (1/c) ln n") {
    const InvasibilityDeps deps = make_invasibility_deps(BaseRates{1.0, 1.0, 0.0}, 1100);
    const double inc = invasibility_g(Iota::epsilon, 1024, deps) -
                       invasibility_g(Iota::epsilon, 512, deps);
    CHECK(inc == doctest::Approx(std::log(2.0)).epsilon(0.05));
}

TEST_CASE("plugging u sequences into the operators reproduces the target right-hand sides") {
    const auto& deps = unit_deps();
    const int last = 102;
    const BaseRates base = deps.base;

    const Seq ul = u_iota_seq(Iota::lambda, deps, last);
    const Seq lul = apply_L(ul, base);
    for (int n = 2; n <= 100; ++n)
        CHECK(std::fabs(lul.at(n) - 1.0 / (static_cast<double>(n) * (n + 1.0))) < 1e-6);

    const Seq ud = u_iota_seq(Iota::delta, deps, last);
    const Seq lud = apply_L(ud, base);
    for (int n = 2; n <= 100; ++n)
        CHECK(std::fabs(lud.at(n) - 1.0 / static_cast<double>(n)) < 1e-6);

    const Seq ua = u_iota_seq(Iota::alpha, deps, last);
    const Seq lua = apply_L(ua, base);
    for (int n = 2; n <= 100; ++n)
        CHECK(std::fabs(lua.at(n) - 1.0 / (static_cast<double>(n) * (n - 1.0))) < 1e-6);

    const Seq ue = u_iota_seq(Iota::epsilon, deps, last);
    const Seq lue = apply_Lprime(ue, base);
    for (int n = 3; n <= 100; ++n)
        CHECK(std::fabs(lue.at(n) - 1.0 / (static_cast<double>(n) * (n - 1.0))) < 1e-6);
}

TEST_CASE("selection gradient factorization basics") {
    const auto& deps = unit_deps();
    CHECK(selection_gradient_v(Iota::epsilon, 7, 7, deps) == 0.0);  // p = 1/2
    CHECK(selection_gradient_v(Iota::lambda, 5, 0, deps) == 0.0);   // axes
    CHECK(selection_gradient_v(Iota::lambda, 0, 5, deps) == 0.0);
    // antisymmetry of the isolation gradient
    const double v1 = selection_gradient_v(Iota::epsilon, 8, 4, deps);
    const double v2 = selection_gradient_v(Iota::epsilon, 4, 8, deps);
    CHECK(v1 == doctest::Approx(-v2).epsilon(1e-12));
    // p(1-p) factorization against direct evaluation
    const double g = invasibility_g(Iota::delta, 9, deps);
    CHECK(selection_gradient_v(Iota::delta, 6, 3, deps) ==
          doctest::Approx((3.0 / 9.0) * (6.0 / 9.0) * g).epsilon(1e-12));
}

TEST_CASE("adaptive slope a_lambda: closed form, series, and the theta = 1 value") {
    CHECK(a_lambda_closed(1.0, 1.0) ==
          doctest::Approx((2.0 * std::exp(1.0) - 5.0) / 2.0).epsilon(1e-14));
    for (double theta : {0.5, 1.0, 2.0, 5.0}) {
        const double b = theta;  // c = 1
        CHECK(a_lambda_closed(theta, b) ==
              doctest::Approx(a_lambda_series(theta, 1.0)).epsilon(1e-8));
    }
}

TEST_CASE("a_delta: series route equals integral route") {
    struct Ref { double theta; double value; };
    // frozen from the 30-digit series prototype with trigamma tail (c = 1)
    const Ref refs[] = {{0.5, 0.45324525695558}, {1.0, 0.80222816136769},
                        {2.0, 2.4087135399018}};
    for (const auto& r : refs) {
        const InvasibilityDeps deps = make_invasibility_deps(BaseRates{r.theta, 1.0, 0.0}, 16);
        const double series = a_delta_series_route(deps);
        const double integral = a_delta_integral_route(deps);
        CHECK(std::fabs(series - integral) < 1e-6);
        CHECK(series == doctest::Approx(r.value).epsilon(1e-7));
    }
}

TEST_CASE("pi ode residual is tiny on [0, 0.9]") {
    for (double theta : {0.5, 1.0, 2.0}) {
        const PhiTable phi = phi_sequence(theta, 1.0, 10000);
        std::vector<double> grid;
        for (int i = 0; i <= 90; ++i) grid.push_back(0.01 * i);
        CHECK(pi_ode_residual_max(phi, theta /* b = c theta, c = 1 */, grid) < 1e-6);
    }
}

TEST_CASE("pi at zero equals phi_1 = theta/(2b)") {
    const PhiTable phi = phi_sequence(2.0, 1.0, 1000);
    CHECK(pi_eval(phi, 0.0) == doctest::Approx(0.5).epsilon(1e-14));  // 1/(2c), c = 1
}

TEST_CASE("grad2 chi closed form composes the slopes") {
    const auto& deps = unit_deps();
    const AdaptiveSlopes slopes = adaptive_slopes(deps);
    Eigen::VectorXd gb = Eigen::VectorXd::Constant(1, 0.1);
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    const Eigen::VectorXd grad = grad2_chi_closed(gb, zero, zero, slopes, 1.0);
    CHECK(grad[0] == doctest::Approx(std::exp(-1.0) * slopes.a_lambda * 0.1).epsilon(1e-14));
    const Eigen::VectorXd none = grad2_chi_closed(zero, zero, zero, slopes, 1.0);
    CHECK(none[0] == 0.0);
}

TEST_CASE("domain guards") {
    const auto& deps = unit_deps();
    CHECK_THROWS(invasibility_g(Iota::lambda, 1, deps));
    CHECK_THROWS(invasibility_g(Iota::epsilon, 2, deps));
    const InvasibilityDeps with_d = make_invasibility_deps(BaseRates{1.0, 1.0, 0.5}, 16);
    CHECK_THROWS(invasibility_g(Iota::delta, 5, with_d));
    CHECK_THROWS(invasibility_g(Iota::epsilon, 5, with_d));
    CHECK(invasibility_g(Iota::lambda, 5, with_d) > 0.0);  // lambda fine with d > 0
}

TEST_CASE("fd on the solver matches p(1-p) g across all five coefficients (small grid)") {
    const auto& deps = unit_deps();
    const double h = 1e-4;
    const auto fd_v = [&](Iota iota, int n, int m) {
        SelectionCoefficients plus, minus;
        double* fields_p[5] = {&plus.lambda, &plus.delta, &plus.alpha, &plus.epsilon,
                               &plus.sigma};
        double* fields_m[5] = {&minus.lambda, &minus.delta, &minus.alpha, &minus.epsilon,
                               &minus.sigma};
        const int idx = static_cast<int>(iota);
        *fields_p[idx] = h;
        *fields_m[idx] = -h;
        FixationProblem pp;
        pp.params = TwoTypeParams::from_base(1.0, 1.0, 0.0, plus);
        pp.requested_total = 10;
        pp.n_max = 80;
        pp.sensitivity_check = false;
        FixationProblem pm = pp;
        pm.params = TwoTypeParams::from_base(1.0, 1.0, 0.0, minus);
        const FixationTable tp = solve_fixation(pp, 1e-11);
        const FixationTable tm = solve_fixation(pm, 1e-11);
        return (tp(n, m) - tm(n, m)) / (2.0 * h);
    };
    for (const Iota iota : {Iota::lambda, Iota::delta, Iota::alpha, Iota::epsilon, Iota::sigma}) {
        for (const auto& [n, m] : std::vector<std::pair<int, int>>{{1, 1}, {3, 2}, {5, 1}, {2, 6}}) {
            const double fd = fd_v(iota, n, m);
            const double ref = selection_gradient_v(iota, n, m, deps);
            if (std::fabs(ref) > 1e-12)
                CHECK(std::fabs(fd - ref) / std::fabs(ref) < 0.01);
            else
                CHECK(std::fabs(fd) < 1e-6);
        }
    }
}
