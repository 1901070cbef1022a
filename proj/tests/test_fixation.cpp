#include <cmath>
#include <sstream>

#include "core/fixation.hpp"
#include "core/stationary.hpp"
#include "doctest.h"

using namespace evoscale;

namespace {

// independent dense elimination of the 6-unknown truncated neutral system at
// n_max = 4 (b = c = 1, d = 0), written out state by state
void dense_reference_n4(double& u11, double& u21) {
    // unknown order: u11 u21 u12 u31 u22 u13
    double A[6][7] = {
        // 4 u11 = u21 + u12 + 1
        {4, -1, -1, 0, 0, 0, 1},
        // 9 u21 = 2 u31 + u22 + 4 u11
        {-4, 9, 0, -2, -1, 0, 0},
        // 9 u12 = u22 + 2 u13 + 4 u11 + 2
        {-4, 0, 9, 0, -1, -2, 2},
        // 12 u31 = 9 u21 (+ 3 * 0)
        {0, -9, 0, 12, 0, 0, 0},
        // 12 u22 = 6 u12 + 6 u21
        {0, -6, -6, 0, 12, 0, 0},
        // 12 u13 = 9 u12 + 3 * 1
        {0, 0, -9, 0, 0, 12, 3},
    };
    for (int col = 0; col < 6; ++col) {
        int piv = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        for (int k = 0; k < 7; ++k) std::swap(A[col][k], A[piv][k]);
        for (int r = 0; r < 6; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            for (int k = col; k < 7; ++k) A[r][k] -= f * A[col][k];
        }
    }
    u11 = A[0][6] / A[0][0];
    u21 = A[1][6] / A[1][1];
}

}  // namespace

TEST_CASE("six-unknown truncation against independent dense elimination") {
    double u11_ref = 0.0, u21_ref = 0.0;
    dense_reference_n4(u11_ref, u21_ref);
    CHECK(u11_ref == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(u21_ref == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    FixationProblem prob;
    prob.params = TwoTypeParams::neutral(1.0, 1.0);
    prob.n_max = 4;
    prob.requested_total = 2;
    prob.sensitivity_check = true;
    const FixationTable t = solve_fixation(prob, 1e-10);
    CHECK(t(1, 1) == doctest::Approx(u11_ref).epsilon(1e-10));
    CHECK(t(2, 1) == doctest::Approx(u21_ref).epsilon(1e-10));
    // neutral truncation is exact; the doubling test sees only roundoff
    CHECK(t.truncation_sensitivity < 1e-10);
}

TEST_CASE("row structure: interior equations balance and are diagonally dominant") {
    FixationProblem prob;
    prob.params = TwoTypeParams::from_base(1.3, 0.7, 0.2, SelectionCoefficients{0.05, 0.01, -0.02, 0.0, 0.03});
    prob.n_max = 12;
    const AssembledSystem sys = assemble_system(prob);
    const long n_unknowns = sys.matrix.rows();
    Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(n_unknowns);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n_unknowns);
    Eigen::VectorXd off_abs = Eigen::VectorXd::Zero(n_unknowns);
    for (int k = 0; k < sys.matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, k); it; ++it) {
            row_sum[it.row()] += it.value();
            if (it.row() == it.col())
                diag[it.row()] = it.value();
            else
                off_abs[it.row()] += std::fabs(it.value());
        }
    for (long i = 0; i < n_unknowns; ++i) {
        // diagonal equals total outflow; off-diagonals plus boundary mass equal it
        CHECK(diag[i] >= off_abs[i] - 1e-12);
        // row sum + boundary coefficients (rhs carries value-1 mass only) >= 0
        CHECK(row_sum[i] >= -1e-12);
    }
}

TEST_CASE("neutral solve reproduces m/(n+m) and exact boundaries") {
    FixationProblem prob;
    prob.params = TwoTypeParams::neutral(1.0, 1.0);
    prob.n_max = 60;
    prob.requested_total = 30;
    prob.sensitivity_check = false;
    const FixationTable t = solve_fixation(prob, 1e-10);
    double worst = 0.0;
    for (int s = 2; s <= 30; ++s)
        for (int n = 1; n <= s - 1; ++n)
            worst = std::max(worst,
                             std::fabs(t(n, s - n) - static_cast<double>(s - n) / s));
    CHECK(worst < 1e-10);
    for (int m = 1; m <= 60; ++m) CHECK(t(0, m) == 1.0);
    for (int n = 1; n <= 60; ++n) CHECK(t(n, 0) == 0.0);
    CHECK(t.residual <= 1e-10);
}

TEST_CASE("values lie in [0,1] under selection") {
    SelectionCoefficients s;
    s.lambda = 0.3;
    s.delta = 0.1;
    FixationProblem prob;
    prob.params = TwoTypeParams::from_base(1.0, 1.0, 0.0, s);
    prob.n_max = 40;
    prob.sensitivity_check = false;
    const FixationTable t = solve_fixation(prob, 1e-10);
    for (int sdiag = 2; sdiag <= 40; ++sdiag)
        for (int n = 1; n <= sdiag - 1; ++n) {
            CHECK(t(n, sdiag - n) >= -1e-12);
            CHECK(t(n, sdiag - n) <= 1.0 + 1e-12);
        }
}

TEST_CASE("solver agrees with monte carlo under fertility selection") {
    SelectionCoefficients s;
    s.lambda = 0.1;
    FixationProblem prob;
    prob.params = TwoTypeParams::from_base(1.0, 1.0, 0.0, s);
    prob.requested_total = 8;
    prob.sensitivity_check = false;
    const FixationTable t = solve_fixation(prob, 1e-10);
    const McEstimate mc = mc_fixation(prob.params, 5, 1, 200000, 4242, 4);
    CHECK(std::fabs(t(5, 1) - mc.estimate) < 3.0 * mc.stderr_est);
}

TEST_CASE("truncation sensitivity shrinks with margin") {
    SelectionCoefficients s;
    s.alpha = 0.1;
    FixationProblem tight;
    tight.params = TwoTypeParams::from_base(1.0, 1.0, 0.0, s);
    tight.n_max = 14;
    tight.requested_total = 10;
    FixationProblem wide = tight;
    wide.n_max = 40;
    const FixationTable t_tight = solve_fixation(tight, 1e-10);
    const FixationTable t_wide = solve_fixation(wide, 1e-10);
    CHECK(t_wide.truncation_sensitivity <= t_tight.truncation_sensitivity);
    // doubling bound is honest: actual change from 14 to 40 within reported sensitivity
    double change = 0.0;
    for (int sd = 2; sd <= 10; ++sd)
        for (int n = 1; n <= sd - 1; ++n)
            change = std::max(change, std::fabs(t_tight(n, sd - n) - t_wide(n, sd - n)));
    CHECK(change <= t_tight.truncation_sensitivity * 1.5 + 1e-12);
}

TEST_CASE("invasion fitness: neutral column gives the closed form") {
    // u_{n,1} = 1/(n+1) at neutrality; chi = (e^-theta - 1 + theta)/theta^2
    for (double theta : {0.5, 1.0, 2.0, 5.0}) {
        std::vector<double> col(400);
        for (std::size_t i = 0; i < col.size(); ++i) col[i] = 1.0 / (static_cast<double>(i) + 2.0);
        const double chi = invasion_fitness(theta, col, 1e-12);
        const double closed = (std::exp(-theta) - 1.0 + theta) / (theta * theta);
        CHECK(chi == doctest::Approx(closed).epsilon(1e-10));
    }
    CHECK(invasion_fitness(1.0, std::vector<double>(400, 1.0 / 2.0), 1e-12) > 0.0);
    CHECK_THROWS(invasion_fitness(5.0, std::vector<double>{0.5, 0.3}, 1e-12));
}

TEST_CASE("chi via solver at neutrality") {
    Model model;
    model.dim = 1;
    model.birth.intercept = 1.0;
    model.competition.c0 = 1.0;
    model.kernel.sd = Eigen::VectorXd::Constant(1, 0.1);
    model.kernel.mean = Eigen::VectorXd::Zero(1);
    const Trait x = model.trait(0.0);
    const double chi = chi_solver(model, x, x, SolverOptions{});
    CHECK(chi == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("fd gradient basics") {
    Model model;
    model.dim = 1;
    model.birth.intercept = 1.0;
    model.birth.slope = Eigen::VectorXd::Constant(1, 0.1);
    model.competition.c0 = 1.0;
    model.kernel.sd = Eigen::VectorXd::Constant(1, 0.1);
    model.kernel.mean = Eigen::VectorXd::Zero(1);
    const Trait x = model.trait(0.0);
    Trait dir(1);
    dir[0] = 1.0;
    SolverOptions opt;
    const FdGradient g = chi_gradient_fd(model, x, dir, 1e-4, opt);
    // zero direction gives zero
    const FdGradient z = chi_gradient_fd(model, x, model.trait(0.0) * 0.0, 1e-4, opt);
    CHECK(z.value == 0.0);
    // antisymmetry of the central difference
    const FdGradient gneg = chi_gradient_fd(model, x, -dir, 1e-4, opt);
    CHECK(g.value == doctest::Approx(-gneg.value).epsilon(1e-10));
    // richardson companion close to the base estimate
    CHECK(std::fabs(g.richardson_gap()) < 1e-6 * std::max(1.0, std::fabs(g.value)));
    CHECK(g.value > 0.0);  // fitness increases uphill in b
}

TEST_CASE("csv serialization carries metadata and data") {
    FixationProblem prob;
    prob.params = TwoTypeParams::neutral(1.0, 1.0);
    prob.n_max = 6;
    prob.requested_total = 4;
    prob.sensitivity_check = false;
    const FixationTable t = solve_fixation(prob, 1e-10);
    std::ostringstream os;
    t.write_csv(os);
    const std::string text = os.str();
    CHECK(text.find("# n_max: 6") != std::string::npos);
    CHECK(text.find("# residual:") != std::string::npos);
    CHECK(text.find("n,m,u") != std::string::npos);
    CHECK(text.find("0,1,1") != std::string::npos);
}
