#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "causalbound/solver.hpp"
#include "support/lp_oracle.hpp"

using namespace causalbound;

namespace {

// Response-type program for the worked 2x2 table (cells 0.3/0.2/0.1/0.4),
// variables q[i] indexed by (y1, y0, x) as i = 4*y1 + 2*y0 + x.
LinearProgram worked_example_program() {
    LinearProgram lp(8);
    for (auto& b : lp.bounds) b = {0.0, 1.0};
    lp.add_eq({1, 1, 1, 1, 1, 1, 1, 1}, 1.0);
    lp.add_eq({1, 0, 0, 0, 1, 0, 0, 0}, 0.3);  // q0+q4 = P(X=0,Y=0)
    lp.add_eq({0, 0, 1, 0, 0, 0, 1, 0}, 0.2);  // q2+q6 = P(X=0,Y=1)
    lp.add_eq({0, 1, 0, 1, 0, 0, 0, 0}, 0.1);  // q1+q3 = P(X=1,Y=0)
    lp.add_eq({0, 0, 0, 0, 0, 1, 0, 1}, 0.4);  // q5+q7 = P(X=1,Y=1)
    lp.objective = {0, 0, -1, -1, 1, 1, 0, 0};  // (q4+q5) - (q2+q3)
    return lp;
}

}  // namespace

TEST_CASE("worked example: ATE objective spans [-0.3, 0.7]") {
    LinearProgram lp = worked_example_program();
    LpSolution hi = solve_lp(lp, OptSense::Maximize);
    LpSolution lo = solve_lp(lp, OptSense::Minimize);
    REQUIRE(hi.status == LpStatus::Optimal);
    REQUIRE(lo.status == LpStatus::Optimal);
    CHECK(hi.value == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(lo.value == doctest::Approx(-0.3).epsilon(1e-9));
    CHECK(lp_residual(lp, hi.point) <= 1e-7);
    CHECK(lp_residual(lp, lo.point) <= 1e-7);
}

TEST_CASE("single variable, box and row bounds") {
    LinearProgram lp(1);
    lp.objective = {1.0};
    lp.bounds[0] = {0.0, kLpInfinity};
    lp.add_ineq({1.0}, 0.4);
    CHECK(solve_lp(lp, OptSense::Maximize).value == doctest::Approx(0.4));
    CHECK(solve_lp(lp, OptSense::Minimize).value == doctest::Approx(0.0));

    LinearProgram shifted(1);
    shifted.objective = {1.0};
    shifted.bounds[0] = {-2.0, -1.0};
    CHECK(solve_lp(shifted, OptSense::Maximize).value == doctest::Approx(-1.0));
    CHECK(solve_lp(shifted, OptSense::Minimize).value == doctest::Approx(-2.0));
}

TEST_CASE("infeasible and unbounded programs are reported as such") {
    LinearProgram bad(1);
    bad.objective = {1.0};
    bad.add_ineq({1.0}, -1.0);  // v <= -1 contradicts v >= 0
    CHECK(solve_lp(bad, OptSense::Maximize).status == LpStatus::Infeasible);

    LinearProgram open(2);
    open.objective = {1.0, 0.0};
    CHECK(solve_lp(open, OptSense::Maximize).status == LpStatus::Unbounded);
    // ... but bounded below
    CHECK(solve_lp(open, OptSense::Minimize).value == doctest::Approx(0.0));
}

TEST_CASE("Beale's degenerate program terminates under Bland's rule") {
    LinearProgram lp(4);
    lp.objective = {-0.75, 150.0, -0.02, 6.0};
    lp.add_ineq({0.25, -60.0, -0.04, 9.0}, 0.0);
    lp.add_ineq({0.5, -90.0, -0.02, 3.0}, 0.0);
    lp.add_ineq({0.0, 0.0, 1.0, 0.0}, 1.0);
    LpSolution sol = solve_lp(lp, OptSense::Minimize);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("agreement with vertex enumeration on random feasible programs") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 2 + rep % 5;
        LinearProgram lp(n);
        for (std::size_t i = 0; i < n; ++i) {
            lp.objective[i] = coef(rng);
            lp.bounds[i] = {0.0, 1.0 + unif(rng)};
        }
        // anchor point inside the box keeps every generated program feasible
        std::vector<double> v0(n);
        for (std::size_t i = 0; i < n; ++i)
            v0[i] = lp.bounds[i].first +
                    unif(rng) * (lp.bounds[i].second - lp.bounds[i].first);
        const std::size_t extra = 1 + static_cast<std::size_t>(rep % 4);
        for (std::size_t k = 0; k < extra; ++k) {
            std::vector<double> a(n);
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = coef(rng);
                dot += a[i] * v0[i];
            }
            lp.add_ineq(std::move(a), dot + 0.2 * unif(rng));
        }
        if (rep % 3 == 0) {
            std::vector<double> a(n);
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = coef(rng);
                dot += a[i] * v0[i];
            }
            lp.add_eq(std::move(a), dot);
        }

        cb_test::OracleResult oracle = cb_test::enumerate_vertices(lp);
        REQUIRE(oracle.feasible);
        LpSolution hi = solve_lp(lp, OptSense::Maximize);
        LpSolution lo = solve_lp(lp, OptSense::Minimize);
        REQUIRE(hi.status == LpStatus::Optimal);
        REQUIRE(lo.status == LpStatus::Optimal);
        CHECK(hi.value == doctest::Approx(oracle.max).epsilon(1e-7));
        CHECK(lo.value == doctest::Approx(oracle.min).epsilon(1e-7));
        CHECK(lp_residual(lp, hi.point) <= 1e-7);
        CHECK(lp_residual(lp, lo.point) <= 1e-7);
    }
}

TEST_CASE("cutting plane: slack constraint changes nothing") {
    LinearProgram lp = worked_example_program();
    ConvexConstraint cc{[](const std::vector<double>& v) {
                            double s = 0.0;
                            for (double q : v) s += q * q;
                            return s;
                        },
                        100.0};
    LpSolution plain = solve_lp(lp, OptSense::Maximize);
    LpSolution cut = solve_convex_cut(lp, cc, OptSense::Maximize);
    REQUIRE(cut.status == LpStatus::Optimal);
    CHECK(cut.cuts == 0);
    CHECK(cut.value == doctest::Approx(plain.value).epsilon(1e-12));
}

TEST_CASE("cutting plane: affine constraint matches an explicit row") {
    LinearProgram lp(2);
    lp.objective = {1.0, 1.0};
    lp.bounds = {{0.0, 1.0}, {0.0, 1.0}};

    ConvexConstraint cc{[](const std::vector<double>& v) { return v[0] + 2.0 * v[1]; },
                        1.5};
    LpSolution cut = solve_convex_cut(lp, cc, OptSense::Maximize, 1e-9);

    LinearProgram withrow = lp;
    withrow.add_ineq({1.0, 2.0}, 1.5);
    LpSolution exact = solve_lp(withrow, OptSense::Maximize);

    REQUIRE(cut.status == LpStatus::Optimal);
    CHECK(cut.value == doctest::Approx(exact.value).epsilon(1e-9));
}

TEST_CASE("cutting plane: quadratic ball constraint") {
    LinearProgram lp(2);
    lp.objective = {1.0, 1.0};
    lp.bounds = {{0.0, 1.0}, {0.0, 1.0}};
    ConvexConstraint cc{[](const std::vector<double>& v) {
                            return v[0] * v[0] + v[1] * v[1];
                        },
                        0.5};
    LpSolution sol = solve_convex_cut(lp, cc, OptSense::Maximize);
    REQUIRE(sol.status == LpStatus::Optimal);
    // optimum of x+y on the quarter disc of radius sqrt(0.5) is 1 at (.5,.5)
    CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(cc.evaluate(sol.point) <= 0.5 + 1e-6);
    CHECK(sol.cut_gap <= 1e-6);
}

TEST_CASE("cutting plane: value is monotone in the budget") {
    LinearProgram lp(2);
    lp.objective = {1.0, 1.0};
    lp.bounds = {{0.0, 1.0}, {0.0, 1.0}};
    double prev = -1.0;
    for (double budget : {0.1, 0.2, 0.5, 1.0, 2.0}) {
        ConvexConstraint cc{[](const std::vector<double>& v) {
                                return v[0] * v[0] + v[1] * v[1];
                            },
                            budget};
        LpSolution sol = solve_convex_cut(lp, cc, OptSense::Maximize);
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.value >= prev - 1e-5);
        prev = sol.value;
    }
}

TEST_CASE("cutting plane: infeasible base program short-circuits") {
    LinearProgram lp(1);
    lp.objective = {1.0};
    lp.add_ineq({1.0}, -1.0);
    ConvexConstraint cc{[](const std::vector<double>& v) { return v[0]; }, 10.0};
    CHECK(solve_convex_cut(lp, cc, OptSense::Maximize).status ==
          LpStatus::Infeasible);
}
