// Small dense LP solver plus a cutting-plane wrapper for a single convex
// constraint.  Geared to the tiny programs this engine generates (<= ~20
// variables, <= ~40 rows); favours exactness and determinism over speed.
#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace causalbound {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
enum class OptSense { Minimize, Maximize };

constexpr double kLpInfinity = std::numeric_limits<double>::infinity();

// min/max  objective . v
// s.t.     eq[k].first . v  == eq[k].second
//          ineq[k].first . v <= ineq[k].second
//          bounds[i].first <= v[i] <= bounds[i].second
//
// Lower bounds must be finite; upper bounds may be +infinity.
struct LinearProgram {
    std::size_t nvars = 0;
    std::vector<double> objective;
    std::vector<std::pair<std::vector<double>, double>> eq;
    std::vector<std::pair<std::vector<double>, double>> ineq;
    std::vector<std::pair<double, double>> bounds;

    explicit LinearProgram(std::size_t n = 0)
        : nvars(n), objective(n, 0.0), bounds(n, {0.0, kLpInfinity}) {}

    void add_eq(std::vector<double> coeffs, double rhs);
    void add_ineq(std::vector<double> coeffs, double rhs);
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> point;
    // set by solve_convex_cut: residual of the convex constraint at the
    // returned point (0 when strictly satisfied) and number of cuts added
    double cut_gap = 0.0;
    int cuts = 0;
};

// Two-phase dense simplex, Bland's rule throughout (no cycling).  An Optimal
// solution satisfies every equality and inequality within 1e-7.
LpSolution solve_lp(const LinearProgram& lp, OptSense sense);

// Largest constraint violation of a candidate point; test hook.
double lp_residual(const LinearProgram& lp, const std::vector<double>& v);

// One smooth convex constraint  evaluate(v) <= bound  added to an LP.
struct ConvexConstraint {
    std::function<double(const std::vector<double>&)> evaluate;
    double bound = 0.0;
};

// Central-difference gradient, step 1e-7.
std::vector<double> numeric_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& v);

// Kelley cutting planes: repeatedly solve the LP relaxation, stop once the
// optimum satisfies g <= bound + tol, otherwise cut away the optimum with the
// supported hyperplane of g there.  Outer approximation: the returned value
// brackets the true optimum from the relaxed side; cut_gap reports the final
// residual.  Status IterationLimit when max_cuts is exhausted.
LpSolution solve_convex_cut(LinearProgram lp, const ConvexConstraint& cc,
                            OptSense sense, double tol = 1e-6,
                            int max_cuts = 200);

}  // namespace causalbound
