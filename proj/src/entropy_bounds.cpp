#include "causalbound/entropy_bounds.hpp"

#include <cmath>

#include "causalbound/lp_bounds.hpp"
#include "causalbound/solver.hpp"

namespace causalbound {

namespace {

constexpr double kLogFloor = 1e-12;

double xlog2(double mass, double ratio_num, double ratio_den) {
    if (mass <= 0.0) return 0.0;
    return mass * (std::log2(std::max(ratio_num, kLogFloor)) -
                   std::log2(std::max(ratio_den, kLogFloor)));
}

// u log2(u/(u+v)) + v log2(v/(u+v)), the per-pair block of the mutual
// information once P(X) is fixed: MI = H(X) + sum of these over pairs.
double pair_term(double u, double v) {
    const double s = u + v;
    return xlog2(u, u, s) + xlog2(v, v, s);
}

// The exact MI is not differentiable where a pair carries no mass in either
// cell: the axis-wise slopes stay finite (the log singularities cancel inside
// the pair), yet the function dips below that tangent plane along diagonal
// directions, so finite-difference cuts generated at such vertices are not
// supporting and can slice off genuinely feasible points.  Shifting the pair
// arguments by kSmooth keeps the function convex on the pinned-P(X) slice,
// makes it twice differentiable everywhere the LP can probe, and only ever
// under-estimates the true information (a relaxation of roughly
// kSmooth*|log2 kSmooth| bits per zero cell), so bounds can only widen.
// The value balances two errors: the relaxation above shrinks with kSmooth,
// while the finite-difference cut error grows as h^2/kSmooth^2 and must stay
// below the cut tolerance or the planes stop supporting the feasible set.
constexpr double kSmooth = 1e-5;

double entropy_of_marginal(double px0, double px1) {
    return -xlog2(px0, px0, 1.0) - xlog2(px1, px1, 1.0);
}

double smoothed_response_mi(const std::vector<double>& q) {
    double px[2] = {0.0, 0.0};
    for (int i = 0; i < 8; ++i) px[i & 1] += q[i];
    double g = entropy_of_marginal(px[0], px[1]);
    for (int pair = 0; pair < 4; ++pair)
        g += pair_term(q[2 * pair] + kSmooth, q[2 * pair + 1] + kSmooth);
    return g;
}

double smoothed_arm_mi(const BinaryJoint& j, const std::vector<double>& b) {
    const double px[2] = {j.px(0), j.px(1)};
    double g = entropy_of_marginal(px[0], px[1]);
    for (int y = 0; y < 2; ++y)
        g += pair_term(b[2 * y] * px[0] + kSmooth, b[2 * y + 1] * px[1] + kSmooth);
    return g;
}

void check_theta(double theta) {
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw std::invalid_argument("entropy budget must be finite and >= 0");
}

Interval run_minmax(const LinearProgram& lp, const ConvexConstraint& cc) {
    LpSolution lo = solve_convex_cut(lp, cc, OptSense::Minimize);
    LpSolution hi = solve_convex_cut(lp, cc, OptSense::Maximize);
    if (lo.status == LpStatus::IterationLimit ||
        hi.status == LpStatus::IterationLimit)
        throw data_error("cutting plane did not converge");
    if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
        throw data_error("entropy program infeasible");
    return {lo.value, hi.value};
}

Interval plain_minmax(const LinearProgram& lp) {
    LpSolution lo = solve_lp(lp, OptSense::Minimize);
    LpSolution hi = solve_lp(lp, OptSense::Maximize);
    if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
        throw data_error("entropy program infeasible");
    return {lo.value, hi.value};
}

Interval clamp01(const Interval& v) {
    return clip_to_ceiling(v, Query::Pns).interval;  // [0, 1] ceiling
}

}  // namespace

Theta true_theta(double p_u) {
    return {binary_entropy(p_u), ThetaSource::TrueTheta};
}

double arm_program_mi(const BinaryJoint& j, const std::array<double, 4>& b) {
    const double px[2] = {j.px(0), j.px(1)};
    double mi = 0.0;
    for (int y = 0; y < 2; ++y) {
        const double row = b[2 * y] * px[0] + b[2 * y + 1] * px[1];
        for (int x = 0; x < 2; ++x)
            mi += xlog2(b[2 * y + x] * px[x], b[2 * y + x], row);
    }
    return mi;
}

double response_mi(const std::array<double, 8>& q) {
    // marginals of the candidate law itself
    double py[4] = {0, 0, 0, 0};  // index 2*y1 + y0
    double px[2] = {0, 0};
    for (int i = 0; i < 8; ++i) {
        py[i >> 1] += q[i];
        px[i & 1] += q[i];
    }
    double mi = 0.0;
    for (int i = 0; i < 8; ++i) mi += xlog2(q[i], q[i], py[i >> 1] * px[i & 1]);
    return mi;
}

Interval entropy_do_bound(const BinaryJoint& j, int arm, double theta) {
    if (arm != 0 && arm != 1) throw std::invalid_argument("arm must be 0 or 1");
    check_theta(theta);
    const double px[2] = {j.px(0), j.px(1)};
    if (px[arm] <= 0.0) throw data_error("treatment arm has no mass");

    // variables b[2*y + x] = P(Y_do = y | X = x)
    LinearProgram lp(4);
    for (auto& bd : lp.bounds) bd = {0.0, 1.0};
    lp.objective = {0.0, 0.0, px[0], px[1]};          // P(Y_do = 1)
    lp.add_eq({px[0], px[1], px[0], px[1]}, 1.0);      // total mass
    lp.add_eq({1, 0, 1, 0}, 1.0);                      // column x = 0
    lp.add_eq({0, 1, 0, 1}, 1.0);                      // column x = 1
    for (int y = 0; y < 2; ++y) {                      // observed arm pinned
        std::vector<double> row(4, 0.0);
        row[2 * y + arm] = px[arm];
        lp.add_eq(std::move(row), j.p[arm][y]);
    }

    if (theta == 0.0) {
        // zero information <=> the conditionals do not depend on x
        lp.add_eq({1, -1, 0, 0}, 0.0);
        lp.add_eq({0, 0, 1, -1}, 0.0);
        return clamp01(plain_minmax(lp));
    }

    ConvexConstraint cc{
        [&j](const std::vector<double>& v) { return smoothed_arm_mi(j, v); },
        theta};
    return clamp01(run_minmax(lp, cc));
}

Interval entropy_ate(const BinaryJoint& j, double theta) {
    const Interval arm1 = entropy_do_bound(j, 1, theta);
    const Interval arm0 = entropy_do_bound(j, 0, theta);
    return clip_to_ceiling(
               Interval(arm1.lower - arm0.upper, arm1.upper - arm0.lower),
               Query::Ate)
        .interval;
}

Interval entropy_pns(const BinaryJoint& j, double theta) {
    check_theta(theta);
    ConfResponseProgram prog = conf_response_program(j);
    prog.lp.objective = ConfResponseProgram::pns_objective();

    if (theta == 0.0) {
        // independence of X and (Y0, Y1), linear because P(X) is pinned
        const double px0 = j.px(0), px1 = j.px(1);
        for (int pair = 0; pair < 4; ++pair) {
            std::vector<double> row(8, 0.0);
            row[2 * pair] = px1;       // q(y1, y0, x=0) P(X=1)
            row[2 * pair + 1] = -px0;  //   = q(y1, y0, x=1) P(X=0)
            prog.lp.add_eq(std::move(row), 0.0);
        }
        return clamp01(plain_minmax(prog.lp));
    }

    ConvexConstraint cc{
        [](const std::vector<double>& v) { return smoothed_response_mi(v); },
        theta};
    return clamp01(run_minmax(prog.lp, cc));
}

}  // namespace causalbound
