#include "causalbound/lp_bounds.hpp"

#include <cmath>

namespace causalbound {

namespace {

Interval minmax(const LinearProgram& lp, const char* infeasible_msg) {
    const LpSolution lo = solve_lp(lp, OptSense::Minimize);
    if (lo.status == LpStatus::Infeasible) throw data_error(infeasible_msg);
    const LpSolution hi = solve_lp(lp, OptSense::Maximize);
    if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
        throw data_error("linear program did not solve");
    return {lo.value, hi.value};
}

}  // namespace

std::vector<double> ConfResponseProgram::ate_objective() {
    // (q4 + q5) - (q2 + q3): responders minus contrarians
    return {0, 0, -1, -1, 1, 1, 0, 0};
}

std::vector<double> ConfResponseProgram::pns_objective() {
    return {0, 0, 0, 0, 1, 1, 0, 0};
}

ConfResponseProgram conf_response_program(const BinaryJoint& j) {
    ConfResponseProgram prog;
    prog.lp = LinearProgram(8);
    for (auto& b : prog.lp.bounds) b = {0.0, 1.0};
    prog.lp.add_eq({1, 1, 1, 1, 1, 1, 1, 1}, 1.0);
    // Observed cell (x, y) collects the q[i] with x(i) = x and y_x(i) = y;
    // under x = 0 the realised outcome is y0, under x = 1 it is y1.
    prog.lp.add_eq({1, 0, 0, 0, 1, 0, 0, 0}, j.p[0][0]);  // q0 + q4
    prog.lp.add_eq({0, 0, 1, 0, 0, 0, 1, 0}, j.p[0][1]);  // q2 + q6
    prog.lp.add_eq({0, 1, 0, 1, 0, 0, 0, 0}, j.p[1][0]);  // q1 + q3
    prog.lp.add_eq({0, 0, 0, 0, 0, 1, 0, 1}, j.p[1][1]);  // q5 + q7
    return prog;
}

std::vector<double> IvResponseProgram::ate_objective() {
    std::vector<double> c(16, 0.0);
    for (int comp = 0; comp < 4; ++comp) {
        c[4 * comp + 1] = 1.0;   // responder (y0, y1) = (0, 1)
        c[4 * comp + 2] = -1.0;  // contrarian (1, 0)
    }
    return c;
}

std::vector<double> IvResponseProgram::pns_objective() {
    std::vector<double> c(16, 0.0);
    for (int comp = 0; comp < 4; ++comp) c[4 * comp + 1] = 1.0;
    return c;
}

IvResponseProgram iv_response_program(const IvJoint& j) {
    IvResponseProgram prog;
    prog.lp = LinearProgram(16);
    for (auto& b : prog.lp.bounds) b = {0.0, 1.0};
    prog.lp.add_eq(std::vector<double>(16, 1.0), 1.0);
    for (int z = 0; z < 2; ++z) {
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                std::vector<double> row(16, 0.0);
                for (int comp = 0; comp < 4; ++comp) {
                    const int x_at_z = z == 0 ? (comp >> 1) : (comp & 1);
                    if (x_at_z != x) continue;
                    for (int r = 0; r < 4; ++r) {
                        const int y_at_x = x == 0 ? (r >> 1) : (r & 1);
                        if (y_at_x == y) row[4 * comp + r] = 1.0;
                    }
                }
                prog.lp.add_eq(std::move(row), j.arm[z].p[x][y]);
            }
        }
    }
    return prog;
}

Interval conf_lp_bounds(const BinaryJoint& j, Query q) {
    ConfResponseProgram prog = conf_response_program(j);
    prog.lp.objective = q == Query::Ate ? ConfResponseProgram::ate_objective()
                                        : ConfResponseProgram::pns_objective();
    return minmax(prog.lp, "data inconsistent with response-type model");
}

Interval iv_lp_bounds(const IvJoint& j, Query q) {
    IvResponseProgram prog = iv_response_program(j);
    prog.lp.objective = q == Query::Ate ? IvResponseProgram::ate_objective()
                                        : IvResponseProgram::pns_objective();
    return minmax(prog.lp, "data inconsistent with IV model");
}

// ---------------------------------------------------------------------------
// Continuous-outcome IV bounds

namespace {

// Conditional moments per z-arm: P(X = x | Z = z) and E[Y 1{X = x} | Z = z].
struct IvMoments {
    double px_given_z[2][2];   // [z][x]
    double ey1x_given_z[2][2];  // [z][x]
};

IvMoments iv_moments(const Dataset& d) {
    if (!d.has_instrument())
        throw std::invalid_argument("instrumental bounds require a z column");
    double nz[2] = {0, 0};
    double nx[2][2] = {{0, 0}, {0, 0}};
    double sy[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < d.size(); ++i) {
        const int z = (*d.z)[i], x = d.x[i];
        nz[z] += 1.0;
        nx[z][x] += 1.0;
        sy[z][x] += d.y[i];
    }
    if (nz[0] == 0.0 || nz[1] == 0.0) throw data_error("degenerate instrument arm");
    IvMoments m;
    for (int z = 0; z < 2; ++z)
        for (int x = 0; x < 2; ++x) {
            m.px_given_z[z][x] = nx[z][x] / nz[z];
            m.ey1x_given_z[z][x] = sy[z][x] / nz[z];
        }
    return m;
}

// 12 variables: mu_c at index c, w_{c,x} at index 4 + 2c + x.
LinearProgram continuous_iv_program(const IvMoments& m) {
    LinearProgram lp(12);
    for (int c = 0; c < 4; ++c) {
        lp.bounds[c] = {0.0, 1.0};
        for (int x = 0; x < 2; ++x) {
            lp.bounds[4 + 2 * c + x] = {0.0, 1.0};
            std::vector<double> row(12, 0.0);  // w_{c,x} - mu_c <= 0
            row[4 + 2 * c + x] = 1.0;
            row[c] = -1.0;
            lp.add_ineq(std::move(row), 0.0);
        }
    }
    lp.add_eq({1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0}, 1.0);
    for (int z = 0; z < 2; ++z) {
        for (int x = 0; x < 2; ++x) {
            std::vector<double> mass(12, 0.0), outc(12, 0.0);
            for (int c = 0; c < 4; ++c) {
                const int x_at_z = z == 0 ? (c >> 1) : (c & 1);
                if (x_at_z != x) continue;
                mass[c] = 1.0;
                outc[4 + 2 * c + x] = 1.0;
            }
            lp.add_eq(std::move(mass), m.px_given_z[z][x]);
            lp.add_eq(std::move(outc), m.ey1x_given_z[z][x]);
        }
    }
    return lp;
}

std::vector<double> arm_objective(int arm) {
    std::vector<double> c(12, 0.0);
    for (int comp = 0; comp < 4; ++comp) c[4 + 2 * comp + arm] = 1.0;
    return c;
}

}  // namespace

Interval zhangbareinboim_arm(const Dataset& d, int arm) {
    if (arm != 0 && arm != 1) throw std::invalid_argument("arm must be 0 or 1");
    LinearProgram lp = continuous_iv_program(iv_moments(d));
    lp.objective = arm_objective(arm);
    return minmax(lp, "data inconsistent with IV model");
}

Interval zhangbareinboim_ate(const Dataset& d, bool joint) {
    const IvMoments m = iv_moments(d);
    if (joint) {
        LinearProgram lp = continuous_iv_program(m);
        lp.objective = arm_objective(1);
        const std::vector<double> w0 = arm_objective(0);
        for (std::size_t i = 0; i < 12; ++i) lp.objective[i] -= w0[i];
        return minmax(lp, "data inconsistent with IV model");
    }
    LinearProgram lp = continuous_iv_program(m);
    lp.objective = arm_objective(1);
    const Interval e1 = minmax(lp, "data inconsistent with IV model");
    lp.objective = arm_objective(0);
    const Interval e0 = minmax(lp, "data inconsistent with IV model");
    return {e1.lower - e0.upper, e1.upper - e0.lower};
}

}  // namespace causalbound
