#include "causalbound/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace causalbound {

void LinearProgram::add_eq(std::vector<double> coeffs, double rhs) {
    if (coeffs.size() != nvars)
        throw std::invalid_argument("constraint length does not match nvars");
    eq.emplace_back(std::move(coeffs), rhs);
}

void LinearProgram::add_ineq(std::vector<double> coeffs, double rhs) {
    if (coeffs.size() != nvars)
        throw std::invalid_argument("constraint length does not match nvars");
    ineq.emplace_back(std::move(coeffs), rhs);
}

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-9;
constexpr double kFeasEps = 1e-9;
constexpr int kMaxPivots = 20000;

// Full-tableau simplex state in standard form (all variables >= 0, equality
// rows, rhs >= 0).  Column layout: structural | slack | artificial | rhs.
struct Tableau {
    std::size_t rows = 0, cols = 0;       // cols excludes the rhs column
    std::vector<std::vector<double>> a;   // rows x (cols + 1)
    std::vector<double> cost;             // cols + 1; last entry = -objective
    std::vector<int> basis;               // basic column per row
    std::size_t art_begin = 0;            // first artificial column

    double& rhs(std::size_t r) { return a[r][cols]; }

    void pivot(std::size_t r, std::size_t c) {
        const double piv = a[r][c];
        for (double& v : a[r]) v /= piv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0.0) continue;
            const double f = a[i][c];
            for (std::size_t j = 0; j <= cols; ++j) a[i][j] -= f * a[r][j];
            a[i][c] = 0.0;
        }
        if (cost[c] != 0.0) {
            const double f = cost[c];
            for (std::size_t j = 0; j <= cols; ++j) cost[j] -= f * a[r][j];
            cost[c] = 0.0;
        }
        basis[r] = static_cast<int>(c);
    }

    // Bland's rule: entering = lowest-index column with negative reduced
    // cost; leaving = among minimum-ratio rows, the one whose basic variable
    // has the lowest index.  Returns Optimal/Unbounded/IterationLimit.
    LpStatus iterate(bool allow_artificial) {
        for (int it = 0; it < kMaxPivots; ++it) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j) {
                if (!allow_artificial && j >= art_begin) break;
                if (cost[j] < -kCostEps) { enter = j; break; }
            }
            if (enter == cols) return LpStatus::Optimal;

            std::size_t leave = rows;
            double best = 0.0;
            for (std::size_t r = 0; r < rows; ++r) {
                if (a[r][enter] <= kPivotEps) continue;
                const double ratio = rhs(r) / a[r][enter];
                if (leave == rows || ratio < best - 1e-12 ||
                    (std::abs(ratio - best) <= 1e-12 && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == rows) return LpStatus::Unbounded;
            pivot(leave, enter);
        }
        return LpStatus::IterationLimit;
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, OptSense sense) {
    const std::size_t n = lp.nvars;
    if (lp.objective.size() != n || lp.bounds.size() != n)
        throw std::invalid_argument("malformed linear program");
    for (const auto& [lo, hi] : lp.bounds) {
        if (!std::isfinite(lo) || hi < lo)
            throw std::invalid_argument("variable bounds must satisfy finite lo <= hi");
    }

    // Shift variables to u = v - lo >= 0 and collect rows.  Finite upper
    // bounds become plain inequality rows; the problems here are small
    // enough that a bounded-variable simplex is not worth the complexity.
    struct Row {
        std::vector<double> a;
        double b;
        bool is_eq;
    };
    std::vector<Row> rows;
    auto shift_rhs = [&](const std::vector<double>& a, double b) {
        double s = b;
        for (std::size_t i = 0; i < n; ++i) s -= a[i] * lp.bounds[i].first;
        return s;
    };
    for (const auto& [a, b] : lp.eq) rows.push_back({a, shift_rhs(a, b), true});
    for (const auto& [a, b] : lp.ineq) rows.push_back({a, shift_rhs(a, b), false});
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isfinite(lp.bounds[i].second)) {
            std::vector<double> a(n, 0.0);
            a[i] = 1.0;
            rows.push_back({std::move(a), lp.bounds[i].second - lp.bounds[i].first,
                            false});
        }
    }

    const std::size_t m = rows.size();
    // Count slacks, then lay out columns and build the tableau with rhs >= 0.
    std::size_t nslack = 0;
    for (const Row& r : rows)
        if (!r.is_eq) ++nslack;

    Tableau t;
    t.rows = m;
    t.art_begin = n + nslack;
    t.cols = n + nslack + m;  // worst case: one artificial per row
    t.a.assign(m, std::vector<double>(t.cols + 1, 0.0));
    t.cost.assign(t.cols + 1, 0.0);
    t.basis.assign(m, -1);

    std::size_t slack_at = n, art_at = t.art_begin, arts_used = 0;
    for (std::size_t r = 0; r < m; ++r) {
        double sgn = rows[r].b < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) t.a[r][j] = sgn * rows[r].a[j];
        t.rhs(r) = sgn * rows[r].b;
        bool needs_artificial = true;
        if (!rows[r].is_eq) {
            t.a[r][slack_at] = sgn;  // negative slack coefficient => surplus
            if (sgn > 0.0) {
                t.basis[r] = static_cast<int>(slack_at);
                needs_artificial = false;
            }
            ++slack_at;
        }
        if (needs_artificial) {
            t.a[r][art_at] = 1.0;
            t.basis[r] = static_cast<int>(art_at);
            ++art_at;
            ++arts_used;
        }
    }

    LpSolution out;

    // Phase 1: minimise the sum of artificials.
    if (arts_used > 0) {
        for (std::size_t j = t.art_begin; j < art_at; ++j) t.cost[j] = 1.0;
        for (std::size_t r = 0; r < m; ++r) {
            const std::size_t b = static_cast<std::size_t>(t.basis[r]);
            if (b >= t.art_begin)
                for (std::size_t j = 0; j <= t.cols; ++j) t.cost[j] -= t.a[r][j];
        }
        const LpStatus ph1 = t.iterate(/*allow_artificial=*/true);
        if (ph1 == LpStatus::IterationLimit) {
            out.status = ph1;
            return out;
        }
        if (-t.cost[t.cols] > kFeasEps) {
            out.status = LpStatus::Infeasible;
            return out;
        }
        // Pivot leftover artificials out of the basis; a row that offers no
        // pivot column is redundant and is blanked.
        for (std::size_t r = 0; r < m; ++r) {
            if (static_cast<std::size_t>(t.basis[r]) < t.art_begin) continue;
            std::size_t c = t.art_begin;
            for (std::size_t j = 0; j < t.art_begin; ++j)
                if (std::abs(t.a[r][j]) > kPivotEps) { c = j; break; }
            if (c < t.art_begin) {
                t.pivot(r, c);
            } else {
                std::fill(t.a[r].begin(), t.a[r].end(), 0.0);
                t.a[r][static_cast<std::size_t>(t.basis[r])] = 1.0;
            }
        }
    }

    // Phase 2 with the real objective (internally minimising).
    const double flip = sense == OptSense::Maximize ? -1.0 : 1.0;
    std::fill(t.cost.begin(), t.cost.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) t.cost[j] = flip * lp.objective[j];
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = static_cast<std::size_t>(t.basis[r]);
        if (b < t.cols && t.cost[b] != 0.0) {
            const double f = t.cost[b];
            for (std::size_t j = 0; j <= t.cols; ++j) t.cost[j] -= f * t.a[r][j];
        }
    }
    const LpStatus ph2 = t.iterate(/*allow_artificial=*/false);
    if (ph2 != LpStatus::Optimal) {
        out.status = ph2;
        return out;
    }

    out.status = LpStatus::Optimal;
    out.point.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = static_cast<std::size_t>(t.basis[r]);
        if (b < n) out.point[b] = t.rhs(r);
    }
    for (std::size_t i = 0; i < n; ++i) out.point[i] += lp.bounds[i].first;
    out.value = 0.0;
    for (std::size_t i = 0; i < n; ++i) out.value += lp.objective[i] * out.point[i];
    return out;
}

double lp_residual(const LinearProgram& lp, const std::vector<double>& v) {
    double worst = 0.0;
    auto dot = [&](const std::vector<double>& a) {
        double s = 0.0;
        for (std::size_t i = 0; i < lp.nvars; ++i) s += a[i] * v[i];
        return s;
    };
    for (const auto& [a, b] : lp.eq) worst = std::max(worst, std::abs(dot(a) - b));
    for (const auto& [a, b] : lp.ineq) worst = std::max(worst, dot(a) - b);
    for (std::size_t i = 0; i < lp.nvars; ++i) {
        worst = std::max(worst, lp.bounds[i].first - v[i]);
        if (std::isfinite(lp.bounds[i].second))
            worst = std::max(worst, v[i] - lp.bounds[i].second);
    }
    return worst;
}

std::vector<double> numeric_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& v) {
    constexpr double h = 1e-7;
    std::vector<double> grad(v.size());
    std::vector<double> probe = v;
    for (std::size_t i = 0; i < v.size(); ++i) {
        probe[i] = v[i] + h;
        const double up = f(probe);
        probe[i] = v[i] - h;
        const double dn = f(probe);
        probe[i] = v[i];
        grad[i] = (up - dn) / (2.0 * h);
    }
    return grad;
}

LpSolution solve_convex_cut(LinearProgram lp, const ConvexConstraint& cc,
                            OptSense sense, double tol, int max_cuts) {
    for (int k = 0; k <= max_cuts; ++k) {
        LpSolution sol = solve_lp(lp, sense);
        if (sol.status != LpStatus::Optimal) {
            sol.cuts = k;
            return sol;
        }
        const double g = cc.evaluate(sol.point);
        if (g <= cc.bound + tol) {
            sol.cut_gap = std::max(0.0, g - cc.bound);
            sol.cuts = k;
            return sol;
        }
        // Supporting hyperplane of g at the optimum; since g is convex the
        // linearisation never cuts off a feasible point.
        std::vector<double> grad = numeric_gradient(cc.evaluate, sol.point);
        double rhs = cc.bound - g;
        for (std::size_t i = 0; i < lp.nvars; ++i) rhs += grad[i] * sol.point[i];
        lp.add_ineq(std::move(grad), rhs);
    }
    LpSolution out;
    out.status = LpStatus::IterationLimit;
    out.cuts = max_cuts;
    return out;
}

}  // namespace causalbound
