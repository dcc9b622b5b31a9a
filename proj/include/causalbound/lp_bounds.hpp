// Sharp bounds via linear programming over canonical response types.
//
// Variable conventions, used consistently here, in the entropy module and in
// the EM module:
//   conf program: q[i], i = 4*y1 + 2*y0 + x       (8 variables)
//   iv program:   m[4*c + r], c = 2*x_{z=0} + x_{z=1}, r = 2*y0 + y1
// Response types (y0, y1): (0,0) never-recover, (0,1) responder,
// (1,0) contrarian, (1,1) always-recover.
#pragma once

#include "causalbound/core.hpp"
#include "causalbound/solver.hpp"

namespace causalbound {

// Feasible set of response-type distributions compatible with an observed
// (X, Y) joint; objective vectors select the query.
struct ConfResponseProgram {
    LinearProgram lp;  // 8 vars, bounds [0,1], five equality rows
    static std::vector<double> ate_objective();
    static std::vector<double> pns_objective();
};
ConfResponseProgram conf_response_program(const BinaryJoint& j);

// Same idea with a binary instrument: 16 compliance x response masses tied
// to both conditional (X, Y | Z) tables.
struct IvResponseProgram {
    LinearProgram lp;  // 16 vars
    static std::vector<double> ate_objective();
    static std::vector<double> pns_objective();
};
IvResponseProgram iv_response_program(const IvJoint& j);

// Sharp interval for the query under the confounded DAG.
Interval conf_lp_bounds(const BinaryJoint& j, Query q);

// Sharp interval under the IV DAG.  Sampling noise can push the two z-arm
// tables outside the IV-compatible region; that surfaces as
// data_error("data inconsistent with IV model").
Interval iv_lp_bounds(const IvJoint& j, Query q);

// Bounds on E[Y_x] for a continuous outcome in [0,1] with a binary
// instrument, via masses mu_c per compliance type and auxiliary products
// w_{c,x} = mu_c * E[Y_x | c] with 0 <= w <= mu.  Exact: the objective and
// all constraints touch the outcome law only through these products.
Interval zhangbareinboim_arm(const Dataset& d, int arm);

// ATE interval.  Default composes the two arm intervals
// [lb1 - ub0, ub1 - lb0]; joint = true optimises E[Y_1] - E[Y_0] in one
// program over shared masses, which can only tighten the interval.
Interval zhangbareinboim_ate(const Dataset& d, bool joint = false);

}  // namespace causalbound
