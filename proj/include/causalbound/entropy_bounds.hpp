// Bounds under a budget on confounding, expressed as a cap (in bits) on the
// mutual information between treatment and the latent counterfactual
// outcome.  theta = 0 forces independence (point identification); theta >= 1
// is never binding for a binary treatment, recovering the unconstrained
// response-type LP.
#pragma once

#include <array>

#include "causalbound/core.hpp"

namespace causalbound {

enum class ThetaSource { Fixed, TrueTheta, RandomTheta, UnderspecifyTheta };

// Entropy budget in bits, tagged with how it was chosen; the tag travels
// into run records so sweeps can report the oracle/misspecified variants.
struct Theta {
    double value = 0.0;
    ThetaSource source = ThetaSource::Fixed;
};

// Budget equal to the actual entropy of a binary confounder with P(U=1)=p_u.
Theta true_theta(double p_u);

// Interval for P(Y=1 | do(X=arm)).  Decision variables are the conditionals
// b[y][x] = P(Y_{do(arm)} = y | X = x); the observed arm column is pinned by
// the data, the opposite column is free up to the information budget.
// Throws data_error("treatment arm has no mass") when P(X=arm) = 0.
Interval entropy_do_bound(const BinaryJoint& j, int arm, double theta);

// [lb1 - ub0, ub1 - lb0] from the two arm programs, clipped to [-1, 1].
Interval entropy_ate(const BinaryJoint& j, double theta);

// Interval for P(responder) over response-type distributions q whose mutual
// information I(X; (Y0, Y1)) stays within theta.  The reference product law
// is recomputed from q's own marginals, so the constraint is the exact
// channel information, not a fixed-reference KL.
Interval entropy_pns(const BinaryJoint& j, double theta);

// Constraint functions, exposed for verification: mutual information in bits
// carried by the arm-program conditionals b (flattened as b[2*y + x]) and by
// a response-type mass vector q (indexed as in lp_bounds.hpp).  Probability
// arguments inside logarithms are floored at 1e-12.
double arm_program_mi(const BinaryJoint& j, const std::array<double, 4>& b);
double response_mi(const std::array<double, 8>& q);

}  // namespace causalbound
