// Closed-form bounds and confidence intervals: Manski's worst-case ATE
// bounds, the Tian-Pearl PNS envelope, and OLS / instrumental-variable
// point estimates dressed up as intervals via normal-quantile CIs.
#pragma once

#include "causalbound/core.hpp"

namespace causalbound {

// Worst-case ATE bounds from the observed joint alone.  Width is exactly 1.
Interval manski_ate(const BinaryJoint& j);

// [0, P(X=1,Y=1) + P(X=0,Y=0)] for the probability of necessity and
// sufficiency.
Interval tianpearl_pns(const BinaryJoint& j);

// Two-sided normal CI around the OLS slope of y on x (intercept included).
// level is the confidence level in (0, 1).  Throws data_error when the
// treatment column has no variance.
Interval ols_ate_ci(const Dataset& d, double level);

// Wald-form instrumental-variable estimate beta = cov(z,y)/cov(z,x) with the
// usual IV variance based on second-stage residuals y - alpha - beta*x
// (original x, not first-stage fits).  Throws data_error
// ("weak/irrelevant instrument") when |cov(z,x)| < 1e-12.
Interval tsls_ate_ci(const Dataset& d, double level);

// Standard normal quantile, accurate to 1e-8 (rational approximation plus
// one Halley refinement).  p must lie strictly inside (0, 1).
double normal_quantile(double p);

}  // namespace causalbound
