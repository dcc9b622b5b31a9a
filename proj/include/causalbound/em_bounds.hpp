// Bounds from repeated EM fits of canonical structural models.  Every
// restart fits a model that is compatible with the observed distribution;
// the spread of the causal query across restarts approximates the sharp
// interval from the inside.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "causalbound/core.hpp"

namespace causalbound {

enum class ScmDag { Conf, Iv };

// Latent state indexing mirrors the response-type vectors elsewhere:
//   Conf: u = 4*y1 + 2*y0 + x_assignment          (8 states)
//   Iv:   u = 4*c + r, c = 2*x_{z=0} + x_{z=1},
//         r = 2*y0 + y1                            (16 states)
// The structural maps are deterministic given u (and z for Iv).
struct CanonicalScm {
    ScmDag dag = ScmDag::Conf;
    std::vector<double> p_u;
    std::optional<double> pz1;  // Iv only, estimated from data and held fixed
};

struct EmConfig {
    int runs = 30;
    int maxiter = 100;
    double loglik_tol = 1e-6;  // absolute improvement, nats per observation
    std::uint64_t seed = 0;
    // Dirichlet concentration for restart draws.  Values below 1 push the
    // initial within-cell splits toward the extremes, which is what lets a
    // few dozen restarts reach near the edges of the sharp interval.
    double init_alpha = 0.1;
    // Restart fan-out: 0 uses the hardware concurrency, 1 keeps restarts on
    // the calling thread.  The result is the same either way; restarts are
    // seeded individually and reduced after all of them finish.
    int max_parallel = 0;
};

struct EmResult {
    std::vector<double> p_u;
    std::vector<double> loglik;  // one entry per iteration, non-decreasing
};

// One EM fit from the given initial latent distribution.  The E-step zeroes
// latent states inconsistent with each observed cell and splits each cell's
// weight among the rest in proportion to the current p_u; aggregated cell
// weights drive everything, so equal observations share responsibilities.
EmResult em_run(const BinaryJoint& j, std::vector<double> init,
                const EmConfig& cfg);
EmResult em_run(const IvJoint& j, std::vector<double> init,
                const EmConfig& cfg);

// ATE = P(responder) - P(contrarian), PNS = P(responder), read off p_u.
double scm_query(const CanonicalScm& m, Query q);

// Min/max of the query over cfg.runs EM fits from Dirichlet(init_alpha)
// initializations seeded by hash64(cfg.seed, run); clipped to the ceiling.
Interval emcc_bounds(const BinaryJoint& j, Query q, const EmConfig& cfg);
Interval emcc_bounds(const IvJoint& j, Query q, const EmConfig& cfg);

}  // namespace causalbound
