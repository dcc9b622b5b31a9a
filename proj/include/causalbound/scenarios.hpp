// Synthetic data-generating processes: five families of randomized structural
// causal models with known ground-truth ATE (and PNS where the outcome is
// binary), plus the deterministic random stream they draw from.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "causalbound/core.hpp"

namespace causalbound {

enum class Scenario { BinaryConf, BinaryIv, ContConf, ContIv, BinaryEntropyConf };

const char* scenario_name(Scenario s);  // "BinaryConf", "BinaryIV", ...
std::optional<Scenario> parse_scenario(const std::string& name);

// True for the scenarios whose outcome is a continuous value in [0, 1].
bool continuous_outcome(Scenario s);

// True when the scenario has a binary instrument column.
bool instrumented(Scenario s);

// BinaryEntropyConf partitions the sweep into ten confounder-entropy levels
// (H_target = 0.05 + 0.1 * level), each an equal block of consecutive
// simulation indices.  Exposed so sweeps can be restricted to one level.
int entropy_level(int j, int N);

struct SimulationConfig {
    Scenario scenario = Scenario::BinaryConf;
    int N = 2000;  // number of simulated causal models in a sweep
    int n = 500;   // unit-level observations per simulation
    std::uint64_t master_seed = 0;
    // The PNS ground truth couples the two counterfactual outcome draws of a
    // unit through one shared uniform (so PNS_i = max(0, p1_i - p0_i)).  The
    // flag switches to independent coins (p1_i * (1 - p0_i)) for sensitivity
    // checks; it changes the recorded truth, never the dataset.
    bool independent_pns_coupling = false;
};

// Deterministic random stream on top of mt19937_64.  Uniforms take the top
// 53 bits; normals use Box-Muller (cosine branch, two uniforms per variate,
// nothing cached) so the draw layout never depends on call history.  The
// standard <random> distributions are implementation-defined, which would
// make fixed-seed datasets differ across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();  // [0, 1)
    double uniform(double a, double b);
    double normal();   // standard normal
    double normal(double mean, double sd);
    double half_normal(double scale);  // |N(0, scale^2)|
    double bimodal();                  // 1/2 N(1, 0.5^2) + 1/2 N(-1, 0.5^2)
    bool bern(double p);
    int pick(int n);  // uniform over {0, ..., n-1}

private:
    std::mt19937_64 engine_;
};

// Squashing functions F mapping the real line into [0,1].
enum class Squash { Sigmoid, HalfTanh, SoftplusRatio, ProbitCdf };

double squash(Squash f, double x);

// Feature transforms for the continuous scenarios.  The list is positional;
// tanh appears twice (ids 3 and 8), doubling its sampling weight.  mu is the
// sample mean of the transform inputs, used only by the shifted sigmoid.
inline constexpr int kTransformCount = 13;
double transform(int id, double x, double mu);

// Parameters of one simulated model.  Which optionals are populated depends
// on the scenario (binary vs continuous confounder, instrument present).
struct StructuralParams {
    double alpha_x = 0.0;
    double alpha_y = 0.0;
    double beta_ux = 0.0;
    double beta_uy = 0.0;
    double beta_xy = 0.0;  // swept deterministically across [-5, 5]
    std::optional<double> beta_zx;
    std::optional<double> p_u;      // binary confounder Bern(p_u)
    std::optional<double> sigma_u;  // continuous confounder N(0, sigma_u^2)
    std::optional<double> p_z;
    std::optional<double> sigma_x;  // global noise scales (continuous only)
    std::optional<double> sigma_y;
    Squash f_x = Squash::Sigmoid;
    Squash f_y = Squash::Sigmoid;
    std::optional<int> g_ux;  // transform ids (continuous only)
    std::optional<int> g_uy;
    std::optional<double> h_target;  // confounder entropy level in bits
};

struct SimulationRecord {
    int j = 0;
    Dataset dataset;
    double true_ate = 0.0;
    std::optional<double> true_pns;  // binary outcome scenarios only
    StructuralParams params;
};

// Draws the simulation-specific parameters for index j (1-based).  The draw
// order is fixed and documented in the implementation; it is part of the
// reproducibility contract.
StructuralParams sample_params(int j, const SimulationConfig& cfg, Rng& rng);

// Generates n units from fixed parameters and computes the ground truths.
// Exposed separately so a given model can be resampled for variance checks.
SimulationRecord realize(const StructuralParams& p, Scenario s, int n,
                         Rng& rng, bool independent_pns_coupling = false);

// Seed of simulation j's isolated stream, exactly as used by generate.
// Recorded in sweep manifests so a single simulation can be replayed.
std::uint64_t simulation_seed(int j, const SimulationConfig& cfg);

// Full pipeline for simulation j: seeds an isolated stream with
// hash64(master_seed, scenario id, j), samples parameters, realizes data.
// Generating j alone therefore reproduces exactly what a sweep produces.
SimulationRecord generate(int j, const SimulationConfig& cfg);

}  // namespace causalbound
