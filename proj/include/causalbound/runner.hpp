// Sweep orchestration: algorithm naming and applicability, per-run budget
// resolution, the (j, algorithm) worker pool and the simulate / bound /
// report stages behind the command-line front-end.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "causalbound/core.hpp"
#include "causalbound/em_bounds.hpp"
#include "causalbound/entropy_bounds.hpp"
#include "causalbound/io.hpp"
#include "causalbound/metrics.hpp"
#include "causalbound/scenarios.hpp"

namespace causalbound {

// A run request that cannot be executed as written: unknown algorithm names,
// algorithms inapplicable to the scenario, conflicts with an existing
// manifest.  The CLI maps this to its spec-error exit code, distinct from IO
// failures.
struct spec_error : std::runtime_error {
    explicit spec_error(const std::string& what) : std::runtime_error(what) {}
};

enum class AlgoFamily {
    Manski,
    TianPearl,
    Ols,
    Tsls,
    CausalOptim,
    AutoBound,
    ZaffalonBounds,
    EntropyBounds,
    ZhangBareinboim,
};

const char* family_name(AlgoFamily f);  // "manski", "OLS", "2SLS", ...

// Families that operate on a binary outcome (and therefore need --binned on
// the continuous scenarios).
bool binary_only(AlgoFamily f);

// One requested algorithm instance.  The display name encodes everything:
// query prefix, family, parameter suffix and the binning marker, e.g.
// `ATE_OLS-0.95`, `PNS_tianpearl`, `ATE_entropybounds-0.80--binned`.
struct AlgorithmSpec {
    Query query = Query::Ate;
    AlgoFamily family = AlgoFamily::Manski;
    std::optional<double> level;           // OLS / 2SLS confidence level
    std::optional<ThetaSource> theta;      // entropybounds budget source
    std::optional<double> theta_value;     // fixed budgets only
    bool binned = false;

    std::string name() const;
};

// Inverse of AlgorithmSpec::name.  Throws spec_error with a descriptive
// message for unknown families, malformed parameters or a query the family
// does not support.  An entropybounds name without a parameter parses with
// the budget left unset so the caller can supply one.
AlgorithmSpec parse_algorithm(const std::string& name);

// The suite a scenario runs when none is requested, mirroring the published
// sweeps: instrumented scenarios swap OLS for 2SLS, continuous scenarios bin
// every distribution-based algorithm and drop the oracle budget, and the
// entropy-grid scenario keeps only the worst-case baselines next to
// entropybounds-trueTheta.
std::vector<AlgorithmSpec> default_suite(Scenario s);

struct RunSpec {
    SimulationConfig sim;
    // unset -> default_suite(scenario); an explicitly empty list runs no
    // algorithms (bounds and reports come out empty but valid)
    std::optional<std::vector<AlgorithmSpec>> algorithms;
    std::optional<int> level;  // restrict BinaryEntropyConf to one level
    std::filesystem::path out_dir = "out";
    int jobs = 1;
    // Template for zaffalonbounds; the seed field is ignored because every
    // run derives its own stream.  With jobs > 1 the restart fan-out is
    // forced to 1 so the two pools do not multiply.
    EmConfig emcc;
};

// The algorithm list the spec actually runs.
std::vector<AlgorithmSpec> resolved_algorithms(const RunSpec& spec);

// Every reason the requested runs cannot be executed, empty when the spec is
// fine.  Collected up front so a sweep never dies halfway through.
std::vector<std::string> incompatibilities(const RunSpec& spec);

// One algorithm against one dataset.  Binarizes first when requested,
// resolves the entropy budget (seeded by master seed, algorithm name and
// simulation index), clips to the query ceiling and converts data_error
// into a Failure outcome.  Runtime covers the bounding call alone.
BoundOutcome run_algorithm(const AlgorithmSpec& a, const Dataset& d,
                           const TruthRecord& truth, std::uint64_t master_seed,
                           const EmConfig& emcc);

// Pipeline stages.  Each works through files under spec.out_dir so that a
// staged invocation and a combined `run` produce identical artifacts.
Manifest cmd_simulate(const RunSpec& spec);
std::vector<BoundsRow> cmd_bound(const RunSpec& spec);

struct Report {
    std::vector<MetricsReport> metrics;  // ATE first, then PNS
    std::vector<BestRow> best;
    std::string markdown;
};

Report cmd_report(const RunSpec& spec);
Report cmd_run(const RunSpec& spec);

}  // namespace causalbound
