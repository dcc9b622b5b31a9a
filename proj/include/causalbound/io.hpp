// Artifact formats shared by the sweep pipeline: dataset CSVs, ground-truth
// sidecars, the sweep manifest, the per-run bounds table and the aggregated
// report tables.  Everything written here is deterministic byte for byte
// (runtime columns excepted, by design).
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "causalbound/core.hpp"
#include "causalbound/metrics.hpp"
#include "causalbound/scenarios.hpp"

namespace causalbound {

// Anything filesystem- or format-related: missing files, unwritable paths,
// malformed CSV/JSON.  The CLI maps this to its IO exit code, distinct from
// spec rejections.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Shortest decimal text that strtod parses back to exactly the same double.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// Dataset CSV: header `unit_id,z,x,y` (the z column only with an instrument),
// one unit per row, LF line endings.

void write_dataset_csv(const Dataset& d, const std::filesystem::path& path);

// The outcome type is inferred from the values unless `force` is given; a
// continuous column that happens to land on {0,1} everywhere (saturating
// link functions do this) must be re-tagged by the caller via `force`.
Dataset read_dataset_csv(const std::filesystem::path& path,
                         std::optional<OutcomeType> force = std::nullopt);

// ---------------------------------------------------------------------------
// Ground-truth sidecar, one JSON document per simulation.

struct TruthRecord {
    int j = 0;
    Scenario scenario = Scenario::BinaryConf;
    std::uint64_t seed = 0;  // the simulation's derived stream seed
    double true_ate = 0.0;
    std::optional<double> true_pns;
    StructuralParams params;
};

void write_truth_json(const TruthRecord& t, const std::filesystem::path& path);
TruthRecord read_truth_json(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Sweep manifest: what was simulated, with the derived per-simulation seeds
// so any single simulation can be replayed in isolation.

struct ManifestEntry {
    int j = 0;
    std::string dataset;  // file names relative to the manifest's directory
    std::string truth;
    std::uint64_t seed = 0;
};

struct Manifest {
    Scenario scenario = Scenario::BinaryConf;
    int N = 0;
    int n = 0;
    std::uint64_t master_seed = 0;
    bool independent_pns_coupling = false;
    std::vector<ManifestEntry> entries;  // may be an entropy-level subset
};

void write_manifest_json(const Manifest& m, const std::filesystem::path& path);
Manifest read_manifest_json(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Bounds table.  Columns: j, algorithm, query, lower, upper, status
// (ok | degenerate | failure), reason, runtime_seconds, theta, thetaerror.
// Failure rows leave the bound columns empty; unset optionals stay empty.

struct BoundsRow {
    int j = 0;
    BoundOutcome outcome;
};

void write_bounds_csv(const std::vector<BoundsRow>& rows,
                      const std::filesystem::path& path);
std::vector<BoundsRow> read_bounds_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Report tables.

// metrics.csv: one row per (query, algorithm) with the five headline metrics
// in report order (net width ascending within a query); unset metrics print
// N/A.  Reading groups rows back into one report per query, in file order.
void write_metrics_csv(const std::vector<MetricsReport>& reports,
                       const std::filesystem::path& path);
std::vector<MetricsReport> read_metrics_csv(const std::filesystem::path& path);

// best.csv: per simulation and query, the winning algorithm next to the
// observable features of that dataset.  Instrument columns stay empty
// without z; the algorithm stays empty when nothing qualified.
struct BestRow {
    int j = 0;
    Query query = Query::Ate;
    std::optional<std::string> algorithm;
    DatasetFeatures features;
};

void write_best_csv(const std::vector<BestRow>& rows,
                    const std::filesystem::path& path);

}  // namespace causalbound
