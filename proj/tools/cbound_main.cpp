// Command-line front-end: simulate scenario sweeps, run bounding suites and
// aggregate reports.  Configuration comes from an optional JSON document
// plus flags; flags win.  Exit codes: 0 success, 2 spec error, 3 IO error.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "causalbound/runner.hpp"

namespace {

namespace cb = causalbound;
using nlohmann::json;

// Everything the user can set, before precedence is applied.  Unset fields
// fall back to the manifest (bound/report) or the built-in defaults.
struct RawSpec {
    std::optional<std::string> scenario;
    std::optional<int> N;
    std::optional<int> n;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<std::string>> algos;
    std::optional<double> theta;
    std::optional<int> level;
    std::optional<bool> binned;
    std::optional<bool> independent_pns_coupling;
    std::optional<std::string> out;
    std::optional<int> jobs;
    std::optional<int> emcc_runs;
    std::optional<int> emcc_maxiter;
    std::optional<double> emcc_loglik_tol;
    std::optional<double> emcc_init_alpha;
    std::optional<int> emcc_max_parallel;
};

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

cb::Scenario scenario_or_throw(const std::string& name) {
    if (const std::optional<cb::Scenario> s = cb::parse_scenario(name))
        return *s;
    throw cb::spec_error("unknown scenario '" + name +
                         "' (expected BinaryConf, BinaryIV, ContConf, ContIV "
                         "or BinaryEntropyConf)");
}

template <typename T>
T config_value(const json& cfg, const char* key) {
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw cb::spec_error(std::string("config key '") + key + "': " +
                             e.what());
    }
}

void load_config(RawSpec& raw, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw cb::io_error("cannot read config " + path);
    json cfg;
    try {
        cfg = json::parse(f);
    } catch (const json::exception& e) {
        throw cb::spec_error("malformed config " + path + ": " + e.what());
    }
    if (!cfg.is_object())
        throw cb::spec_error("config " + path + " must be a JSON object");

    static const std::vector<std::string> known = {
        "scenario", "N",      "n",    "seed", "algos",
        "theta",    "level",  "binned", "independent_pns_coupling",
        "out",      "jobs",   "emcc"};
    for (const auto& item : cfg.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw cb::spec_error("unknown config key '" + item.key() + "'");
    }

    if (cfg.contains("scenario"))
        raw.scenario = config_value<std::string>(cfg, "scenario");
    if (cfg.contains("N")) raw.N = config_value<int>(cfg, "N");
    if (cfg.contains("n")) raw.n = config_value<int>(cfg, "n");
    if (cfg.contains("seed"))
        raw.seed = config_value<std::uint64_t>(cfg, "seed");
    if (cfg.contains("algos"))
        raw.algos = config_value<std::vector<std::string>>(cfg, "algos");
    if (cfg.contains("theta")) raw.theta = config_value<double>(cfg, "theta");
    if (cfg.contains("level")) raw.level = config_value<int>(cfg, "level");
    if (cfg.contains("binned"))
        raw.binned = config_value<bool>(cfg, "binned");
    if (cfg.contains("independent_pns_coupling"))
        raw.independent_pns_coupling =
            config_value<bool>(cfg, "independent_pns_coupling");
    if (cfg.contains("out")) raw.out = config_value<std::string>(cfg, "out");
    if (cfg.contains("jobs")) raw.jobs = config_value<int>(cfg, "jobs");

    if (cfg.contains("emcc")) {
        const json& em = cfg["emcc"];
        if (!em.is_object())
            throw cb::spec_error("config key 'emcc' must be an object");
        static const std::vector<std::string> em_known = {
            "runs", "maxiter", "loglik_tol", "init_alpha", "max_parallel"};
        for (const auto& item : em.items()) {
            if (std::find(em_known.begin(), em_known.end(), item.key()) ==
                em_known.end())
                throw cb::spec_error("unknown config key 'emcc." +
                                     item.key() + "'");
        }
        if (em.contains("runs")) raw.emcc_runs = config_value<int>(em, "runs");
        if (em.contains("maxiter"))
            raw.emcc_maxiter = config_value<int>(em, "maxiter");
        if (em.contains("loglik_tol"))
            raw.emcc_loglik_tol = config_value<double>(em, "loglik_tol");
        if (em.contains("init_alpha"))
            raw.emcc_init_alpha = config_value<double>(em, "init_alpha");
        if (em.contains("max_parallel"))
            raw.emcc_max_parallel = config_value<int>(em, "max_parallel");
    }
}

// Flags registered identically on every subcommand; whichever subcommand
// parsed is consulted for which flags were actually given.
struct FlagValues {
    std::string config;
    std::string scenario;
    int N = 0;
    int n = 0;
    std::uint64_t seed = 0;
    std::string algos;
    double theta = 0.0;
    int level = 0;
    bool binned = false;
    std::string out;
    int jobs = 0;
};

void add_flags(CLI::App* cmd, FlagValues& v) {
    cmd->add_option("--config", v.config,
                    "JSON config; flags given here override its fields");
    cmd->add_option("--scenario", v.scenario,
                    "BinaryConf, BinaryIV, ContConf, ContIV or "
                    "BinaryEntropyConf");
    cmd->add_option("--N", v.N, "number of simulated models in the sweep");
    cmd->add_option("--n", v.n, "observations per simulation");
    cmd->add_option("--seed", v.seed, "master seed for the whole sweep");
    cmd->add_option("--algos", v.algos,
                    "comma-separated algorithm names, e.g. "
                    "ATE_manski,PNS_tianpearl,ATE_entropybounds-0.80; an "
                    "empty value runs none");
    cmd->add_option("--theta", v.theta,
                    "entropy budget for listed entropybounds algorithms "
                    "that carry no suffix");
    cmd->add_option("--level", v.level,
                    "restrict BinaryEntropyConf to one entropy level (0..9)");
    cmd->add_flag("--binned", v.binned,
                  "binarize outcomes for the listed binary-only algorithms");
    cmd->add_option("--out", v.out, "artifact directory (default: out)");
    cmd->add_option("--jobs", v.jobs,
                    "worker threads for the (simulation, algorithm) tasks");
}

void overlay_flags(RawSpec& raw, const CLI::App* cmd, const FlagValues& v) {
    if (cmd->count("--scenario")) raw.scenario = v.scenario;
    if (cmd->count("--N")) raw.N = v.N;
    if (cmd->count("--n")) raw.n = v.n;
    if (cmd->count("--seed")) raw.seed = v.seed;
    if (cmd->count("--algos")) raw.algos = split_commas(v.algos);
    if (cmd->count("--theta")) raw.theta = v.theta;
    if (cmd->count("--level")) raw.level = v.level;
    if (cmd->count("--binned")) raw.binned = true;
    if (cmd->count("--out")) raw.out = v.out;
    if (cmd->count("--jobs")) raw.jobs = v.jobs;
}

cb::RunSpec make_spec(const RawSpec& raw, bool from_manifest) {
    cb::RunSpec spec;
    spec.out_dir = raw.out.value_or("out");

    if (from_manifest) {
        const cb::Manifest m =
            cb::read_manifest_json(spec.out_dir / "manifest.json");
        spec.sim.scenario = m.scenario;
        spec.sim.N = m.N;
        spec.sim.n = m.n;
        spec.sim.master_seed = m.master_seed;
        spec.sim.independent_pns_coupling = m.independent_pns_coupling;
    }
    // explicit values win; cmd_bound/cmd_report reject any disagreement
    // with the manifest rather than silently preferring one side
    if (raw.scenario) spec.sim.scenario = scenario_or_throw(*raw.scenario);
    if (raw.N) spec.sim.N = *raw.N;
    if (raw.n) spec.sim.n = *raw.n;
    if (raw.seed) spec.sim.master_seed = *raw.seed;
    if (raw.independent_pns_coupling)
        spec.sim.independent_pns_coupling = *raw.independent_pns_coupling;
    if (raw.level) spec.level = *raw.level;
    if (raw.jobs) spec.jobs = *raw.jobs;
    if (raw.emcc_runs) spec.emcc.runs = *raw.emcc_runs;
    if (raw.emcc_maxiter) spec.emcc.maxiter = *raw.emcc_maxiter;
    if (raw.emcc_loglik_tol) spec.emcc.loglik_tol = *raw.emcc_loglik_tol;
    if (raw.emcc_init_alpha) spec.emcc.init_alpha = *raw.emcc_init_alpha;
    if (raw.emcc_max_parallel)
        spec.emcc.max_parallel = *raw.emcc_max_parallel;

    if (raw.algos) {
        std::vector<cb::AlgorithmSpec> algos;
        for (const std::string& name : *raw.algos) {
            cb::AlgorithmSpec a = cb::parse_algorithm(name);
            if (raw.binned && *raw.binned && cb::binary_only(a.family))
                a.binned = true;
            if (a.family == cb::AlgoFamily::EntropyBounds && !a.theta &&
                raw.theta) {
                if (*raw.theta < 0.0)
                    throw cb::spec_error("--theta must be nonnegative");
                a.theta = cb::ThetaSource::Fixed;
                a.theta_value = *raw.theta;
            }
            algos.push_back(std::move(a));
        }
        spec.algorithms = std::move(algos);
    } else if (raw.binned && *raw.binned) {
        throw cb::spec_error(
            "--binned needs --algos; the default suite already encodes "
            "which algorithms run binarized");
    }
    return spec;
}

void print_manifest_summary(const cb::Manifest& m,
                            const std::filesystem::path& out_dir) {
    std::cout << "manifest: " << (out_dir / "manifest.json").string() << '\n'
              << "scenario=" << cb::scenario_name(m.scenario) << " N=" << m.N
              << " n=" << m.n << " master_seed=" << m.master_seed << '\n';
    for (const cb::ManifestEntry& e : m.entries)
        std::cout << "sim j=" << e.j << " seed=" << e.seed
                  << " dataset=" << e.dataset << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cbound: interval bounds on causal effects across simulated "
        "scenario sweeps"};
    app.require_subcommand(1);

    FlagValues flags;
    CLI::App* sim = app.add_subcommand(
        "simulate", "generate datasets, ground truths and a seed manifest");
    CLI::App* bnd = app.add_subcommand(
        "bound", "run the algorithm suite over an existing sweep");
    CLI::App* rep = app.add_subcommand(
        "report", "aggregate bounds.csv into metrics, best picks and a "
                  "markdown table");
    CLI::App* run = app.add_subcommand("run", "simulate, bound and report");
    for (CLI::App* cmd : {sim, bnd, rep, run}) add_flags(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* cmd = app.get_subcommands().front();
    try {
        RawSpec raw;
        if (cmd->count("--config")) load_config(raw, flags.config);
        overlay_flags(raw, cmd, flags);
        const bool from_manifest = cmd == bnd || cmd == rep;
        const cb::RunSpec spec = make_spec(raw, from_manifest);

        if (cmd == sim) {
            print_manifest_summary(cb::cmd_simulate(spec), spec.out_dir);
        } else if (cmd == bnd) {
            const std::vector<cb::BoundsRow> rows = cb::cmd_bound(spec);
            std::cout << "wrote " << (spec.out_dir / "bounds.csv").string()
                      << " (" << rows.size() << " rows)\n";
        } else if (cmd == rep) {
            std::cout << cb::cmd_report(spec).markdown;
        } else {
            std::cout << cb::cmd_run(spec).markdown;
        }
        return 0;
    } catch (const cb::spec_error& e) {
        std::cerr << "spec error: " << e.what() << '\n';
        return 2;
    } catch (const cb::io_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
