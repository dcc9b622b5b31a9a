#include "causalbound/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string_view>
#include <thread>
#include <utility>

#include "causalbound/closedform.hpp"
#include "causalbound/lp_bounds.hpp"

namespace causalbound {

namespace {

namespace fs = std::filesystem;

// Stable string tag for deriving per-algorithm seed streams; the display
// name is part of the reproducibility contract, so FNV-1a over it keeps the
// derivation platform-independent.
std::uint64_t name_tag(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Two decimals when the value sits on the usual grids (0.95, 0.80, ...),
// full precision otherwise so the name never misstates the parameter.
std::string param_text(double v) {
    char buf[40];
    if (std::abs(v * 100.0 - std::round(v * 100.0)) < 1e-9) {
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return buf;
    }
    return format_double(v);
}

const char* theta_suffix(ThetaSource s) {
    switch (s) {
        case ThetaSource::Fixed: return "";
        case ThetaSource::TrueTheta: return "trueTheta";
        case ThetaSource::RandomTheta: return "randomTheta";
        case ThetaSource::UnderspecifyTheta: return "underspecifyTheta";
    }
    throw std::invalid_argument("unknown theta source");
}

bool query_supported(AlgoFamily f, Query q) {
    switch (f) {
        case AlgoFamily::Manski:
        case AlgoFamily::Ols:
        case AlgoFamily::Tsls:
        case AlgoFamily::ZhangBareinboim:
            return q == Query::Ate;
        case AlgoFamily::TianPearl:
            return q == Query::Pns;
        default:
            return true;
    }
}

std::optional<AlgoFamily> parse_family(const std::string& s) {
    for (AlgoFamily f :
         {AlgoFamily::Manski, AlgoFamily::TianPearl, AlgoFamily::Ols,
          AlgoFamily::Tsls, AlgoFamily::CausalOptim, AlgoFamily::AutoBound,
          AlgoFamily::ZaffalonBounds, AlgoFamily::EntropyBounds,
          AlgoFamily::ZhangBareinboim})
        if (s == family_name(f)) return f;
    return std::nullopt;
}

double parse_param_value(const std::string& text, const std::string& name) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size())
        throw spec_error("bad parameter '" + text + "' in " + name);
    return v;
}

std::string sim_file(int j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sim_%05d.csv", j);
    return buf;
}

std::string truth_file(int j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "truth_%05d.json", j);
    return buf;
}

void check_spec_or_throw(const RunSpec& spec) {
    const std::vector<std::string> problems = incompatibilities(spec);
    if (problems.empty()) return;
    std::string msg = "run rejected:";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw spec_error(msg);
}

Manifest read_manifest(const RunSpec& spec) {
    return read_manifest_json(spec.out_dir / "manifest.json");
}

void check_manifest(const RunSpec& spec, const Manifest& m) {
    std::vector<std::string> bad;
    if (m.scenario != spec.sim.scenario)
        bad.push_back(std::string("scenario ") +
                      scenario_name(spec.sim.scenario) + " vs manifest " +
                      scenario_name(m.scenario));
    if (m.N != spec.sim.N)
        bad.push_back("N " + std::to_string(spec.sim.N) + " vs manifest " +
                      std::to_string(m.N));
    if (m.n != spec.sim.n)
        bad.push_back("n " + std::to_string(spec.sim.n) + " vs manifest " +
                      std::to_string(m.n));
    if (m.master_seed != spec.sim.master_seed)
        bad.push_back("seed " + std::to_string(spec.sim.master_seed) +
                      " vs manifest " + std::to_string(m.master_seed));
    if (m.independent_pns_coupling != spec.sim.independent_pns_coupling)
        bad.push_back("PNS coupling flag differs from manifest");
    if (bad.empty()) return;
    std::string msg = "mismatched manifest:";
    for (const std::string& b : bad) msg += "\n  - " + b;
    throw spec_error(msg);
}

// The entries a spec acts on: the manifest's, optionally narrowed to one
// entropy level.
std::vector<ManifestEntry> selected_entries(const RunSpec& spec,
                                            const Manifest& m) {
    std::vector<ManifestEntry> out;
    for (const ManifestEntry& e : m.entries)
        if (!spec.level || entropy_level(e.j, m.N) == *spec.level)
            out.push_back(e);
    return out;
}

std::string strip_query_prefix(const std::string& algorithm) {
    if (algorithm.rfind("ATE_", 0) == 0 || algorithm.rfind("PNS_", 0) == 0)
        return algorithm.substr(4);
    return algorithm;
}

std::string cell(const std::optional<double>& v) {
    if (!v) return "N/A";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return buf;
}

std::string markdown_report(const Manifest& m, const RunSpec& spec,
                            const std::vector<MetricsReport>& reports) {
    std::ostringstream md;
    md << "# " << scenario_name(m.scenario) << " sweep (N=" << m.N
       << ", n=" << m.n << ", seed=" << m.master_seed << ")\n";
    if (spec.level)
        md << "\nRestricted to confounder entropy level " << *spec.level
           << " (H_target = " << cell(0.05 + 0.1 * *spec.level) << ").\n";
    for (const MetricsReport& rep : reports) {
        md << "\n## " << query_name(rep.query) << "\n\n"
           << "| Algorithm | Fail Rate | Invalid Rate | Net Width | Bound "
              "Width | Invalid Δ |\n"
           << "|:--|--:|--:|--:|--:|--:|\n";
        for (const AlgorithmMetrics& a : rep.per_algorithm)
            md << "| " << strip_query_prefix(a.algorithm) << " | "
               << cell(a.failure_rate) << " | " << cell(a.invalid_rate)
               << " | " << cell(a.net_bound_width) << " | "
               << cell(a.bound_width) << " | " << cell(a.invalid_delta)
               << " |\n";
    }
    if (reports.empty()) md << "\nNo bound rows to report.\n";
    return md.str();
}

struct LoadedSim {
    ManifestEntry entry;
    Dataset dataset;
    TruthRecord truth;
};

std::vector<LoadedSim> load_sims(const RunSpec& spec, const Manifest& m) {
    const std::optional<OutcomeType> force =
        continuous_outcome(m.scenario)
            ? std::optional<OutcomeType>(OutcomeType::Continuous)
            : std::nullopt;
    std::vector<LoadedSim> sims;
    for (const ManifestEntry& e : selected_entries(spec, m)) {
        LoadedSim s;
        s.entry = e;
        s.dataset = read_dataset_csv(spec.out_dir / e.dataset, force);
        s.truth = read_truth_json(spec.out_dir / e.truth);
        if (s.truth.j != e.j)
            throw io_error("truth file " + e.truth +
                           " does not match manifest index " +
                           std::to_string(e.j));
        sims.push_back(std::move(s));
    }
    return sims;
}

}  // namespace

const char* family_name(AlgoFamily f) {
    switch (f) {
        case AlgoFamily::Manski: return "manski";
        case AlgoFamily::TianPearl: return "tianpearl";
        case AlgoFamily::Ols: return "OLS";
        case AlgoFamily::Tsls: return "2SLS";
        case AlgoFamily::CausalOptim: return "causaloptim";
        case AlgoFamily::AutoBound: return "autobound";
        case AlgoFamily::ZaffalonBounds: return "zaffalonbounds";
        case AlgoFamily::EntropyBounds: return "entropybounds";
        case AlgoFamily::ZhangBareinboim: return "zhangbareinboim";
    }
    throw std::invalid_argument("unknown algorithm family");
}

bool binary_only(AlgoFamily f) {
    switch (f) {
        case AlgoFamily::Manski:
        case AlgoFamily::TianPearl:
        case AlgoFamily::CausalOptim:
        case AlgoFamily::AutoBound:
        case AlgoFamily::ZaffalonBounds:
        case AlgoFamily::EntropyBounds:
            return true;
        default:
            return false;
    }
}

std::string AlgorithmSpec::name() const {
    std::string out = query_name(query);
    out += '_';
    out += family_name(family);
    if (level) {
        out += '-';
        out += param_text(*level);
    }
    if (theta) {
        if (*theta == ThetaSource::Fixed) {
            out += '-';
            out += param_text(theta_value.value_or(0.0));
        } else {
            out += '-';
            out += theta_suffix(*theta);
        }
    }
    if (binned) out += "--binned";
    return out;
}

AlgorithmSpec parse_algorithm(const std::string& name) {
    AlgorithmSpec a;
    std::string rest = name;

    if (rest.rfind("ATE_", 0) == 0) {
        a.query = Query::Ate;
    } else if (rest.rfind("PNS_", 0) == 0) {
        a.query = Query::Pns;
    } else {
        throw spec_error("algorithm '" + name +
                         "' must start with ATE_ or PNS_");
    }
    rest = rest.substr(4);

    const std::string binned_suffix = "--binned";
    if (rest.size() >= binned_suffix.size() &&
        rest.compare(rest.size() - binned_suffix.size(), binned_suffix.size(),
                     binned_suffix) == 0) {
        a.binned = true;
        rest = rest.substr(0, rest.size() - binned_suffix.size());
    }

    std::string param;
    if (const std::size_t dash = rest.find('-'); dash != std::string::npos) {
        param = rest.substr(dash + 1);
        rest = rest.substr(0, dash);
    }

    const std::optional<AlgoFamily> family = parse_family(rest);
    if (!family)
        throw spec_error("unknown algorithm family '" + rest + "' in '" +
                         name + "'");
    a.family = *family;

    if (!query_supported(a.family, a.query))
        throw spec_error("'" + name + "': " + family_name(a.family) +
                         " bounds the " +
                         (a.query == Query::Ate ? "PNS" : "ATE") + " only");

    switch (a.family) {
        case AlgoFamily::Ols:
        case AlgoFamily::Tsls:
            if (param.empty())
                throw spec_error(
                    "'" + name + "' needs a confidence level suffix, e.g. " +
                    std::string(query_name(a.query)) + "_" +
                    family_name(a.family) + "-0.95");
            a.level = parse_param_value(param, name);
            if (!(*a.level > 0.0 && *a.level < 1.0))
                throw spec_error("confidence level in '" + name +
                                 "' must lie strictly inside (0, 1)");
            break;
        case AlgoFamily::EntropyBounds:
            if (param.empty()) break;  // budget may come from --theta
            if (param == "trueTheta") {
                a.theta = ThetaSource::TrueTheta;
            } else if (param == "randomTheta") {
                a.theta = ThetaSource::RandomTheta;
            } else if (param == "underspecifyTheta") {
                a.theta = ThetaSource::UnderspecifyTheta;
            } else {
                a.theta = ThetaSource::Fixed;
                a.theta_value = parse_param_value(param, name);
                if (*a.theta_value < 0.0)
                    throw spec_error("entropy budget in '" + name +
                                     "' must be nonnegative");
            }
            break;
        default:
            if (!param.empty())
                throw spec_error("'" + std::string(family_name(a.family)) +
                                 "' takes no parameter (got '" + param +
                                 "')");
            break;
    }
    return a;
}

std::vector<AlgorithmSpec> default_suite(Scenario s) {
    std::vector<AlgorithmSpec> suite;
    const bool continuous = continuous_outcome(s);
    const bool with_z = instrumented(s);

    auto add = [&](Query q, AlgoFamily f, bool bin = false) {
        AlgorithmSpec a;
        a.query = q;
        a.family = f;
        a.binned = bin;
        suite.push_back(a);
        return &suite.back();
    };
    auto add_ci = [&](AlgoFamily f) {
        for (double level : {0.95, 0.98, 0.99}) {
            AlgorithmSpec* a = add(Query::Ate, f);
            a->level = level;
        }
    };
    auto add_entropy = [&](Query q, ThetaSource src, double value = 0.0) {
        AlgorithmSpec* a = add(q, AlgoFamily::EntropyBounds, continuous);
        a->theta = src;
        if (src == ThetaSource::Fixed) a->theta_value = value;
    };
    auto add_entropy_grid = [&](Query q) {
        for (double v : {0.1, 0.2, 0.8}) add_entropy(q, ThetaSource::Fixed, v);
        // the oracle budget needs the confounder entropy, which only the
        // binary-confounder scenarios record
        if (!continuous) add_entropy(q, ThetaSource::TrueTheta);
        add_entropy(q, ThetaSource::RandomTheta);
    };

    if (s == Scenario::BinaryEntropyConf) {
        add_entropy(Query::Ate, ThetaSource::TrueTheta);
        add(Query::Ate, AlgoFamily::Manski);
        add_entropy(Query::Pns, ThetaSource::TrueTheta);
        add(Query::Pns, AlgoFamily::TianPearl);
        return suite;
    }

    add(Query::Ate, AlgoFamily::Manski, continuous);
    add_ci(with_z ? AlgoFamily::Tsls : AlgoFamily::Ols);
    if (s == Scenario::ContIv) add(Query::Ate, AlgoFamily::ZhangBareinboim);
    add(Query::Ate, AlgoFamily::CausalOptim, continuous);
    add(Query::Ate, AlgoFamily::AutoBound, continuous);
    add(Query::Ate, AlgoFamily::ZaffalonBounds, continuous);
    add_entropy_grid(Query::Ate);

    if (!continuous) {
        add(Query::Pns, AlgoFamily::TianPearl);
        add(Query::Pns, AlgoFamily::CausalOptim);
        add(Query::Pns, AlgoFamily::AutoBound);
        add(Query::Pns, AlgoFamily::ZaffalonBounds);
        add_entropy_grid(Query::Pns);
    }
    return suite;
}

std::vector<AlgorithmSpec> resolved_algorithms(const RunSpec& spec) {
    if (spec.algorithms) return *spec.algorithms;
    return default_suite(spec.sim.scenario);
}

std::vector<std::string> incompatibilities(const RunSpec& spec) {
    std::vector<std::string> out;
    const Scenario s = spec.sim.scenario;
    const bool continuous = continuous_outcome(s);
    const bool with_z = instrumented(s);

    if (spec.sim.N < 1) out.push_back("N must be >= 1");
    if (spec.sim.n < 2) out.push_back("n must be >= 2");
    if (spec.jobs < 1) out.push_back("jobs must be >= 1");
    if (spec.emcc.runs < 1) out.push_back("EM restart count must be >= 1");
    if (spec.emcc.max_parallel < 0)
        out.push_back("EM max_parallel must be >= 0");
    if (spec.level) {
        if (s != Scenario::BinaryEntropyConf)
            out.push_back("--level applies to BinaryEntropyConf only");
        else if (*spec.level < 0 || *spec.level > 9)
            out.push_back("--level must lie in 0..9");
    }

    std::set<std::string> seen;
    for (const AlgorithmSpec& a : resolved_algorithms(spec)) {
        const std::string name = a.name();
        if (!seen.insert(name).second) {
            out.push_back(name + ": listed twice");
            continue;
        }
        if ((a.family == AlgoFamily::Tsls ||
             a.family == AlgoFamily::ZhangBareinboim) &&
            !with_z)
            out.push_back(name + ": requires an instrument; " +
                          scenario_name(s) + " has none");
        if (a.family == AlgoFamily::ZhangBareinboim) {
            if (!continuous)
                out.push_back(name + ": requires a continuous outcome");
            if (a.binned)
                out.push_back(name +
                              ": --binned discards the continuous outcome "
                              "this algorithm needs");
        }
        if (binary_only(a.family) && continuous && !a.binned)
            out.push_back(name + ": needs a binary outcome on " +
                          scenario_name(s) + "; add --binned");
        if (a.binned && !continuous &&
            a.family != AlgoFamily::ZhangBareinboim)
            out.push_back(name + ": " + scenario_name(s) +
                          " outcomes are already binary; drop --binned");
        if (a.query == Query::Pns && continuous)
            out.push_back(name +
                          ": PNS ground truth is undefined for continuous "
                          "outcomes");
        if (a.family == AlgoFamily::EntropyBounds) {
            if (!a.theta)
                out.push_back(name +
                              ": needs an entropy budget (fixed value, "
                              "trueTheta, randomTheta or underspecifyTheta)");
            else if ((*a.theta == ThetaSource::TrueTheta ||
                      *a.theta == ThetaSource::UnderspecifyTheta) &&
                     continuous)
                out.push_back(name +
                              ": the true confounder entropy is unavailable "
                              "on " +
                              scenario_name(s));
        }
    }
    return out;
}

BoundOutcome run_algorithm(const AlgorithmSpec& a, const Dataset& d,
                           const TruthRecord& truth, std::uint64_t master_seed,
                           const EmConfig& emcc) {
    BoundOutcome out;
    out.algorithm = a.name();
    out.query = a.query;
    const std::uint64_t run_seed = hash64(
        master_seed, name_tag(out.algorithm), std::uint64_t(truth.j));

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Dataset* data = &d;
        Dataset binned_storage;
        if (a.binned) {
            binned_storage = binarize(d);
            data = &binned_storage;
        }

        Interval raw(0.0, 0.0);
        switch (a.family) {
            case AlgoFamily::Manski:
                raw = manski_ate(empirical_binary_joint(*data));
                break;
            case AlgoFamily::TianPearl:
                raw = tianpearl_pns(empirical_binary_joint(*data));
                break;
            case AlgoFamily::Ols:
                raw = ols_ate_ci(*data, *a.level);
                break;
            case AlgoFamily::Tsls:
                raw = tsls_ate_ci(*data, *a.level);
                break;
            case AlgoFamily::CausalOptim:
            case AlgoFamily::AutoBound:
                raw = data->has_instrument()
                          ? iv_lp_bounds(empirical_iv_joint(*data), a.query)
                          : conf_lp_bounds(empirical_binary_joint(*data),
                                           a.query);
                break;
            case AlgoFamily::ZaffalonBounds: {
                EmConfig cfg = emcc;
                cfg.seed = run_seed;
                raw = data->has_instrument()
                          ? emcc_bounds(empirical_iv_joint(*data), a.query,
                                        cfg)
                          : emcc_bounds(empirical_binary_joint(*data), a.query,
                                        cfg);
                break;
            }
            case AlgoFamily::EntropyBounds: {
                if (!a.theta)
                    throw std::invalid_argument(
                        "entropybounds spec lacks a budget");
                std::optional<double> hu;
                if (truth.params.p_u) hu = binary_entropy(*truth.params.p_u);
                double theta = 0.0;
                switch (*a.theta) {
                    case ThetaSource::Fixed:
                        theta = *a.theta_value;
                        break;
                    case ThetaSource::TrueTheta:
                        if (!hu)
                            throw std::invalid_argument(
                                "trueTheta without a recorded p_u");
                        theta = *hu;
                        break;
                    case ThetaSource::RandomTheta: {
                        Rng rng(run_seed);
                        theta = rng.uniform();
                        break;
                    }
                    case ThetaSource::UnderspecifyTheta: {
                        if (!hu)
                            throw std::invalid_argument(
                                "underspecifyTheta without a recorded p_u");
                        Rng rng(run_seed);
                        theta = rng.uniform() * *hu;
                        break;
                    }
                }
                out.theta = theta;
                if (hu) out.thetaerror = *hu - theta;
                const BinaryJoint joint = empirical_binary_joint(*data);
                raw = a.query == Query::Ate ? entropy_ate(joint, theta)
                                            : entropy_pns(joint, theta);
                break;
            }
            case AlgoFamily::ZhangBareinboim:
                raw = zhangbareinboim_ate(*data);
                break;
        }

        const Clipped clipped = clip_to_ceiling(raw, a.query);
        out.result = clipped.interval;
        out.degenerate = clipped.degenerate;
    } catch (const data_error& e) {
        out.result = Failure{e.what()};
    }
    out.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return out;
}

Manifest cmd_simulate(const RunSpec& spec) {
    check_spec_or_throw(spec);
    std::error_code ec;
    fs::create_directories(spec.out_dir, ec);
    if (ec)
        throw io_error("cannot create output directory " +
                       spec.out_dir.string() + ": " + ec.message());

    Manifest m;
    m.scenario = spec.sim.scenario;
    m.N = spec.sim.N;
    m.n = spec.sim.n;
    m.master_seed = spec.sim.master_seed;
    m.independent_pns_coupling = spec.sim.independent_pns_coupling;
    for (int j = 1; j <= spec.sim.N; ++j) {
        if (spec.level && entropy_level(j, spec.sim.N) != *spec.level)
            continue;
        const SimulationRecord rec = generate(j, spec.sim);
        ManifestEntry e;
        e.j = j;
        e.dataset = sim_file(j);
        e.truth = truth_file(j);
        e.seed = simulation_seed(j, spec.sim);
        write_dataset_csv(rec.dataset, spec.out_dir / e.dataset);
        TruthRecord t;
        t.j = j;
        t.scenario = spec.sim.scenario;
        t.seed = e.seed;
        t.true_ate = rec.true_ate;
        t.true_pns = rec.true_pns;
        t.params = rec.params;
        write_truth_json(t, spec.out_dir / e.truth);
        m.entries.push_back(std::move(e));
    }
    write_manifest_json(m, spec.out_dir / "manifest.json");
    return m;
}

std::vector<BoundsRow> cmd_bound(const RunSpec& spec) {
    const Manifest m = read_manifest(spec);
    check_manifest(spec, m);
    check_spec_or_throw(spec);

    const std::vector<LoadedSim> sims = load_sims(spec, m);
    const std::vector<AlgorithmSpec> algos = resolved_algorithms(spec);

    struct Task {
        const LoadedSim* sim;
        const AlgorithmSpec* algo;
    };
    std::vector<Task> tasks;
    tasks.reserve(sims.size() * algos.size());
    for (const LoadedSim& s : sims)
        for (const AlgorithmSpec& a : algos) tasks.push_back({&s, &a});

    // A task pool on top of restart-level EM parallelism would oversubscribe,
    // so one of the two stays serial.
    EmConfig emcc = spec.emcc;
    if (spec.jobs > 1) emcc.max_parallel = 1;

    std::vector<BoundsRow> rows(tasks.size());
    auto run_task = [&](std::size_t i) {
        const Task& t = tasks[i];
        rows[i].j = t.sim->entry.j;
        rows[i].outcome = run_algorithm(*t.algo, t.sim->dataset, t.sim->truth,
                                        m.master_seed, emcc);
    };

    const int workers = static_cast<int>(
        std::min<std::size_t>(std::size_t(std::max(spec.jobs, 1)),
                              tasks.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                try {
                    run_task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    write_bounds_csv(rows, spec.out_dir / "bounds.csv");
    return rows;
}

Report cmd_report(const RunSpec& spec) {
    const Manifest m = read_manifest(spec);
    check_manifest(spec, m);

    const std::vector<LoadedSim> sims = load_sims(spec, m);
    std::map<int, const LoadedSim*> by_j;
    for (const LoadedSim& s : sims) by_j[s.entry.j] = &s;

    const std::vector<BoundsRow> rows =
        read_bounds_csv(spec.out_dir / "bounds.csv");

    // (query, j) -> runs, preserving bounds.csv order inside each bucket
    std::map<Query, std::vector<RunOutcome>> per_query;
    std::map<std::pair<Query, int>, std::vector<RunOutcome>> per_sim;
    for (const BoundsRow& r : rows) {
        const auto it = by_j.find(r.j);
        if (it == by_j.end())
            throw io_error("bounds.csv references simulation " +
                           std::to_string(r.j) +
                           " outside the selected manifest entries");
        const TruthRecord& truth = it->second->truth;
        double truth_value = truth.true_ate;
        if (r.outcome.query == Query::Pns) {
            if (!truth.true_pns)
                throw io_error("bounds.csv has PNS rows but simulation " +
                               std::to_string(r.j) +
                               " records no PNS ground truth");
            truth_value = *truth.true_pns;
        }
        RunOutcome run{r.j, r.outcome, truth_value};
        per_query[r.outcome.query].push_back(run);
        per_sim[{r.outcome.query, r.j}].push_back(std::move(run));
    }

    Report rep;
    for (Query q : {Query::Ate, Query::Pns}) {
        const auto it = per_query.find(q);
        if (it == per_query.end()) continue;
        rep.metrics.push_back(evaluate(it->second, q));
    }

    for (const LoadedSim& s : sims) {
        std::optional<DatasetFeatures> feats;
        for (Query q : {Query::Ate, Query::Pns}) {
            const auto it = per_sim.find({q, s.entry.j});
            if (it == per_sim.end()) continue;
            if (!feats)
                feats = features(continuous_outcome(m.scenario)
                                     ? binarize(s.dataset)
                                     : s.dataset);
            BestRow row;
            row.j = s.entry.j;
            row.query = q;
            row.algorithm = best_algorithm(it->second, q);
            row.features = *feats;
            rep.best.push_back(std::move(row));
        }
    }

    rep.markdown = markdown_report(m, spec, rep.metrics);
    write_metrics_csv(rep.metrics, spec.out_dir / "metrics.csv");
    write_best_csv(rep.best, spec.out_dir / "best.csv");
    {
        std::ofstream f(spec.out_dir / "report.md", std::ios::binary);
        if (!f) throw io_error("cannot write report.md");
        f << rep.markdown;
    }
    return rep;
}

Report cmd_run(const RunSpec& spec) {
    cmd_simulate(spec);
    cmd_bound(spec);
    return cmd_report(spec);
}

}  // namespace causalbound
