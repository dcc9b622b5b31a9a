#include "causalbound/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace causalbound {

namespace {

using nlohmann::json;

std::string loc(const std::filesystem::path& path, std::size_t line = 0) {
    std::string s = path.string();
    if (line > 0) s += ":" + std::to_string(line);
    return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot write " + loc(path));
    return f;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot read " + loc(path));
    return f;
}

void finish_write(std::ofstream& f, const std::filesystem::path& path) {
    f.flush();
    if (!f) throw io_error("write failed for " + loc(path));
}

double parse_double(const std::string& s, const std::filesystem::path& path,
                    std::size_t line) {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size() || s.empty() || errno == ERANGE)
        throw io_error("bad number '" + s + "' at " + loc(path, line));
    return v;
}

long parse_int(const std::string& s, const std::filesystem::path& path,
               std::size_t line) {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(begin, &end, 10);
    if (end != begin + s.size() || s.empty() || errno == ERANGE)
        throw io_error("bad integer '" + s + "' at " + loc(path, line));
    return v;
}

// Quote only when needed (separator, quote or line break in the field).
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line,
                                        const std::filesystem::path& path,
                                        std::size_t lineno) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw io_error("unterminated quote at " + loc(path, lineno));
    fields.push_back(std::move(cur));
    return fields;
}

// Reads all lines, tolerating a missing trailing newline; strips a CR so
// files that passed through a Windows checkout still parse.
std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream f = open_in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

const char* squash_label(Squash f) {
    switch (f) {
        case Squash::Sigmoid: return "sigmoid";
        case Squash::HalfTanh: return "half-tanh";
        case Squash::SoftplusRatio: return "softplus-ratio";
        case Squash::ProbitCdf: return "probit";
    }
    throw std::invalid_argument("unknown squash");
}

Squash parse_squash(const std::string& s, const std::filesystem::path& path) {
    for (Squash f : {Squash::Sigmoid, Squash::HalfTanh, Squash::SoftplusRatio,
                     Squash::ProbitCdf})
        if (s == squash_label(f)) return f;
    throw io_error("unknown link function '" + s + "' in " + loc(path));
}

json params_to_json(const StructuralParams& p) {
    json out;
    out["alpha_x"] = p.alpha_x;
    out["alpha_y"] = p.alpha_y;
    out["beta_ux"] = p.beta_ux;
    out["beta_uy"] = p.beta_uy;
    out["beta_xy"] = p.beta_xy;
    if (p.beta_zx) out["beta_zx"] = *p.beta_zx;
    if (p.p_u) out["p_u"] = *p.p_u;
    if (p.sigma_u) out["sigma_u"] = *p.sigma_u;
    if (p.p_z) out["p_z"] = *p.p_z;
    if (p.sigma_x) out["sigma_x"] = *p.sigma_x;
    if (p.sigma_y) out["sigma_y"] = *p.sigma_y;
    out["f_x"] = squash_label(p.f_x);
    out["f_y"] = squash_label(p.f_y);
    if (p.g_ux) out["g_ux"] = *p.g_ux;
    if (p.g_uy) out["g_uy"] = *p.g_uy;
    if (p.h_target) out["h_target"] = *p.h_target;
    return out;
}

StructuralParams params_from_json(const json& in,
                                  const std::filesystem::path& path) {
    StructuralParams p;
    p.alpha_x = in.at("alpha_x").get<double>();
    p.alpha_y = in.at("alpha_y").get<double>();
    p.beta_ux = in.at("beta_ux").get<double>();
    p.beta_uy = in.at("beta_uy").get<double>();
    p.beta_xy = in.at("beta_xy").get<double>();
    if (in.contains("beta_zx")) p.beta_zx = in["beta_zx"].get<double>();
    if (in.contains("p_u")) p.p_u = in["p_u"].get<double>();
    if (in.contains("sigma_u")) p.sigma_u = in["sigma_u"].get<double>();
    if (in.contains("p_z")) p.p_z = in["p_z"].get<double>();
    if (in.contains("sigma_x")) p.sigma_x = in["sigma_x"].get<double>();
    if (in.contains("sigma_y")) p.sigma_y = in["sigma_y"].get<double>();
    p.f_x = parse_squash(in.at("f_x").get<std::string>(), path);
    p.f_y = parse_squash(in.at("f_y").get<std::string>(), path);
    if (in.contains("g_ux")) p.g_ux = in["g_ux"].get<int>();
    if (in.contains("g_uy")) p.g_uy = in["g_uy"].get<int>();
    if (in.contains("h_target")) p.h_target = in["h_target"].get<double>();
    return p;
}

json parse_json_file(const std::filesystem::path& path) {
    std::ifstream f = open_in(path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw io_error("malformed JSON in " + loc(path) + ": " + e.what());
    }
}

void dump_json_file(const json& j, const std::filesystem::path& path) {
    std::ofstream f = open_out(path);
    f << j.dump(2) << '\n';
    finish_write(f, path);
}

Scenario scenario_from_json(const json& j, const std::filesystem::path& path) {
    const std::string name = j.at("scenario").get<std::string>();
    const std::optional<Scenario> s = parse_scenario(name);
    if (!s) throw io_error("unknown scenario '" + name + "' in " + loc(path));
    return *s;
}

std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::optional<double> parse_opt_double(const std::string& s,
                                       const std::filesystem::path& path,
                                       std::size_t line) {
    if (s.empty()) return std::nullopt;
    return parse_double(s, path, line);
}

std::string metric_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("N/A");
}

std::optional<double> parse_metric(const std::string& s,
                                   const std::filesystem::path& path,
                                   std::size_t line) {
    if (s == "N/A") return std::nullopt;
    return parse_double(s, path, line);
}

Query parse_query_field(const std::string& s,
                        const std::filesystem::path& path, std::size_t line) {
    if (s == "ATE") return Query::Ate;
    if (s == "PNS") return Query::Pns;
    throw io_error("bad query '" + s + "' at " + loc(path, line));
}

void expect_header(const std::vector<std::string>& lines,
                   const std::string& header,
                   const std::filesystem::path& path) {
    if (lines.empty() || lines[0] != header)
        throw io_error("expected header '" + header + "' in " + loc(path));
}

}  // namespace

std::string format_double(double v) {
    if (!std::isfinite(v))
        throw std::invalid_argument("non-finite value in artifact");
    // Shortest string that parses back to the same bits.  Scanning all
    // precisions matters: %.1g renders 50 as "5e+01" while %.2g gives "50".
    std::string best;
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) != v) continue;
        if (best.empty() || std::strlen(buf) < best.size()) best = buf;
    }
    return best;
}

void write_dataset_csv(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream f = open_out(path);
    f << (d.has_instrument() ? "unit_id,z,x,y" : "unit_id,x,y") << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        f << (i + 1) << ',';
        if (d.has_instrument()) f << (*d.z)[i] << ',';
        f << d.x[i] << ',' << format_double(d.y[i]) << '\n';
    }
    finish_write(f, path);
}

Dataset read_dataset_csv(const std::filesystem::path& path,
                         std::optional<OutcomeType> force) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw io_error("empty dataset file " + loc(path));
    bool with_z = false;
    if (lines[0] == "unit_id,z,x,y") {
        with_z = true;
    } else if (lines[0] != "unit_id,x,y") {
        throw io_error("unrecognized dataset header in " + loc(path));
    }
    std::optional<std::vector<int>> z;
    if (with_z) z.emplace();
    std::vector<int> x;
    std::vector<double> y;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_csv_line(lines[i], path, i + 1);
        const std::size_t want = with_z ? 4 : 3;
        if (fields.size() != want)
            throw io_error("wrong column count at " + loc(path, i + 1));
        std::size_t col = 1;  // unit_id is ignored; order is what counts
        if (with_z)
            z->push_back(static_cast<int>(parse_int(fields[col++], path, i + 1)));
        x.push_back(static_cast<int>(parse_int(fields[col++], path, i + 1)));
        y.push_back(parse_double(fields[col], path, i + 1));
    }
    try {
        Dataset d = Dataset::from_columns(std::move(z), std::move(x),
                                          std::move(y));
        if (force) d.outcome = *force;
        return d;
    } catch (const std::invalid_argument& e) {
        throw io_error("invalid dataset in " + loc(path) + ": " + e.what());
    }
}

void write_truth_json(const TruthRecord& t, const std::filesystem::path& path) {
    json out;
    out["scenario"] = scenario_name(t.scenario);
    out["j"] = t.j;
    out["seed"] = t.seed;
    out["true_ate"] = t.true_ate;
    if (t.true_pns) out["true_pns"] = *t.true_pns;
    out["params"] = params_to_json(t.params);
    dump_json_file(out, path);
}

TruthRecord read_truth_json(const std::filesystem::path& path) {
    const json in = parse_json_file(path);
    try {
        TruthRecord t;
        t.scenario = scenario_from_json(in, path);
        t.j = in.at("j").get<int>();
        t.seed = in.at("seed").get<std::uint64_t>();
        t.true_ate = in.at("true_ate").get<double>();
        if (in.contains("true_pns")) t.true_pns = in["true_pns"].get<double>();
        t.params = params_from_json(in.at("params"), path);
        return t;
    } catch (const json::exception& e) {
        throw io_error("bad truth record in " + loc(path) + ": " + e.what());
    }
}

void write_manifest_json(const Manifest& m, const std::filesystem::path& path) {
    json out;
    out["scenario"] = scenario_name(m.scenario);
    out["N"] = m.N;
    out["n"] = m.n;
    out["master_seed"] = m.master_seed;
    out["independent_pns_coupling"] = m.independent_pns_coupling;
    json sims = json::array();
    for (const ManifestEntry& e : m.entries) {
        json entry;
        entry["j"] = e.j;
        entry["dataset"] = e.dataset;
        entry["truth"] = e.truth;
        entry["seed"] = e.seed;
        sims.push_back(std::move(entry));
    }
    out["simulations"] = std::move(sims);
    dump_json_file(out, path);
}

Manifest read_manifest_json(const std::filesystem::path& path) {
    const json in = parse_json_file(path);
    try {
        Manifest m;
        m.scenario = scenario_from_json(in, path);
        m.N = in.at("N").get<int>();
        m.n = in.at("n").get<int>();
        m.master_seed = in.at("master_seed").get<std::uint64_t>();
        m.independent_pns_coupling =
            in.at("independent_pns_coupling").get<bool>();
        for (const json& entry : in.at("simulations")) {
            ManifestEntry e;
            e.j = entry.at("j").get<int>();
            e.dataset = entry.at("dataset").get<std::string>();
            e.truth = entry.at("truth").get<std::string>();
            e.seed = entry.at("seed").get<std::uint64_t>();
            m.entries.push_back(std::move(e));
        }
        return m;
    } catch (const json::exception& e) {
        throw io_error("bad manifest in " + loc(path) + ": " + e.what());
    }
}

static const char* kBoundsHeader =
    "j,algorithm,query,lower,upper,status,reason,runtime_seconds,theta,"
    "thetaerror";

void write_bounds_csv(const std::vector<BoundsRow>& rows,
                      const std::filesystem::path& path) {
    std::ofstream f = open_out(path);
    f << kBoundsHeader << '\n';
    for (const BoundsRow& r : rows) {
        const BoundOutcome& o = r.outcome;
        f << r.j << ',' << csv_field(o.algorithm) << ','
          << query_name(o.query) << ',';
        if (o.ok())
            f << format_double(o.interval().lower) << ','
              << format_double(o.interval().upper);
        else
            f << ',';
        const char* status =
            o.ok() ? (o.degenerate ? "degenerate" : "ok") : "failure";
        f << ',' << status << ',' << csv_field(o.ok() ? "" : o.reason()) << ','
          << format_double(o.runtime_seconds) << ',' << opt_field(o.theta)
          << ',' << opt_field(o.thetaerror) << '\n';
    }
    finish_write(f, path);
}

std::vector<BoundsRow> read_bounds_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    expect_header(lines, kBoundsHeader, path);
    std::vector<BoundsRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_csv_line(lines[i], path, i + 1);
        if (fields.size() != 10)
            throw io_error("wrong column count at " + loc(path, i + 1));
        BoundsRow r;
        r.j = static_cast<int>(parse_int(fields[0], path, i + 1));
        BoundOutcome& o = r.outcome;
        o.algorithm = fields[1];
        o.query = parse_query_field(fields[2], path, i + 1);
        const std::string& status = fields[5];
        if (status == "failure") {
            o.result = Failure{fields[6]};
        } else if (status == "ok" || status == "degenerate") {
            o.degenerate = status == "degenerate";
            const double lo = parse_double(fields[3], path, i + 1);
            const double hi = parse_double(fields[4], path, i + 1);
            o.result = Interval(lo, hi);
        } else {
            throw io_error("bad status '" + status + "' at " +
                           loc(path, i + 1));
        }
        o.runtime_seconds = parse_double(fields[7], path, i + 1);
        o.theta = parse_opt_double(fields[8], path, i + 1);
        o.thetaerror = parse_opt_double(fields[9], path, i + 1);
        rows.push_back(std::move(r));
    }
    return rows;
}

static const char* kMetricsHeader =
    "query,algorithm,runs,failure_rate,invalid_rate,net_bound_width,"
    "bound_width,invalid_delta";

void write_metrics_csv(const std::vector<MetricsReport>& reports,
                       const std::filesystem::path& path) {
    std::ofstream f = open_out(path);
    f << kMetricsHeader << '\n';
    for (const MetricsReport& rep : reports) {
        for (const AlgorithmMetrics& m : rep.per_algorithm) {
            f << query_name(rep.query) << ',' << csv_field(m.algorithm) << ','
              << m.runs << ',' << metric_field(m.failure_rate) << ','
              << metric_field(m.invalid_rate) << ','
              << metric_field(m.net_bound_width) << ','
              << metric_field(m.bound_width) << ','
              << metric_field(m.invalid_delta) << '\n';
        }
    }
    finish_write(f, path);
}

std::vector<MetricsReport> read_metrics_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    expect_header(lines, kMetricsHeader, path);
    std::vector<MetricsReport> reports;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_csv_line(lines[i], path, i + 1);
        if (fields.size() != 8)
            throw io_error("wrong column count at " + loc(path, i + 1));
        const Query q = parse_query_field(fields[0], path, i + 1);
        if (reports.empty() || reports.back().query != q) {
            reports.push_back(MetricsReport{q, {}});
        }
        AlgorithmMetrics m;
        m.algorithm = fields[1];
        m.runs = static_cast<int>(parse_int(fields[2], path, i + 1));
        m.failure_rate = parse_metric(fields[3], path, i + 1);
        m.invalid_rate = parse_metric(fields[4], path, i + 1);
        m.net_bound_width = parse_metric(fields[5], path, i + 1);
        m.bound_width = parse_metric(fields[6], path, i + 1);
        m.invalid_delta = parse_metric(fields[7], path, i + 1);
        reports.back().per_algorithm.push_back(std::move(m));
    }
    return reports;
}

void write_best_csv(const std::vector<BestRow>& rows,
                    const std::filesystem::path& path) {
    std::ofstream f = open_out(path);
    f << "j,query,best_algorithm,h_x,h_y,h_z,i_xy,i_zx,i_zy\n";
    for (const BestRow& r : rows) {
        f << r.j << ',' << query_name(r.query) << ','
          << csv_field(r.algorithm.value_or("")) << ','
          << format_double(r.features.h_x) << ','
          << format_double(r.features.h_y) << ',' << opt_field(r.features.h_z)
          << ',' << format_double(r.features.i_xy) << ','
          << opt_field(r.features.i_zx) << ',' << opt_field(r.features.i_zy)
          << '\n';
    }
    finish_write(f, path);
}

}  // namespace causalbound
