#include "causalbound/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace causalbound {

namespace {

// Stable ids feeding the seed derivation; frozen, never reorder.
std::uint64_t scenario_seed_id(Scenario s) {
    switch (s) {
        case Scenario::BinaryConf: return 1;
        case Scenario::BinaryIv: return 2;
        case Scenario::ContConf: return 3;
        case Scenario::ContIv: return 4;
        case Scenario::BinaryEntropyConf: return 5;
    }
    throw std::invalid_argument("unknown scenario");
}

bool uses_instrument(Scenario s) {
    return s == Scenario::BinaryIv || s == Scenario::ContIv;
}

// Treatment coefficient tiles [-5, 5] uniformly across the sweep.  A
// single-simulation sweep degenerates to the grid start.
double grid_beta_xy(int j, int N) {
    if (N == 1) return -5.0;
    return -5.0 + 10.0 * double(j - 1) / double(N - 1);
}

void check_config(const SimulationConfig& cfg) {
    if (cfg.N < 1) throw std::invalid_argument("simulation count must be >= 1");
    if (cfg.n < 2)
        throw std::invalid_argument("need at least 2 units per simulation");
}

void check_index(int j, int N) {
    if (j < 1 || j > N)
        throw std::invalid_argument("simulation index out of range");
}

}  // namespace

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::BinaryConf: return "BinaryConf";
        case Scenario::BinaryIv: return "BinaryIV";
        case Scenario::ContConf: return "ContConf";
        case Scenario::ContIv: return "ContIV";
        case Scenario::BinaryEntropyConf: return "BinaryEntropyConf";
    }
    throw std::invalid_argument("unknown scenario");
}

std::optional<Scenario> parse_scenario(const std::string& name) {
    for (Scenario s : {Scenario::BinaryConf, Scenario::BinaryIv,
                       Scenario::ContConf, Scenario::ContIv,
                       Scenario::BinaryEntropyConf})
        if (name == scenario_name(s)) return s;
    return std::nullopt;
}

bool continuous_outcome(Scenario s) {
    return s == Scenario::ContConf || s == Scenario::ContIv;
}

bool instrumented(Scenario s) {
    return s == Scenario::BinaryIv || s == Scenario::ContIv;
}

int entropy_level(int j, int N) {
    return int((std::int64_t(j) - 1) * 10 / N);
}

double Rng::uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

double Rng::half_normal(double scale) { return std::abs(normal(0.0, scale)); }

double Rng::bimodal() {
    const double centre = uniform() < 0.5 ? 1.0 : -1.0;
    return normal(centre, 0.5);
}

bool Rng::bern(double p) { return uniform() < p; }

int Rng::pick(int n) { return std::min(n - 1, int(uniform() * n)); }

double squash(Squash f, double x) {
    switch (f) {
        case Squash::Sigmoid:
            return 1.0 / (1.0 + std::exp(-x));
        case Squash::HalfTanh:
            return 0.5 * (1.0 + std::tanh(x));
        case Squash::SoftplusRatio: {
            // log1p(exp(x)) ~ x for large x; the shortcut avoids inf/inf
            const double sp = x > 30.0 ? x : std::log1p(std::exp(x));
            return sp / (1.0 + sp);
        }
        case Squash::ProbitCdf:
            return 0.5 * std::erfc(-x / std::numbers::sqrt2);
    }
    throw std::invalid_argument("unknown squashing function");
}

double transform(int id, double x, double mu) {
    switch (id) {
        case 0: return x;
        case 1: return std::sin(x);
        case 2: return std::cos(x);
        case 3: return std::tanh(x);
        case 4: return std::log1p(std::abs(x));
        case 5: return std::exp(-x * x);
        case 6: return 1.0 / (1.0 + std::exp(-x));
        case 7: return std::exp(std::clamp(x, -5.0, 5.0));
        case 8: return std::tanh(x);  // listed twice on purpose
        case 9: return 1.0 / (1.0 + std::exp(-(x - mu)));
        case 10: return std::sin(std::numbers::pi * x);
        case 11: return std::clamp(x / 5.0, -1.0, 1.0);
        case 12: return x / (1.0 + std::abs(x));
    }
    throw std::invalid_argument("transform id out of range");
}

StructuralParams sample_params(int j, const SimulationConfig& cfg, Rng& rng) {
    check_config(cfg);
    check_index(j, cfg.N);
    const Scenario s = cfg.scenario;

    // Draw order (frozen): confounder parameter, instrument probability,
    // intercepts, confounder edge weights, instrument edge weight, global
    // noise scales, squashers, feature transforms.
    StructuralParams p;
    if (s == Scenario::BinaryEntropyConf) {
        const double h = 0.05 + 0.1 * entropy_level(j, cfg.N);
        p.h_target = h;
        // the inversion lands in [0, 0.5]; a coin reflects to 1 - p_u so the
        // whole unit interval is reachable at every entropy level
        p.p_u = invert_binary_entropy(h, rng.bern(0.5));
    } else if (continuous_outcome(s)) {
        p.sigma_u = rng.half_normal(1.0);
    } else {
        p.p_u = rng.uniform();
    }
    if (uses_instrument(s)) p.p_z = rng.uniform();

    p.alpha_x = rng.normal();
    p.alpha_y = rng.normal();
    p.beta_ux = rng.bimodal();
    p.beta_uy = rng.bimodal();
    if (uses_instrument(s)) p.beta_zx = rng.bimodal();
    if (s == Scenario::BinaryEntropyConf) {
        // Entropy level and effect size are separate experimental factors:
        // the grid restarts inside every level block so that each block sees
        // the full effect range instead of one narrow slice of it.
        const int level = entropy_level(j, cfg.N);
        const int first = (level * cfg.N + 9) / 10 + 1;
        const int last = ((level + 1) * cfg.N + 9) / 10;
        p.beta_xy = grid_beta_xy(j - first + 1, last - first + 1);
    } else {
        p.beta_xy = grid_beta_xy(j, cfg.N);
    }

    if (continuous_outcome(s)) {
        p.sigma_x = rng.half_normal(1.0);
        p.sigma_y = rng.half_normal(1.0);
    }

    p.f_x = static_cast<Squash>(rng.pick(4));
    p.f_y = static_cast<Squash>(rng.pick(4));
    if (continuous_outcome(s)) {
        p.g_ux = rng.pick(kTransformCount);
        p.g_uy = rng.pick(kTransformCount);
    }
    return p;
}

SimulationRecord realize(const StructuralParams& p, Scenario s, int n,
                         Rng& rng, bool independent_pns_coupling) {
    if (n < 2) throw std::invalid_argument("need at least 2 units per simulation");
    const bool iv = uses_instrument(s);
    const bool continuous = continuous_outcome(s);
    const bool noisy = s != Scenario::BinaryEntropyConf;

    // Latent pass: per unit, in order, z, U and the noise draws.  The
    // transforms may need the sample mean of U, so this runs to completion
    // before any treatment is drawn.
    std::vector<double> u(n), eps_x(n, 0.0), eps_y(n, 0.0);
    std::vector<int> z(iv ? n : 0);
    for (int i = 0; i < n; ++i) {
        if (iv) z[i] = rng.bern(*p.p_z) ? 1 : 0;
        if (continuous) {
            u[i] = rng.normal(0.0, *p.sigma_u);
            const double sx = rng.half_normal(*p.sigma_x);
            const double sy = rng.half_normal(*p.sigma_y);
            eps_x[i] = rng.normal(0.0, sx);
            eps_y[i] = rng.normal(0.0, sy);
        } else {
            u[i] = rng.bern(*p.p_u) ? 1.0 : 0.0;
            if (noisy) {
                const double sigma = rng.half_normal(1.0);
                eps_x[i] = rng.normal(0.0, sigma);
                eps_y[i] = rng.normal(0.0, sigma);
            }
        }
    }

    double mu = 0.0;
    if (continuous) {
        for (double v : u) mu += v;
        mu /= n;
    }

    // Outcome pass: per unit, the treatment coin and (binary outcomes only)
    // one shared uniform driving both counterfactual coins, which makes the
    // observed outcome and the PNS ground truth live in the same world.
    std::vector<int> x(n);
    std::vector<double> y(n);
    double ate_sum = 0.0, pns_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double gx = continuous ? transform(*p.g_ux, u[i], mu) : u[i];
        const double gy = continuous ? transform(*p.g_uy, u[i], mu) : u[i];
        double xstar = p.alpha_x + p.beta_ux * gx + eps_x[i];
        if (iv) xstar += *p.beta_zx * z[i];
        x[i] = rng.bern(squash(p.f_x, xstar)) ? 1 : 0;

        const double base = p.alpha_y + p.beta_uy * gy + eps_y[i];
        const double y1 = squash(p.f_y, base + p.beta_xy);
        const double y0 = squash(p.f_y, base);
        ate_sum += y1 - y0;
        if (continuous) {
            y[i] = x[i] ? y1 : y0;
        } else {
            const double v = rng.uniform();
            y[i] = (v < (x[i] ? y1 : y0)) ? 1.0 : 0.0;
            pns_sum += independent_pns_coupling ? y1 * (1.0 - y0)
                                                : std::max(0.0, y1 - y0);
        }
    }

    SimulationRecord rec;
    rec.dataset = Dataset::from_columns(
        iv ? std::optional(std::move(z)) : std::nullopt, std::move(x),
        std::move(y));
    // a continuous model stays continuous even if every sampled y happened
    // to saturate at 0 or 1, which would otherwise flip the inferred type
    if (continuous) rec.dataset.outcome = OutcomeType::Continuous;
    rec.true_ate = ate_sum / n;
    if (!continuous) rec.true_pns = pns_sum / n;
    rec.params = p;
    return rec;
}

std::uint64_t simulation_seed(int j, const SimulationConfig& cfg) {
    check_config(cfg);
    check_index(j, cfg.N);
    return hash64(cfg.master_seed, scenario_seed_id(cfg.scenario),
                  std::uint64_t(j));
}

SimulationRecord generate(int j, const SimulationConfig& cfg) {
    check_config(cfg);
    check_index(j, cfg.N);
    Rng rng(simulation_seed(j, cfg));
    const StructuralParams p = sample_params(j, cfg, rng);
    SimulationRecord rec =
        realize(p, cfg.scenario, cfg.n, rng, cfg.independent_pns_coupling);
    rec.j = j;
    return rec;
}

}  // namespace causalbound
