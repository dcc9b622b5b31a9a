#include "causalbound/em_bounds.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace causalbound {

namespace {

// Observed-cell index 2x + y within one arm of the data.
struct Consistency {
    // state_cell[u][arm]: the one cell state u produces under that arm
    std::vector<std::array<int, 2>> state_cell;
    // w[arm][cell]: observed mass, summing to 1 over all arms and cells
    std::array<std::array<double, 4>, 2> w;
    int arms = 1;

    int states_per_cell() const {
        return static_cast<int>(state_cell.size()) / 4;
    }
};

Consistency conf_structure(const BinaryJoint& j) {
    Consistency s;
    s.arms = 1;
    s.state_cell.resize(8);
    for (int u = 0; u < 8; ++u) {
        const int x = u & 1;
        const int y = x ? (u >> 2) & 1 : (u >> 1) & 1;
        s.state_cell[u] = {2 * x + y, 0};
    }
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) s.w[0][2 * x + y] = j.p[x][y];
    s.w[1] = {0, 0, 0, 0};
    return s;
}

Consistency iv_structure(const IvJoint& j) {
    Consistency s;
    s.arms = 2;
    s.state_cell.resize(16);
    for (int u = 0; u < 16; ++u) {
        const int c = u >> 2, r = u & 3;
        const int y0 = r >> 1, y1 = r & 1;
        for (int z = 0; z < 2; ++z) {
            const int x = z == 0 ? (c >> 1) & 1 : c & 1;
            const int y = x ? y1 : y0;
            s.state_cell[u][z] = 2 * x + y;
        }
    }
    for (int z = 0; z < 2; ++z) {
        const double pz = z ? j.pz1 : 1.0 - j.pz1;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) s.w[z][2 * x + y] = pz * j.arm[z].p[x][y];
    }
    return s;
}

std::vector<double> checked_init(std::vector<double> init, std::size_t want) {
    if (init.size() != want)
        throw std::invalid_argument("init has the wrong number of latent states");
    double sum = 0.0;
    for (double& v : init) {
        if (v < -1e-12)
            throw std::invalid_argument("init must be a probability distribution");
        v = std::max(v, 0.0);
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("init must be a probability distribution");
    for (double& v : init) v /= sum;
    return init;
}

EmResult em_loop(const Consistency& s, std::vector<double> p,
                 const EmConfig& cfg) {
    if (cfg.maxiter < 1) throw std::invalid_argument("maxiter must be >= 1");
    const std::size_t n = p.size();
    EmResult out;
    std::vector<double> next(n);
    for (int iter = 0;; ++iter) {
        std::array<std::array<double, 4>, 2> denom{};
        for (std::size_t u = 0; u < n; ++u)
            for (int a = 0; a < s.arms; ++a) denom[a][s.state_cell[u][a]] += p[u];

        double loglik = 0.0;
        for (int a = 0; a < s.arms; ++a)
            for (int cell = 0; cell < 4; ++cell)
                if (s.w[a][cell] > 0.0)
                    loglik +=
                        s.w[a][cell] * std::log(std::max(denom[a][cell], 1e-300));
        out.loglik.push_back(loglik);

        const std::size_t k = out.loglik.size();
        if (k >= 2 && loglik - out.loglik[k - 2] < cfg.loglik_tol) break;
        if (iter == cfg.maxiter) break;

        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t u = 0; u < n; ++u) {
            for (int a = 0; a < s.arms; ++a) {
                const int cell = s.state_cell[u][a];
                if (s.w[a][cell] <= 0.0) continue;
                const double d = denom[a][cell];
                // an observed cell that current p gives zero mass: spread its
                // weight evenly over the states that could have produced it
                const double resp =
                    d > 1e-300 ? p[u] / d : 1.0 / s.states_per_cell();
                next[u] += s.w[a][cell] * resp;
            }
        }
        p = next;
    }
    out.p_u = std::move(p);
    return out;
}

Interval emcc_common(const Consistency& s, std::size_t nstates, ScmDag dag,
                     std::optional<double> pz1, Query q, const EmConfig& cfg) {
    if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (!(cfg.init_alpha > 0.0))
        throw std::invalid_argument("init_alpha must be positive");
    if (cfg.max_parallel < 0)
        throw std::invalid_argument("max_parallel must be >= 0");

    auto run_value = [&](int run) {
        std::mt19937_64 rng(hash64(cfg.seed, static_cast<std::uint64_t>(run)));
        std::gamma_distribution<double> gamma(cfg.init_alpha, 1.0);
        std::vector<double> init(nstates);
        double sum = 0.0;
        do {
            sum = 0.0;
            for (double& v : init) sum += v = gamma(rng);
        } while (sum < 1e-300);
        for (double& v : init) v /= sum;

        EmResult fit = em_loop(s, std::move(init), cfg);
        return scm_query({dag, std::move(fit.p_u), pz1}, q);
    };

    std::vector<double> vals(static_cast<std::size_t>(cfg.runs));
    int threads = cfg.max_parallel;
    if (threads == 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;
    }
    threads = std::min(threads, cfg.runs);
    if (threads <= 1) {
        for (int run = 0; run < cfg.runs; ++run) vals[run] = run_value(run);
    } else {
        std::atomic<int> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                const int run = next.fetch_add(1);
                if (run >= cfg.runs) return;
                try {
                    vals[run] = run_value(run);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    return clip_to_ceiling(Interval(*lo, *hi), q).interval;
}

}  // namespace

EmResult em_run(const BinaryJoint& j, std::vector<double> init,
                const EmConfig& cfg) {
    return em_loop(conf_structure(j), checked_init(std::move(init), 8), cfg);
}

EmResult em_run(const IvJoint& j, std::vector<double> init,
                const EmConfig& cfg) {
    return em_loop(iv_structure(j), checked_init(std::move(init), 16), cfg);
}

double scm_query(const CanonicalScm& m, Query q) {
    const std::size_t want = m.dag == ScmDag::Conf ? 8 : 16;
    if (m.p_u.size() != want)
        throw std::invalid_argument("p_u has the wrong number of latent states");
    double responder = 0.0, contrarian = 0.0;
    if (m.dag == ScmDag::Conf) {
        responder = m.p_u[4] + m.p_u[5];    // y1 = 1, y0 = 0
        contrarian = m.p_u[2] + m.p_u[3];   // y1 = 0, y0 = 1
    } else {
        for (int c = 0; c < 4; ++c) {
            responder += m.p_u[4 * c + 1];  // r = 2*y0 + y1 = 1
            contrarian += m.p_u[4 * c + 2];
        }
    }
    return q == Query::Pns ? responder : responder - contrarian;
}

Interval emcc_bounds(const BinaryJoint& j, Query q, const EmConfig& cfg) {
    return emcc_common(conf_structure(j), 8, ScmDag::Conf, std::nullopt, q, cfg);
}

Interval emcc_bounds(const IvJoint& j, Query q, const EmConfig& cfg) {
    return emcc_common(iv_structure(j), 16, ScmDag::Iv, j.pz1, q, cfg);
}

}  // namespace causalbound
