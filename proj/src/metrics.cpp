#include "causalbound/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace causalbound {

RunClass classify(const RunOutcome& r) {
    if (!r.outcome.ok()) return RunClass::Failed;
    const Interval& b = r.outcome.interval();
    if (r.truth < b.lower || r.truth > b.upper) return RunClass::Invalid;
    return RunClass::Valid;
}

double invalid_delta(const Interval& bound, double truth) {
    if (truth < bound.lower) return bound.lower - truth;
    if (truth > bound.upper) return truth - bound.upper;
    return 0.0;
}

MetricsReport evaluate(const std::vector<RunOutcome>& runs, Query q) {
    const double range = query_range(q);

    struct Acc {
        int n = 0, failed = 0, invalid = 0, valid = 0;
        double penalized_width = 0.0;  // already divided by the range
        double valid_width = 0.0;
        double delta = 0.0;
    };
    std::map<std::string, Acc> by_algo;
    std::set<std::pair<std::string, int>> seen;

    for (const RunOutcome& r : runs) {
        if (!seen.insert({r.algorithm(), r.j}).second)
            throw std::invalid_argument(
                "duplicate run for algorithm '" + r.algorithm() + "', simulation " +
                std::to_string(r.j));
        Acc& a = by_algo[r.algorithm()];
        ++a.n;
        switch (classify(r)) {
            case RunClass::Failed:
                ++a.failed;
                a.penalized_width += 1.0;  // trivial width equals the range
                break;
            case RunClass::Invalid:
                ++a.invalid;
                a.penalized_width += 1.0;
                a.delta += invalid_delta(r.outcome.interval(), r.truth) / range;
                break;
            case RunClass::Valid:
                ++a.valid;
                a.penalized_width += r.outcome.interval().width() / range;
                a.valid_width += r.outcome.interval().width() / range;
                break;
        }
    }

    MetricsReport report;
    report.query = q;
    for (const auto& [name, a] : by_algo) {
        AlgorithmMetrics m;
        m.algorithm = name;
        m.runs = a.n;
        m.failure_rate = 100.0 * a.failed / a.n;
        if (a.n > a.failed)
            m.invalid_rate = 100.0 * a.invalid / (a.n - a.failed);
        m.bound_width = 100.0 * a.penalized_width / a.n;
        if (a.valid > 0) m.net_bound_width = 100.0 * a.valid_width / a.valid;
        if (a.invalid > 0) m.invalid_delta = 100.0 * a.delta / a.invalid;
        report.per_algorithm.push_back(std::move(m));
    }

    std::sort(report.per_algorithm.begin(), report.per_algorithm.end(),
              [](const AlgorithmMetrics& a, const AlgorithmMetrics& b) {
                  const double na = a.net_bound_width.value_or(
                      std::numeric_limits<double>::infinity());
                  const double nb = b.net_bound_width.value_or(
                      std::numeric_limits<double>::infinity());
                  if (na != nb) return na < nb;
                  return a.algorithm < b.algorithm;
              });
    return report;
}

std::optional<std::string> best_algorithm(const std::vector<RunOutcome>& runs,
                                          Query q) {
    const double range = query_range(q);
    std::optional<std::string> best;
    double best_width = 0.0;
    for (const RunOutcome& r : runs) {
        if (r.j != runs.front().j)
            throw std::invalid_argument(
                "best_algorithm expects runs from a single simulation");
        if (!r.outcome.ok()) continue;
        const Interval& b = r.outcome.interval();
        // valid runs miss by zero, so this single check covers eligibility
        if (100.0 * invalid_delta(b, r.truth) / range >= 1.0) continue;
        if (!best || b.width() < best_width ||
            (b.width() == best_width && r.algorithm() < *best)) {
            best = r.algorithm();
            best_width = b.width();
        }
    }
    return best;
}

namespace {

// Entropy of an empirical distribution given raw cell counts.
double count_entropy(const std::vector<std::int64_t>& cells, std::int64_t n) {
    double h = 0.0;
    for (std::int64_t c : cells) {
        if (c == 0) continue;
        const double p = double(c) / double(n);
        h -= p * std::log2(p);
    }
    return h;
}

double pair_mi(const std::vector<int>& a, const std::vector<int>& b) {
    const std::int64_t n = std::int64_t(a.size());
    std::vector<std::int64_t> joint(4, 0), ma(2, 0), mb(2, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[2 * a[i] + b[i]] += 1;
        ma[a[i]] += 1;
        mb[b[i]] += 1;
    }
    return count_entropy(ma, n) + count_entropy(mb, n) - count_entropy(joint, n);
}

}  // namespace

DatasetFeatures features(const Dataset& d) {
    if (d.outcome != OutcomeType::Binary)
        throw std::invalid_argument("features need a binary outcome; binarize first");

    std::vector<int> y(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) y[i] = d.y[i] > 0.5 ? 1 : 0;

    auto marginal_entropy = [](const std::vector<int>& col) {
        double mean = 0.0;
        for (int v : col) mean += v;
        return binary_entropy(mean / double(col.size()));
    };

    DatasetFeatures f;
    f.h_x = marginal_entropy(d.x);
    f.h_y = marginal_entropy(y);
    f.i_xy = pair_mi(d.x, y);
    if (d.has_instrument()) {
        f.h_z = marginal_entropy(*d.z);
        f.i_zx = pair_mi(*d.z, d.x);
        f.i_zy = pair_mi(*d.z, y);
    }
    return f;
}

}  // namespace causalbound
