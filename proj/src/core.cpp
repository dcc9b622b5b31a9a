#include "causalbound/core.hpp"

#include <algorithm>
#include <cmath>

namespace causalbound {

double query_range(Query q) { return q == Query::Ate ? 2.0 : 1.0; }

const char* query_name(Query q) { return q == Query::Ate ? "ATE" : "PNS"; }

Interval::Interval(double lo, double hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi)))
        throw std::invalid_argument("interval endpoints must be finite");
    if (lo > hi) {
        if (lo - hi > 1e-9)
            throw std::invalid_argument("interval lower exceeds upper");
        lo = hi = 0.5 * (lo + hi);  // snap solver round-off shut
    }
    lower = lo;
    upper = hi;
}

Interval trivial_interval(Query q) {
    return q == Query::Ate ? Interval(-1.0, 1.0) : Interval(0.0, 1.0);
}

Clipped clip_to_ceiling(const Interval& raw, Query q) {
    const Interval ceil = trivial_interval(q);
    const double lo = std::max(raw.lower, ceil.lower);
    const double hi = std::min(raw.upper, ceil.upper);
    if (lo > hi) return {ceil, true};  // no overlap: bound carried nothing
    return {Interval(lo, hi), false};
}

// ---------------------------------------------------------------------------

namespace {

bool is_binary_int(const std::vector<int>& v) {
    return std::all_of(v.begin(), v.end(), [](int b) { return b == 0 || b == 1; });
}

}  // namespace

Dataset Dataset::from_columns(std::optional<std::vector<int>> z,
                              std::vector<int> x, std::vector<double> y) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("dataset must contain at least one unit");
    if (y.size() != n || (z && z->size() != n))
        throw std::invalid_argument("dataset columns differ in length");
    if (!is_binary_int(x)) throw std::invalid_argument("treatment column must be 0/1");
    if (z && !is_binary_int(*z))
        throw std::invalid_argument("instrument column must be 0/1");

    bool binary = true;
    for (double v : y) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw std::invalid_argument("outcome values must lie in [0, 1]");
        if (v != 0.0 && v != 1.0) binary = false;
    }

    Dataset d;
    d.z = std::move(z);
    d.x = std::move(x);
    d.y = std::move(y);
    d.outcome = binary ? OutcomeType::Binary : OutcomeType::Continuous;
    return d;
}

Dataset binarize(const Dataset& d, double threshold) {
    Dataset out = d;
    for (double& v : out.y) v = v > threshold ? 1.0 : 0.0;
    out.outcome = OutcomeType::Binary;
    return out;
}

// ---------------------------------------------------------------------------

BinaryJoint BinaryJoint::from_probabilities(double p00, double p01, double p10,
                                            double p11, std::size_t n) {
    const double cells[4] = {p00, p01, p10, p11};
    double sum = 0.0;
    for (double c : cells) {
        if (!(c >= 0.0)) throw std::invalid_argument("joint cells must be >= 0");
        sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("joint cells must sum to 1");
    BinaryJoint j;
    j.p = {{{p00, p01}, {p10, p11}}};
    j.n = n;
    return j;
}

BinaryJoint BinaryJoint::from_counts(
    const std::array<std::array<std::uint64_t, 2>, 2>& c) {
    const std::uint64_t total = c[0][0] + c[0][1] + c[1][0] + c[1][1];
    if (total == 0) throw std::invalid_argument("joint requires at least one unit");
    BinaryJoint j;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            j.p[x][y] = static_cast<double>(c[x][y]) / static_cast<double>(total);
    j.n = static_cast<std::size_t>(total);
    j.counts = c;
    return j;
}

double BinaryJoint::px(int x) const {
    // Summing counts first keeps the marginal bit-identical to the column mean.
    if (counts) {
        const double total = static_cast<double>(n);
        return static_cast<double>((*counts)[x][0] + (*counts)[x][1]) / total;
    }
    return p[x][0] + p[x][1];
}

double BinaryJoint::py(int y) const {
    if (counts) {
        const double total = static_cast<double>(n);
        return static_cast<double>((*counts)[0][y] + (*counts)[1][y]) / total;
    }
    return p[0][y] + p[1][y];
}

double BinaryJoint::cond_y1(int x) const {
    const double mass = px(x);
    if (mass <= 0.0)
        throw std::invalid_argument("conditional undefined: treatment arm empty");
    return p[x][1] / mass;
}

BinaryJoint empirical_binary_joint(const Dataset& d) {
    if (d.outcome != OutcomeType::Binary)
        throw std::invalid_argument("empirical joint requires a binary outcome");
    std::array<std::array<std::uint64_t, 2>, 2> c{{{0, 0}, {0, 0}}};
    for (std::size_t i = 0; i < d.size(); ++i)
        ++c[d.x[i]][d.y[i] == 1.0 ? 1 : 0];
    return BinaryJoint::from_counts(c);
}

IvJoint empirical_iv_joint(const Dataset& d) {
    if (!d.has_instrument())
        throw std::invalid_argument("instrumented joint requires a z column");
    if (d.outcome != OutcomeType::Binary)
        throw std::invalid_argument("empirical joint requires a binary outcome");

    std::array<std::array<std::array<std::uint64_t, 2>, 2>, 2> c{};  // [z][x][y]
    std::uint64_t nz1 = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const int z = (*d.z)[i];
        nz1 += static_cast<std::uint64_t>(z);
        ++c[z][d.x[i]][d.y[i] == 1.0 ? 1 : 0];
    }
    const std::uint64_t total = d.size();
    if (nz1 == 0 || nz1 == total) throw data_error("degenerate instrument arm");

    IvJoint j;
    j.pz1 = static_cast<double>(nz1) / static_cast<double>(total);
    j.n = d.size();
    for (int z = 0; z < 2; ++z) j.arm[z] = BinaryJoint::from_counts(c[z]);
    return j;
}

// ---------------------------------------------------------------------------

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("binary_entropy requires p in [0, 1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double invert_binary_entropy(double h, bool reflect) {
    if (!(h >= 0.0 && h <= 1.0))
        throw std::invalid_argument("invert_binary_entropy requires h in [0, 1]");
    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        (binary_entropy(mid) < h ? lo : hi) = mid;
    }
    const double p = 0.5 * (lo + hi);
    return reflect ? 1.0 - p : p;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t hash64(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ull));
}

std::uint64_t hash64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return hash64(hash64(a, b), c);
}

}  // namespace causalbound
