// Core vocabulary for the bounding engine: causal queries, intervals,
// datasets, empirical joint distributions and the outcome record that every
// bounding algorithm produces.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace causalbound {

// Raised when an algorithm cannot produce a bound for data-dependent reasons
// (degenerate instrument arm, infeasible model, non-convergence).  Callers
// that need a uniform record convert this into a Failure outcome; genuine
// precondition violations use std::invalid_argument instead.
struct data_error : std::runtime_error {
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// The two causal estimands the engine bounds.
enum class Query { Ate, Pns };

// Width of the a-priori range of a query: ATE lives in [-1,1] (range 2),
// PNS in [0,1] (range 1).  Used to normalise widths across queries.
double query_range(Query q);

const char* query_name(Query q);  // "ATE" / "PNS"

// Closed interval with lower <= upper.  Construction enforces the ordering;
// tiny floating-point inversions (within 1e-9) are snapped shut rather than
// rejected so that solver round-off cannot poison downstream code.
struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    Interval() = default;
    Interval(double lo, double hi);

    double width() const { return upper - lower; }
    bool contains(double v) const { return lower <= v && v <= upper; }
};

// A-priori ceiling for a query: [-1,1] for ATE, [0,1] for PNS.
Interval trivial_interval(Query q);

// Result of intersecting a raw bound with the trivial ceiling.  If the
// intersection is empty the full ceiling is returned and the outcome is
// marked degenerate (the bound carried no usable information).
struct Clipped {
    Interval interval;
    bool degenerate = false;
};

Clipped clip_to_ceiling(const Interval& raw, Query q);

// ---------------------------------------------------------------------------
// Datasets

enum class OutcomeType { Binary, Continuous };

// Rectangular sample: optional binary instrument z, binary treatment x and
// outcome y.  Binary datasets restrict y to {0,1}; continuous ones to [0,1].
// Immutable after construction (modifying operations return new datasets).
struct Dataset {
    std::optional<std::vector<int>> z;
    std::vector<int> x;
    std::vector<double> y;
    OutcomeType outcome = OutcomeType::Binary;

    std::size_t size() const { return x.size(); }
    bool has_instrument() const { return z.has_value(); }

    // Validates column lengths, n >= 1, binary coding and the y range;
    // outcome type is inferred (all y in {0,1} -> Binary).
    static Dataset from_columns(std::optional<std::vector<int>> z,
                                std::vector<int> x,
                                std::vector<double> y);
};

// Thresholded copy of a dataset: y' = 1 if y > threshold else 0.
// Idempotent on binary data for the default threshold.
Dataset binarize(const Dataset& d, double threshold = 0.5);

// ---------------------------------------------------------------------------
// Empirical joints

// Joint distribution of (X, Y) for binary X and Y.  p[x][y] holds the cell
// probability.  When built from data the integer cell counts are kept so the
// marginals reconstruct empirical means exactly.
struct BinaryJoint {
    std::array<std::array<double, 2>, 2> p{{{0.0, 0.0}, {0.0, 0.0}}};
    std::size_t n = 0;
    std::optional<std::array<std::array<std::uint64_t, 2>, 2>> counts;

    static BinaryJoint from_probabilities(double p00, double p01, double p10,
                                          double p11, std::size_t n = 0);
    static BinaryJoint from_counts(
        const std::array<std::array<std::uint64_t, 2>, 2>& c);

    double px(int x) const;        // P(X = x)
    double py(int y) const;        // P(Y = y)
    double cond_y1(int x) const;   // P(Y = 1 | X = x); requires P(X=x) > 0
};

// Instrumented joint: P(Z = 1) plus one conditional (X, Y) table per z-arm.
struct IvJoint {
    double pz1 = 0.0;
    std::array<BinaryJoint, 2> arm{};  // arm[z] = P(X, Y | Z = z)
    std::size_t n = 0;
};

// Plug-in estimates with zero cells permitted.  Preconditions: columns are
// binary (throws std::invalid_argument otherwise); empirical_iv_joint throws
// data_error("degenerate instrument arm") when one z-arm is empty.
BinaryJoint empirical_binary_joint(const Dataset& d);
IvJoint empirical_iv_joint(const Dataset& d);

// ---------------------------------------------------------------------------
// Bound outcomes

// Terminal failure of one algorithm on one dataset, with a human-readable
// reason; failures are first-class results, not exceptions, at this level.
struct Failure {
    std::string reason;
};

// What one bounding algorithm produced for one simulated dataset.
struct BoundOutcome {
    std::string algorithm;   // display id, e.g. "ATE_manski"
    Query query = Query::Ate;
    std::variant<Interval, Failure> result;
    bool degenerate = false;       // clip emptied the raw bound
    double runtime_seconds = 0.0;
    std::optional<double> theta;       // entropy budget, when applicable
    std::optional<double> thetaerror;  // H(U) - theta, when applicable

    bool ok() const { return std::holds_alternative<Interval>(result); }
    const Interval& interval() const { return std::get<Interval>(result); }
    const std::string& reason() const { return std::get<Failure>(result).reason; }
};

// ---------------------------------------------------------------------------
// Entropy helpers (base-2 throughout)

// H(p) = -p log2 p - (1-p) log2 (1-p) with 0 log 0 = 0.
double binary_entropy(double p);

// Inverse of binary_entropy on [0, 0.5] by bisection (|H(p) - h| <= 1e-10).
// With reflect = true the complementary root 1 - p is returned.
double invert_binary_entropy(double h, bool reflect = false);

// ---------------------------------------------------------------------------
// Seed derivation

// splitmix64-based combiner for deriving independent child seeds; every
// derived stream (per-simulation, per-restart, per-theta-draw) goes through
// this so reruns and isolated replays agree bit for bit.
std::uint64_t hash64(std::uint64_t a, std::uint64_t b);
std::uint64_t hash64(std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace causalbound
