// Sweep evaluation: classify per-simulation outcomes as failed, invalid or
// valid, aggregate the five headline metrics per algorithm, pick the best
// algorithm of a simulation and extract observable dataset features.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causalbound/core.hpp"

namespace causalbound {

// One algorithm applied to one simulated dataset, with the ground truth it
// should have captured.  The algorithm id lives inside the outcome.
struct RunOutcome {
    int j = 0;
    BoundOutcome outcome;
    double truth = 0.0;

    const std::string& algorithm() const { return outcome.algorithm; }
};

enum class RunClass { Failed, Invalid, Valid };

// Exactly one class per run: no interval means Failed; a truth outside the
// interval means Invalid; everything else is Valid.
RunClass classify(const RunOutcome& r);

// How far the truth escapes the bound (0 when inside).
double invalid_delta(const Interval& bound, double truth);

// Aggregated metrics for one algorithm, all in percent and normalized by the
// query range.  Metrics whose denominator is empty stay unset (printed N/A).
struct AlgorithmMetrics {
    std::string algorithm;
    int runs = 0;
    std::optional<double> failure_rate;     // |F| / N
    std::optional<double> invalid_rate;     // |I| / (N - |F|)
    std::optional<double> bound_width;      // penalized width over all runs
    std::optional<double> net_bound_width;  // width over valid runs only
    std::optional<double> invalid_delta;    // mean violation over invalid runs
};

struct MetricsReport {
    Query query = Query::Ate;
    // sorted by net width ascending (unset last), ties by algorithm id
    std::vector<AlgorithmMetrics> per_algorithm;
};

// Aggregates a sweep.  Throws std::invalid_argument if a (j, algorithm)
// pair appears twice.
MetricsReport evaluate(const std::vector<RunOutcome>& runs, Query q);

// Best algorithm of one simulation: among runs that are valid or miss by
// less than one percent of the query range, the one with the tightest
// interval (ties broken lexicographically).  Unset when nothing qualifies.
// All runs must share one simulation index.
std::optional<std::string> best_algorithm(const std::vector<RunOutcome>& runs,
                                          Query q);

// Plug-in entropies and mutual informations in bits, computed from the
// empirical distribution.  Instrument features stay unset without z.
struct DatasetFeatures {
    double h_x = 0.0;
    double h_y = 0.0;
    double i_xy = 0.0;
    std::optional<double> h_z;
    std::optional<double> i_zx;
    std::optional<double> i_zy;
};

// Requires binary y (binarize continuous outcomes first).
DatasetFeatures features(const Dataset& d);

}  // namespace causalbound
