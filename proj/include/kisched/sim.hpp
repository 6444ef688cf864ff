#pragma once

#include <cstdint>
#include <vector>

#include "kisched/gcn.hpp"
#include "kisched/graph.hpp"
#include "kisched/kis.hpp"
#include "kisched/rng.hpp"

namespace kisched {

/// Per-node queue lengths at slot t, advanced only through step().
struct QueueState {
    std::vector<double> q;
    long t = 0;
};

enum class ArrivalKind { Bernoulli, Poisson, Constant };

struct ArrivalProcess {
    ArrivalKind kind = ArrivalKind::Bernoulli;
    std::vector<double> rates; // lambda_v, one per node
    std::uint64_t seed = 1;
};

ArrivalProcess uniform_arrivals(ArrivalKind kind, double rate, int n, std::uint64_t seed);

/// One slot of arrivals for the current state; consumes rng node by node.
std::vector<double> sample_arrivals(const ArrivalProcess& proc, Rng& rng);

/// Queue recursion q <- max(0, q + arrivals - service) with unit service on
/// scheduled nodes. The schedule must be feasible for (g, schedule.k).
QueueState step(const WeightedGraph& g, const QueueState& state,
                const std::vector<double>& arrivals, const ScheduleSet& schedule);

enum class SchedulerKind { Greedy, GcnGreedy, Exact };

struct SimReport {
    long horizon = 0;
    std::vector<double> avg_queue;   // time-averaged per node
    double max_queue = 0.0;          // over all nodes and slots
    long violations = 0;             // feasibility failures (always 0 on success)
    std::vector<double> total_queue; // sum over nodes, one entry per slot
};

/// Slotted Max-Weight loop: each slot, the scheduler sees the current queue
/// lengths as node weights (scaled into [0,1] for the GCN, which leaves the
/// greedy order unchanged), produces a schedule, and the queues advance.
SimReport run_sim(const WeightedGraph& g, int k, const ArrivalProcess& arrivals,
                  SchedulerKind scheduler, const GcnModel* model, long horizon);

/// Least-squares slope of series over [begin, end), in units per slot.
double linear_slope(const std::vector<double>& series, std::size_t begin, std::size_t end);

} // namespace kisched
