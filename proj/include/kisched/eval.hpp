#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kisched/dataset.hpp"
#include "kisched/gcn.hpp"
#include "kisched/loss.hpp"

namespace kisched {

struct PerGraphRatio {
    std::uint64_t graph_id = 0;
    double w_gcn = 0.0;
    double w_gr = 0.0;
    double ratio = 0.0;
};

/// Ratio statistics W_gcn / W_gr over a test set. Variance is the population
/// variance (divide by count). Graphs with W_gr == 0 are skipped and counted.
struct RatioStats {
    double mean = 0.0;
    double variance = 0.0;
    std::uint64_t count = 0;
    std::uint64_t skipped = 0;
    std::vector<PerGraphRatio> per_graph;
};

/// W_gr and W_gcn for one graph: plain greedy on the weights vs greedy on
/// likelihood * weight. Both decoded sets are re-verified feasible.
PerGraphRatio graph_ratio(const GcnModel& model, const WeightedGraph& g, int k);

RatioStats evaluate(const GcnModel& model, const std::vector<GraphRecord>& test_set, int k);

struct EvalConfigRow {
    std::string train_family;
    std::string test_family;
    int k = 0;
    Betas betas;
};

/// CSV table, one row per (config, stats) pair. Variance is reported in
/// absolute units.
std::string emit_table(const std::vector<std::pair<EvalConfigRow, RatioStats>>& rows);

/// CSV detail dump: graph_id, w_gcn, w_gr, ratio.
std::string emit_per_graph(const RatioStats& stats);

} // namespace kisched
