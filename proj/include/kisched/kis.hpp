#pragma once

#include <cstdint>
#include <vector>

#include "kisched/graph.hpp"

namespace kisched {

/// A decoded schedule: sigma over nodes plus the tolerance it was built for.
/// Feasibility means every selected node has at most k selected neighbors.
struct ScheduleSet {
    std::vector<std::uint8_t> members;
    int k = 0;

    int count() const {
        int c = 0;
        for (auto m : members) c += m != 0;
        return c;
    }
    std::vector<int> member_indices() const {
        std::vector<int> out;
        for (int v = 0; v < static_cast<int>(members.size()); ++v) {
            if (members[v]) out.push_back(v);
        }
        return out;
    }
};

bool is_k_independent(const WeightedGraph& g, const std::vector<std::uint8_t>& members, int k);

/// Greedy decoder. Visits nodes in descending score order (ties: lower index
/// first) and adds a node when doing so keeps every in-set node within
/// tolerance; once an in-set node reaches k selected neighbors, its remaining
/// unselected neighbors are barred. Plain greedy passes scores = node weights;
/// the GCN-greedy combination passes scores = likelihood * weight.
/// The result is always feasible and maximal.
ScheduleSet greedy_k_independent_set(const WeightedGraph& g, const std::vector<double>& scores,
                                     int k);

/// Exhaustive maximum-weight k-independent set over all 2^n subsets.
/// Test oracle, deliberately brute force; refuses n > 24. Weight ties are
/// broken toward the lexicographically smallest member vector.
ScheduleSet exact_max_weight_kis(const WeightedGraph& g, int k);

double set_weight(const WeightedGraph& g, const ScheduleSet& s);

} // namespace kisched
