#include "kisched/kis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "kisched/errors.hpp"

namespace kisched {

bool is_k_independent(const WeightedGraph& g, const std::vector<std::uint8_t>& members, int k) {
    if (static_cast<int>(members.size()) != g.n())
        throw ParameterError("is_k_independent: member vector length != n");
    for (int v = 0; v < g.n(); ++v) {
        if (!members[v]) continue;
        int selected = 0;
        for (int u : g.neighbors(v)) selected += members[u] != 0;
        if (selected > k) return false;
    }
    return true;
}

ScheduleSet greedy_k_independent_set(const WeightedGraph& g, const std::vector<double>& scores,
                                     int k) {
    const int n = g.n();
    if (static_cast<int>(scores.size()) != n)
        throw ParameterError("greedy: score vector length != n");
    if (k < 0) throw ParameterError("greedy: k must be >= 0");
    for (double s : scores) {
        if (std::isnan(s)) throw ParameterError("greedy: NaN score");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    ScheduleSet out;
    out.members.assign(n, 0);
    out.k = k;
    std::vector<std::uint8_t> eligible(n, 1);
    std::vector<int> inset_deg(n, 0); // selected neighbors of each node

    auto bar_neighbors_of = [&](int u) {
        for (int t : g.neighbors(u)) {
            if (!out.members[t]) eligible[t] = 0;
        }
    };

    for (int v : order) {
        if (!eligible[v]) continue;
        if (inset_deg[v] > k) continue;
        bool neighbors_have_room = true;
        for (int u : g.neighbors(v)) {
            if (out.members[u] && inset_deg[u] >= k) { neighbors_have_room = false; break; }
        }
        if (!neighbors_have_room) continue;

        out.members[v] = 1;
        for (int u : g.neighbors(v)) ++inset_deg[u];

        // Tolerance-reached rule: a selected node with exactly k selected
        // neighbors bars all its remaining unselected neighbors.
        if (inset_deg[v] == k) bar_neighbors_of(v);
        for (int u : g.neighbors(v)) {
            if (out.members[u] && inset_deg[u] == k) bar_neighbors_of(u);
        }
    }
    return out;
}

ScheduleSet exact_max_weight_kis(const WeightedGraph& g, int k) {
    const int n = g.n();
    if (k < 0) throw ParameterError("exact: k must be >= 0");
    if (n > 24) throw CapacityError("exact: n > 24 exceeds the exhaustive-search limit");

    std::vector<std::uint32_t> adj(n, 0);
    for (int v = 0; v < n; ++v) {
        for (int u : g.neighbors(v)) adj[v] |= 1u << u;
    }

    // Lexicographic order on the member vector (sigma_0 first) equals integer
    // order on the bit-reversed mask.
    auto lex_key = [n](std::uint32_t mask) {
        std::uint32_t key = 0;
        for (int v = 0; v < n; ++v) {
            if (mask & (1u << v)) key |= 1u << (n - 1 - v);
        }
        return key;
    };

    std::uint32_t best_mask = 0;
    double best_weight = 0.0; // empty set is always feasible
    const std::uint32_t limit = n == 32 ? 0xffffffffu : (1u << n) - 1;
    for (std::uint32_t mask = 0; mask <= limit; ++mask) {
        bool feasible = true;
        double w = 0.0;
        for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            if (std::popcount(adj[v] & mask) > k) { feasible = false; break; }
            w += g.weight(v);
        }
        if (!feasible) continue;
        if (w > best_weight ||
            (w == best_weight && lex_key(mask) < lex_key(best_mask))) {
            best_weight = w;
            best_mask = mask;
        }
        if (mask == limit) break;
    }

    ScheduleSet out;
    out.members.assign(n, 0);
    out.k = k;
    for (int v = 0; v < n; ++v) out.members[v] = (best_mask >> v) & 1u;
    return out;
}

double set_weight(const WeightedGraph& g, const ScheduleSet& s) {
    if (static_cast<int>(s.members.size()) != g.n())
        throw ParameterError("set_weight: member vector length != n");
    double total = 0.0;
    for (int v = 0; v < g.n(); ++v) {
        if (s.members[v]) total += g.weight(v);
    }
    return total;
}

} // namespace kisched
