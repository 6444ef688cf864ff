#include "kisched/eval.hpp"

#include <cstdio>

#include "kisched/errors.hpp"
#include "kisched/kis.hpp"

namespace kisched {

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

PerGraphRatio graph_ratio(const GcnModel& model, const WeightedGraph& g, int k) {
    PerGraphRatio out;

    const ScheduleSet plain = greedy_k_independent_set(g, g.weights(), k);
    if (!is_k_independent(g, plain.members, k))
        throw ContractError("evaluate: plain greedy produced an infeasible set");
    out.w_gr = set_weight(g, plain);

    ForwardTrace trace;
    const std::vector<double> pi = forward(model, g, trace);
    std::vector<double> scores(g.n());
    for (int v = 0; v < g.n(); ++v) scores[v] = pi[v] * g.weight(v);
    const ScheduleSet decoded = greedy_k_independent_set(g, scores, k);
    if (!is_k_independent(g, decoded.members, k))
        throw ContractError("evaluate: gcn-greedy produced an infeasible set");
    out.w_gcn = set_weight(g, decoded);

    out.ratio = out.w_gr > 0.0 ? out.w_gcn / out.w_gr : 0.0;
    return out;
}

RatioStats evaluate(const GcnModel& model, const std::vector<GraphRecord>& test_set, int k) {
    if (test_set.empty()) throw ParameterError("evaluate: empty test set");

    RatioStats stats;
    for (const GraphRecord& rec : test_set) {
        PerGraphRatio row = graph_ratio(model, rec.graph, k);
        row.graph_id = rec.id;
        if (row.w_gr == 0.0) {
            ++stats.skipped;
            continue;
        }
        stats.per_graph.push_back(row);
    }
    stats.count = stats.per_graph.size();
    if (stats.count == 0) return stats;

    double sum = 0.0;
    for (const auto& row : stats.per_graph) sum += row.ratio;
    stats.mean = sum / static_cast<double>(stats.count);
    double sq = 0.0;
    for (const auto& row : stats.per_graph) {
        const double d = row.ratio - stats.mean;
        sq += d * d;
    }
    stats.variance = sq / static_cast<double>(stats.count);
    return stats;
}

std::string emit_table(const std::vector<std::pair<EvalConfigRow, RatioStats>>& rows) {
    std::string out = "train_family,test_family,k,beta1,beta2,beta3,mean_ratio,variance,count\n";
    for (const auto& [cfg, stats] : rows) {
        out += cfg.train_family + ',' + cfg.test_family + ',' + std::to_string(cfg.k) + ',' +
               g17(cfg.betas.beta1) + ',' + g17(cfg.betas.beta2) + ',' + g17(cfg.betas.beta3) +
               ',' + g17(stats.mean) + ',' + g17(stats.variance) + ',' +
               std::to_string(stats.count) + '\n';
    }
    return out;
}

std::string emit_per_graph(const RatioStats& stats) {
    std::string out = "graph_id,w_gcn,w_gr,ratio\n";
    for (const auto& row : stats.per_graph) {
        out += std::to_string(row.graph_id) + ',' + g17(row.w_gcn) + ',' + g17(row.w_gr) + ',' +
               g17(row.ratio) + '\n';
    }
    return out;
}

} // namespace kisched
