#include "kisched/loss.hpp"

#include <algorithm>
#include <cmath>

#include "kisched/errors.hpp"
#include "kisched/kis.hpp"

namespace kisched {

namespace {

void check_length(const WeightedGraph& g, const std::vector<double>& pi, const char* who) {
    if (static_cast<int>(pi.size()) != g.n())
        throw ParameterError(std::string(who) + ": pi length != n");
}

// neighbor likelihood mass minus tolerance, s_v = sum_{u in N(v)} pi_u - k
std::vector<double> neighbor_slack(const WeightedGraph& g, const std::vector<double>& pi, int k) {
    std::vector<double> s(g.n());
    for (int v = 0; v < g.n(); ++v) {
        double sum = 0.0;
        for (int u : g.neighbors(v)) sum += pi[u];
        s[v] = sum - static_cast<double>(k);
    }
    return s;
}

} // namespace

double reward_r1(const WeightedGraph& g, const std::vector<double>& pi) {
    check_length(g, pi, "reward_r1");
    double r = 0.0;
    for (int v = 0; v < g.n(); ++v) r += pi[v] * g.weight(v);
    return r;
}

double penalty_p1(const WeightedGraph& g, const std::vector<double>& pi, int k, P1Mode mode) {
    check_length(g, pi, "penalty_p1");
    const std::vector<double> s = neighbor_slack(g, pi, k);
    double p = 0.0;
    for (int v = 0; v < g.n(); ++v) {
        const double sv = mode == P1Mode::OneSided ? std::max(s[v], 0.0) : s[v];
        const double term = pi[v] * sv;
        p += term * term;
    }
    return p;
}

double penalty_p2(const WeightedGraph& g, const std::vector<double>& pi, double w_gcn) {
    check_length(g, pi, "penalty_p2");
    const double diff = reward_r1(g, pi) - w_gcn;
    return diff * diff;
}

CostBreakdown cost_and_grad(const WeightedGraph& g, const std::vector<double>& pi, int k,
                            const Betas& betas, std::vector<double>& dcost_dpi, P1Mode mode) {
    check_length(g, pi, "cost_and_grad");
    const int n = g.n();

    std::vector<double> scores(n);
    for (int v = 0; v < n; ++v) scores[v] = pi[v] * g.weight(v);
    const ScheduleSet decoded = greedy_k_independent_set(g, scores, k);

    CostBreakdown out;
    out.w_gcn = set_weight(g, decoded);
    out.r1 = reward_r1(g, pi);
    out.p1 = penalty_p1(g, pi, k, mode);
    out.p2 = penalty_p2(g, pi, out.w_gcn);
    out.cost = betas.beta1 * out.p1 + betas.beta2 * out.p2 - betas.beta3 * out.r1;

    // dP1/dpi_v = 2 pi_v s_v^2 + 2 sum_{u in N(v)} pi_u^2 s_u  (s clamped at 0
    // first in one-sided mode); dP2/dpi_v = 2 (R1 - w_gcn) w_v; dR1/dpi_v = w_v.
    std::vector<double> s = neighbor_slack(g, pi, k);
    if (mode == P1Mode::OneSided) {
        for (double& x : s) x = std::max(x, 0.0);
    }
    const double p2_common = 2.0 * (out.r1 - out.w_gcn);
    dcost_dpi.assign(n, 0.0);
    for (int v = 0; v < n; ++v) {
        double dp1 = 2.0 * pi[v] * s[v] * s[v];
        for (int u : g.neighbors(v)) dp1 += 2.0 * pi[u] * pi[u] * s[u];
        dcost_dpi[v] = betas.beta1 * dp1 + betas.beta2 * p2_common * g.weight(v) -
                       betas.beta3 * g.weight(v);
    }
    return out;
}

} // namespace kisched
