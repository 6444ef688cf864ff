#pragma once

#include <vector>

#include "kisched/graph.hpp"

namespace kisched {

/// Weights of the three cost terms: cost = beta1*P1 + beta2*P2 - beta3*R1.
struct Betas {
    double beta1 = 5.0;
    double beta2 = 5.0;
    double beta3 = 10.0;
};

/// How P1 treats a selected node whose neighbor mass sits below k. The square
/// in the definition also charges that side; the one-sided variant zeroes it
/// and exists only as an experiment flag, off by default.
enum class P1Mode { TwoSided, OneSided };

struct CostBreakdown {
    double r1 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double w_gcn = 0.0; // greedy-decoded total weight, a stop-gradient constant
    double cost = 0.0;
};

/// R1 = sum_v pi_v w_v
double reward_r1(const WeightedGraph& g, const std::vector<double>& pi);

/// P1 = sum_v ( pi_v * (sum_{u in N(v)} pi_u - k) )^2
double penalty_p1(const WeightedGraph& g, const std::vector<double>& pi, int k,
                  P1Mode mode = P1Mode::TwoSided);

/// P2 = (sum_v pi_v w_v - w_gcn)^2
double penalty_p2(const WeightedGraph& g, const std::vector<double>& pi, double w_gcn);

/// Decodes w_gcn by running greedy on scores pi_v * w_v, assembles the
/// combined cost, and returns exact partials dcost/dpi_v (w_gcn held
/// constant: the decode is not differentiable).
CostBreakdown cost_and_grad(const WeightedGraph& g, const std::vector<double>& pi, int k,
                            const Betas& betas, std::vector<double>& dcost_dpi,
                            P1Mode mode = P1Mode::TwoSided);

} // namespace kisched
