#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kisched/errors.hpp"
#include "kisched/kis.hpp"
#include "kisched/loss.hpp"
#include "test_util.hpp"

using namespace kisched;

namespace {

// Frozen-decode cost used by the finite-difference checks: w_gcn is treated
// as a constant, exactly as cost_and_grad differentiates it.
double frozen_cost(const WeightedGraph& g, const std::vector<double>& pi, int k,
                   const Betas& betas, double w_gcn, P1Mode mode = P1Mode::TwoSided) {
    return betas.beta1 * penalty_p1(g, pi, k, mode) + betas.beta2 * penalty_p2(g, pi, w_gcn) -
           betas.beta3 * reward_r1(g, pi);
}

std::vector<double> random_pi(std::uint64_t case_id, int n) {
    Rng rng(derive_seed(0xabc, "pi", case_id));
    std::vector<double> pi(n);
    for (double& p : pi) p = 0.02 + 0.96 * rng.uniform01();
    return pi;
}

} // namespace

TEST_CASE("reward r1 arithmetic") {
    const WeightedGraph two(2, {}, {1.0, 2.0});
    CHECK(reward_r1(two, {0.5, 0.5}) == doctest::Approx(1.5));
    CHECK(reward_r1(two, {0.0, 0.0}) == 0.0);
    CHECK(reward_r1(two, {1.0, 1.0}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(reward_r1(two, {0.5}), ParameterError);
}

TEST_CASE("penalty p1 on hand cases") {
    const WeightedGraph path = testutil::path3();
    CHECK(penalty_p1(path, {1.0, 0.0, 1.0}, 0) == 0.0); // independent-set indicator
    CHECK(penalty_p1(path, {0.0, 0.0, 0.0}, 0) == 0.0);

    const WeightedGraph tri = testutil::triangle();
    CHECK(penalty_p1(tri, {1.0, 1.0, 1.0}, 0) == doctest::Approx(12.0)); // 3 * (1*(2-0))^2
    CHECK(penalty_p1(tri, {1.0, 1.0, 1.0}, 2) == 0.0);
    CHECK_THROWS_AS(penalty_p1(tri, {1.0}, 0), ParameterError);
}

TEST_CASE("penalty p1 separates independent from non-independent indicators at k=0") {
    for (std::uint64_t c = 0; c < 100; ++c) {
        const WeightedGraph g = testutil::random_graph(c, 12);
        const ScheduleSet indep = greedy_k_independent_set(g, g.weights(), 0);
        std::vector<double> pi(g.n());
        for (int v = 0; v < g.n(); ++v) pi[v] = indep.members[v] ? 1.0 : 0.0;
        CHECK(penalty_p1(g, pi, 0) == 0.0);

        if (g.edge_count() > 0) {
            // select both endpoints of some edge
            const auto [u, v] = g.edge_list().front();
            std::vector<double> bad(g.n(), 0.0);
            bad[u] = 1.0;
            bad[v] = 1.0;
            CHECK(penalty_p1(g, bad, 0) > 0.0);
        }
    }
}

TEST_CASE("penalty p2 arithmetic") {
    const WeightedGraph two(2, {}, {1.0, 2.0});
    CHECK(penalty_p2(two, {0.5, 0.5}, 2.0) == doctest::Approx(0.25)); // (1.5 - 2)^2
    CHECK(penalty_p2(two, {0.5, 0.5}, 1.5) == 0.0);
    CHECK(penalty_p2(two, {0.0, 0.0}, 0.9) == doctest::Approx(0.81));
}

TEST_CASE("cost combines the three terms exactly") {
    // arithmetic of the combination itself
    const Betas betas{5.0, 5.0, 10.0};
    CHECK(betas.beta1 * 0.0 + betas.beta2 * 0.25 - betas.beta3 * 1.5 == doctest::Approx(-13.75));

    // crafted instance: 2 isolated nodes, w = (1,2), pi = (0.5,0.5).
    // Greedy takes both nodes, so w_gcn = 3, r1 = 1.5, p1 = 0, p2 = 2.25.
    const WeightedGraph two(2, {}, {1.0, 2.0});
    std::vector<double> dcost;
    const CostBreakdown b = cost_and_grad(two, {0.5, 0.5}, 0, betas, dcost);
    CHECK(b.w_gcn == doctest::Approx(3.0));
    CHECK(b.r1 == doctest::Approx(1.5));
    CHECK(b.p1 == 0.0);
    CHECK(b.p2 == doctest::Approx(2.25));
    CHECK(b.cost == doctest::Approx(5.0 * 2.25 - 15.0));
    // internal consistency holds exactly as computed
    CHECK(b.cost == betas.beta1 * b.p1 + betas.beta2 * b.p2 - betas.beta3 * b.r1);
}

TEST_CASE("pure-reward betas give dcost = -w") {
    for (std::uint64_t c = 0; c < 20; ++c) {
        const WeightedGraph g = testutil::random_graph(c, 15);
        const std::vector<double> pi = random_pi(c, g.n());
        std::vector<double> dcost;
        cost_and_grad(g, pi, static_cast<int>(c % 3), {0.0, 0.0, 1.0}, dcost);
        for (int v = 0; v < g.n(); ++v) CHECK(dcost[v] == -g.weight(v));
    }
}

TEST_CASE("terms are non-negative for pi in [0,1]") {
    for (std::uint64_t c = 0; c < 200; ++c) {
        const WeightedGraph g = testutil::random_graph(c, 20);
        const std::vector<double> pi = random_pi(c, g.n());
        const int k = static_cast<int>(c % 5);
        CHECK(reward_r1(g, pi) >= 0.0);
        CHECK(penalty_p1(g, pi, k) >= 0.0);
        CHECK(penalty_p1(g, pi, k, P1Mode::OneSided) >= 0.0);
        std::vector<double> dcost;
        const CostBreakdown b = cost_and_grad(g, pi, k, {5, 5, 10}, dcost);
        CHECK(b.p2 >= 0.0);
    }
}

TEST_CASE("dcost matches central differences with the decode frozen") {
    const double h = 1e-5;
    double worst = 0.0;
    for (std::uint64_t c = 0; c < 40; ++c) {
        const WeightedGraph g = testutil::random_graph(c, 10);
        std::vector<double> pi = random_pi(c, g.n());
        const int k = static_cast<int>(c % 4);
        Rng rng(derive_seed(0xdead, "betas", c));
        const Betas betas{10.0 * rng.uniform01(), 10.0 * rng.uniform01(),
                          20.0 * rng.uniform01()};
        const P1Mode mode = c % 3 == 0 ? P1Mode::OneSided : P1Mode::TwoSided;

        std::vector<double> dcost;
        const CostBreakdown b = cost_and_grad(g, pi, k, betas, dcost, mode);

        for (int v = 0; v < g.n(); ++v) {
            const double saved = pi[v];
            pi[v] = saved + h;
            const double cp = frozen_cost(g, pi, k, betas, b.w_gcn, mode);
            pi[v] = saved - h;
            const double cm = frozen_cost(g, pi, k, betas, b.w_gcn, mode);
            pi[v] = saved;
            const double numeric = (cp - cm) / (2.0 * h);
            const double rel = std::abs(dcost[v] - numeric) /
                               std::max({std::abs(dcost[v]), std::abs(numeric), 1e-6});
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("dcost at the zero likelihood vector") {
    const WeightedGraph path = testutil::path3();
    const std::vector<double> pi(3, 0.0);
    const Betas betas{5.0, 5.0, 10.0};
    std::vector<double> dcost;
    const CostBreakdown b = cost_and_grad(path, pi, 0, betas, dcost);
    // all scores are 0, greedy still fills a maximal set, so w_gcn > 0
    CHECK(b.w_gcn > 0.0);
    const double h = 1e-6;
    for (int v = 0; v < 3; ++v) {
        std::vector<double> bumped(pi);
        bumped[v] = h;
        const double numeric =
            (frozen_cost(path, bumped, 0, betas, b.w_gcn) - frozen_cost(path, pi, 0, betas, b.w_gcn)) / h;
        CHECK(dcost[v] == doctest::Approx(numeric).epsilon(1e-4));
    }
}

TEST_CASE("one-sided p1 ignores slack below tolerance") {
    // single selected node with no selected neighbors: s_v = -k < 0
    const WeightedGraph path = testutil::path3();
    const std::vector<double> pi = {1.0, 0.0, 0.0};
    CHECK(penalty_p1(path, pi, 2, P1Mode::OneSided) == 0.0);
    CHECK(penalty_p1(path, pi, 2, P1Mode::TwoSided) == doctest::Approx(4.0)); // (1*(0-2))^2
}
