#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kisched/errors.hpp"
#include "kisched/eval.hpp"
#include "kisched/kis.hpp"
#include "kisched/train.hpp"
#include "test_util.hpp"

using namespace kisched;

namespace {

std::vector<GraphRecord> make_test_set(const std::string& family, int n, std::uint64_t count,
                                       std::uint64_t seed) {
    DatasetSpec spec;
    spec.family = family;
    spec.n = n;
    spec.params = family == "ba" ? ba_attachment_counts(n, default_p_values())
                                 : default_p_values();
    spec.master_seed = seed;
    return build_split(spec, "test", count).records;
}

} // namespace

TEST_CASE("the all-zero model scores exactly 1.0 with zero variance") {
    const GcnModel zero = zero_model({1, 32, 1});
    for (const char* family : {"er", "ba"}) {
        const auto test_set = make_test_set(family, 24, 40, 7);
        const RatioStats stats = evaluate(zero, test_set, 0);
        CHECK(stats.count == 40);
        CHECK(stats.skipped == 0);
        CHECK(stats.mean == 1.0);      // exact: uniform scaling preserves greedy
        CHECK(stats.variance == 0.0);  // exact
        for (const auto& row : stats.per_graph) CHECK(row.ratio == 1.0);
    }
}

TEST_CASE("two-graph test set matches the hand computation") {
    // Single-layer model, theta0 = [[0]], theta1 = [[50]]:
    //   pi = sigmoid(50 * (Lw))  with L the normalized Laplacian.
    GcnModel model;
    model.dims = {1, 1};
    GcnModel::Layer layer;
    layer.theta0 = Matrix(1, 1);
    layer.theta1 = Matrix(1, 1);
    layer.theta1(0, 0) = 50.0;
    model.layers.push_back(layer);

    // Graph A: path 0-1-2 with w = (0.5, 0.6, 0.4).
    //   Lw = (0.5 - 0.6/sqrt2, 0.6 - 0.9/sqrt2, 0.4 - 0.6/sqrt2);
    //   the sign pattern (+,-,-) pushes pi_0 up and pi_1, pi_2 down, so the
    //   decoded order starts at node 0 and greedy returns {0,2}: w_gcn = 0.9
    //   while plain greedy returns {1}: w_gr = 0.6, ratio 1.5.
    // Graph B: edge 0-1 with w = (0.3, 0.8): Lw = (-0.5, 0.5), both decoders
    //   return {1}: ratio 1.
    GraphRecord a;
    a.id = 0;
    a.family = "er";
    a.graph = testutil::path3();
    GraphRecord b;
    b.id = 1;
    b.family = "er";
    b.graph = WeightedGraph(2, {{0, 1}}, {0.3, 0.8});

    // independent recomputation of pi for graph A
    const double s = 1.0 / std::sqrt(2.0);
    const std::vector<double> lw = {0.5 - 0.6 * s, 0.6 - 0.9 * s, 0.4 - 0.6 * s};
    ForwardTrace trace;
    const std::vector<double> pi = forward(model, a.graph, trace);
    for (int v = 0; v < 3; ++v) {
        const double expected = 1.0 / (1.0 + std::exp(-50.0 * lw[v]));
        CHECK(pi[v] == doctest::Approx(expected).epsilon(1e-12));
    }

    const RatioStats stats = evaluate(model, {a, b}, 0);
    REQUIRE(stats.count == 2);
    CHECK(stats.per_graph[0].w_gr == doctest::Approx(0.6));
    CHECK(stats.per_graph[0].w_gcn == doctest::Approx(0.9));
    CHECK(stats.per_graph[0].ratio == doctest::Approx(1.5));
    CHECK(stats.per_graph[1].ratio == doctest::Approx(1.0));
    CHECK(stats.mean == doctest::Approx(1.25));
    CHECK(stats.variance == doctest::Approx(0.0625)); // ((0.25)^2 + (0.25)^2) / 2
}

TEST_CASE("graphs with zero baseline weight are skipped and counted") {
    GraphRecord zero_w;
    zero_w.id = 0;
    zero_w.family = "er";
    zero_w.graph = WeightedGraph(3, {{0, 1}}, {0.0, 0.0, 0.0});
    GraphRecord normal;
    normal.id = 1;
    normal.family = "er";
    normal.graph = testutil::path3();

    const GcnModel zero = zero_model({1, 4, 1});
    const RatioStats stats = evaluate(zero, {zero_w, normal}, 0);
    CHECK(stats.count == 1);
    CHECK(stats.skipped == 1);
    CHECK(stats.mean == 1.0);
}

TEST_CASE("evaluate validates inputs and is deterministic") {
    const GcnModel zero = zero_model({1, 4, 1});
    CHECK_THROWS_AS(evaluate(zero, {}, 0), ParameterError);

    const auto test_set = make_test_set("ba", 20, 15, 3);
    Rng rng(9);
    const GcnModel model = init_model({1, 8, 1}, rng);
    const RatioStats s1 = evaluate(model, test_set, 1);
    const RatioStats s2 = evaluate(model, test_set, 1);
    CHECK(s1.mean == s2.mean);
    CHECK(s1.variance == s2.variance);
    for (const auto& row : s1.per_graph) {
        CHECK(row.ratio > 0.0);
        CHECK(row.w_gcn > 0.0);
        CHECK(row.w_gr > 0.0);
    }
}

TEST_CASE("emit_table produces one CSV row per config") {
    EvalConfigRow cfg;
    cfg.train_family = "ba";
    cfg.test_family = "er";
    cfg.k = 0;
    cfg.betas = {5, 5, 10};
    RatioStats stats;
    stats.mean = 1.038;
    stats.variance = 3.047e-3;
    stats.count = 500;

    const std::string csv = emit_table({{cfg, stats}});
    CHECK(csv.rfind("train_family,test_family,k,beta1,beta2,beta3,mean_ratio,variance,count\n",
                    0) == 0);
    CHECK(csv.find("ba,er,0,5,5,10,") != std::string::npos);
    CHECK(csv.find(",500\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

    CHECK(emit_table({}) ==
          "train_family,test_family,k,beta1,beta2,beta3,mean_ratio,variance,count\n");
}

TEST_CASE("per-graph CSV lists every kept graph") {
    const GcnModel zero = zero_model({1, 4, 1});
    const auto test_set = make_test_set("er", 12, 5, 13);
    const RatioStats stats = evaluate(zero, test_set, 0);
    const std::string csv = emit_per_graph(stats);
    CHECK(csv.rfind("graph_id,w_gcn,w_gr,ratio\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
