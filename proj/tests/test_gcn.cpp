#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "kisched/errors.hpp"
#include "kisched/gcn.hpp"
#include "test_util.hpp"

using namespace kisched;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

double linear_cost(const std::vector<double>& pi, const std::vector<double>& coeff) {
    double j = 0.0;
    for (std::size_t v = 0; v < pi.size(); ++v) j += coeff[v] * pi[v];
    return j;
}

} // namespace

TEST_CASE("init_model shapes, determinism, and input validation") {
    Rng rng(3);
    const GcnModel model = init_model({1, 32, 1}, rng);
    REQUIRE(model.layer_count() == 2);
    CHECK(model.layers[0].theta0.rows() == 1);
    CHECK(model.layers[0].theta0.cols() == 32);
    CHECK(model.layers[0].theta1.rows() == 1);
    CHECK(model.layers[1].theta0.rows() == 32);
    CHECK(model.layers[1].theta0.cols() == 1);

    Rng a(9), b(9);
    CHECK(init_model({1, 8, 1}, a).same_params(init_model({1, 8, 1}, b)));

    Rng c(1);
    CHECK_THROWS_AS(init_model({1}, c), ParameterError);
    CHECK_THROWS_AS(init_model({}, c), ParameterError);
    CHECK_THROWS_AS(init_model({2, 4, 1}, c), ParameterError); // input channel must be 1
}

TEST_CASE("all-zero parameters map every node to likelihood one half") {
    const GcnModel zero = zero_model({1, 32, 1});
    for (std::uint64_t gcase = 0; gcase < 10; ++gcase) {
        const WeightedGraph g = testutil::random_graph(gcase, 20);
        ForwardTrace trace;
        const std::vector<double> pi = forward(zero, g, trace);
        REQUIRE(static_cast<int>(pi.size()) == g.n());
        for (double p : pi) CHECK(p == 0.5);
    }
}

TEST_CASE("forward produces likelihoods strictly inside (0,1), deterministically") {
    for (std::uint64_t c = 0; c < 20; ++c) {
        Rng rng(derive_seed(11, "fwd", c));
        const GcnModel model = init_model({1, 32, 1}, rng);
        const WeightedGraph g = testutil::random_graph(c, 25);
        ForwardTrace t1, t2;
        const std::vector<double> pi1 = forward(model, g, t1);
        const std::vector<double> pi2 = forward(model, g, t2);
        CHECK(pi1 == pi2); // bitwise reproducible
        for (double p : pi1) {
            CHECK(p > 0.0);
            CHECK(p < 1.0);
        }
    }
}

TEST_CASE("forward commutes with node relabeling") {
    for (std::uint64_t c = 0; c < 15; ++c) {
        const WeightedGraph g = testutil::random_graph(c, 15);
        const int n = g.n();
        Rng rng(derive_seed(23, "perm", c));
        const GcnModel model = init_model({1, 8, 1}, rng);

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n; i > 1; --i) {
            std::swap(perm[i - 1], perm[rng.uniform_int(i)]);
        }
        std::vector<std::pair<int, int>> edges;
        for (auto [u, v] : g.edge_list()) edges.emplace_back(perm[u], perm[v]);
        std::vector<double> w(n);
        for (int v = 0; v < n; ++v) w[perm[v]] = g.weight(v);
        const WeightedGraph permuted(n, edges, w);

        ForwardTrace ta, tb;
        const std::vector<double> pi = forward(model, g, ta);
        const std::vector<double> pi_perm = forward(model, permuted, tb);
        for (int v = 0; v < n; ++v) {
            CHECK(pi_perm[perm[v]] == doctest::Approx(pi[v]).epsilon(1e-12));
        }
    }
}

TEST_CASE("analytic parameter gradients match central finite differences") {
    const double h = 1e-5;
    double worst = 0.0;
    for (std::uint64_t c = 0; c < 20; ++c) {
        const WeightedGraph g = testutil::random_graph(c, 6);
        Rng rng(derive_seed(31, "gradcheck", c));
        GcnModel model = init_model({1, 4, 1}, rng);
        std::vector<double> coeff(g.n());
        for (double& x : coeff) x = 2.0 * rng.uniform01() - 1.0;

        ForwardTrace trace;
        forward(model, g, trace);
        const std::vector<GcnModel::Layer> analytic = gradients(model, g, coeff, trace);

        for (int l = 0; l < model.layer_count(); ++l) {
            for (int which = 0; which < 2; ++which) {
                Matrix& theta = which ? model.layers[l].theta1 : model.layers[l].theta0;
                const Matrix& grad = which ? analytic[l].theta1 : analytic[l].theta0;
                for (std::size_t i = 0; i < theta.data().size(); ++i) {
                    const double saved = theta.data()[i];
                    ForwardTrace t;
                    theta.data()[i] = saved + h;
                    const double jp = linear_cost(forward(model, g, t), coeff);
                    theta.data()[i] = saved - h;
                    const double jm = linear_cost(forward(model, g, t), coeff);
                    theta.data()[i] = saved;
                    const double numeric = (jp - jm) / (2.0 * h);
                    const double a = grad.data()[i];
                    const double rel =
                        std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
                    worst = std::max(worst, rel);
                }
            }
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("gradients are linear in the cost partials") {
    const WeightedGraph g = testutil::random_graph(4, 10);
    Rng rng(55);
    const GcnModel model = init_model({1, 4, 1}, rng);
    ForwardTrace trace;
    forward(model, g, trace);

    std::vector<double> zero(g.n(), 0.0);
    for (const auto& layer : gradients(model, g, zero, trace)) {
        for (double x : layer.theta0.data()) CHECK(x == 0.0);
        for (double x : layer.theta1.data()) CHECK(x == 0.0);
    }

    std::vector<double> coeff(g.n()), doubled(g.n());
    for (int v = 0; v < g.n(); ++v) {
        coeff[v] = 2.0 * rng.uniform01() - 1.0;
        doubled[v] = 2.0 * coeff[v];
    }
    const auto g1 = gradients(model, g, coeff, trace);
    const auto g2 = gradients(model, g, doubled, trace);
    for (int l = 0; l < model.layer_count(); ++l) {
        for (std::size_t i = 0; i < g1[l].theta0.data().size(); ++i)
            CHECK(g2[l].theta0.data()[i] == 2.0 * g1[l].theta0.data()[i]);
        for (std::size_t i = 0; i < g1[l].theta1.data().size(); ++i)
            CHECK(g2[l].theta1.data()[i] == 2.0 * g1[l].theta1.data()[i]);
    }
}

TEST_CASE("gradients reject a mismatched trace") {
    Rng rng(5);
    const GcnModel model = init_model({1, 4, 1}, rng);
    const WeightedGraph g1 = testutil::random_graph(1, 8);
    const WeightedGraph g2(g1.n() + 1, {}, std::vector<double>(g1.n() + 1, 0.5));
    ForwardTrace trace;
    forward(model, g1, trace);
    std::vector<double> d(g2.n(), 0.1);
    CHECK_THROWS_AS(gradients(model, g2, d, trace), ParameterError);

    std::vector<double> wrong_len(g1.n() + 2, 0.1);
    CHECK_THROWS_AS(gradients(model, g1, wrong_len, trace), ParameterError);
}

TEST_CASE("model save/load round-trips bit-exactly") {
    Rng rng(77);
    GcnModel model = init_model({1, 32, 1}, rng);
    model.init_seed = 77;
    const auto path = temp_file("kisched_test_model.txt");
    save_model(model, path.string());
    const GcnModel back = load_model(path.string());
    CHECK(back.same_params(model));
    CHECK(back.dims == model.dims);
    CHECK(back.init_scheme == model.init_scheme);
    CHECK(back.init_seed == model.init_seed);
    std::filesystem::remove(path);
}

TEST_CASE("model loader rejects malformed files") {
    Rng rng(78);
    const GcnModel model = init_model({1, 4, 1}, rng);
    const auto path = temp_file("kisched_test_model_bad.txt");
    save_model(model, path.string());

    std::stringstream buf;
    {
        std::ifstream in(path.string());
        buf << in.rdbuf();
    }
    const std::string full = buf.str();

    auto write_variant = [&](const std::string& contents) {
        std::ofstream out(path.string());
        out << contents;
    };

    // truncated: drop the tail including the end marker
    write_variant(full.substr(0, full.size() / 2));
    CHECK_THROWS_AS(load_model(path.string()), FormatError);

    // header/payload dims mismatch
    std::string mismatched = full;
    const auto pos = mismatched.find("theta0 0 1 4");
    REQUIRE(pos != std::string::npos);
    mismatched.replace(pos, 12, "theta0 0 1 9");
    write_variant(mismatched);
    CHECK_THROWS_AS(load_model(path.string()), FormatError);

    // bad magic
    write_variant("not-a-model v1\n");
    CHECK_THROWS_AS(load_model(path.string()), FormatError);

    // garbage value
    std::string garbled = full;
    const auto vpos = garbled.find('\n', garbled.find("theta0"));
    REQUIRE(vpos != std::string::npos);
    garbled.replace(vpos + 1, 3, "xyz");
    write_variant(garbled);
    CHECK_THROWS_AS(load_model(path.string()), FormatError);

    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_model(path.string()), FormatError); // missing file
}
