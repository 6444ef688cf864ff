#include "kisched/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "kisched/errors.hpp"

namespace kisched {

WeightedGraph::WeightedGraph(int n, const std::vector<std::pair<int, int>>& edges,
                             std::vector<double> weights)
    : n_(n), weights_(std::move(weights)) {
    if (n < 0) throw ParameterError("graph: negative node count");
    if (static_cast<int>(weights_.size()) != n)
        throw ParameterError("graph: weight vector length != n");
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0)
            throw ParameterError("graph: weights must be finite and >= 0");
    }
    adj_.assign(static_cast<std::size_t>(n) * n, 0);
    nbrs_.resize(n);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParameterError("graph: edge endpoint out of range");
        if (u == v) throw ParameterError("graph: self-loop");
        if (adjacent(u, v)) continue;
        adj_[static_cast<std::size_t>(u) * n + v] = 1;
        adj_[static_cast<std::size_t>(v) * n + u] = 1;
        nbrs_[u].push_back(v);
        nbrs_[v].push_back(u);
        ++edge_count_;
    }
    for (auto& list : nbrs_) std::sort(list.begin(), list.end());
}

std::vector<std::pair<int, int>> WeightedGraph::edge_list() const {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(edge_count_);
    for (int u = 0; u < n_; ++u) {
        for (int v : nbrs_[u]) {
            if (u < v) edges.emplace_back(u, v);
        }
    }
    return edges;
}

bool WeightedGraph::operator==(const WeightedGraph& o) const {
    return n_ == o.n_ && adj_ == o.adj_ && weights_ == o.weights_;
}

Matrix normalized_laplacian(const WeightedGraph& g) {
    const int n = g.n();
    Matrix lap(n, n);
    for (int v = 0; v < n; ++v) lap(v, v) = 1.0;
    for (int u = 0; u < n; ++u) {
        for (int v : g.neighbors(u)) {
            if (v <= u) continue;
            const double entry =
                -1.0 / std::sqrt(static_cast<double>(g.degree(u)) * g.degree(v));
            lap(u, v) = entry;
            lap(v, u) = entry;
        }
    }
    return lap;
}

namespace {

std::vector<double> draw_weights(int n, Rng& rng) {
    std::vector<double> w(n);
    for (int v = 0; v < n; ++v) w[v] = rng.uniform01();
    return w;
}

} // namespace

WeightedGraph generate_er(int n, double p, Rng& rng) {
    if (n < 1) throw ParameterError("generate_er: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("generate_er: p must lie in [0, 1]");
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (rng.uniform01() < p) edges.emplace_back(u, v);
        }
    }
    return WeightedGraph(n, edges, draw_weights(n, rng));
}

WeightedGraph generate_ba(int n, int m, Rng& rng) {
    if (n < 1) throw ParameterError("generate_ba: n must be >= 1");
    if (m < 1 || m >= n) throw ParameterError("generate_ba: need 1 <= m < n");

    std::vector<std::pair<int, int>> edges;
    std::vector<int> degree(n, 0);
    // Seed clique on the first m nodes so every later node finds m distinct
    // targets. For m = 1 the clique is edgeless; the sampler below falls back
    // to uniform choice whenever all candidate degrees are zero.
    for (int u = 0; u < m; ++u) {
        for (int v = u + 1; v < m; ++v) {
            edges.emplace_back(u, v);
            ++degree[u];
            ++degree[v];
        }
    }
    std::vector<char> chosen(n, 0);
    for (int node = m; node < n; ++node) {
        std::fill(chosen.begin(), chosen.begin() + node, 0);
        for (int pick = 0; pick < m; ++pick) {
            long total = 0;
            for (int v = 0; v < node; ++v) {
                if (!chosen[v]) total += degree[v];
            }
            int target = -1;
            if (total == 0) {
                // all remaining candidates have degree zero: uniform choice
                long remaining = node - pick;
                long idx = static_cast<long>(rng.uniform_int(static_cast<std::uint64_t>(remaining)));
                for (int v = 0; v < node; ++v) {
                    if (chosen[v]) continue;
                    if (idx-- == 0) { target = v; break; }
                }
            } else {
                double r = rng.uniform01() * static_cast<double>(total);
                double acc = 0.0;
                for (int v = 0; v < node; ++v) {
                    if (chosen[v]) continue;
                    acc += static_cast<double>(degree[v]);
                    if (r < acc) { target = v; break; }
                }
                if (target < 0) { // r landed on the accumulated boundary
                    for (int v = node - 1; v >= 0; --v) {
                        if (!chosen[v]) { target = v; break; }
                    }
                }
            }
            chosen[target] = 1;
            edges.emplace_back(target, node);
            ++degree[target];
            ++degree[node];
        }
    }
    return WeightedGraph(n, edges, draw_weights(n, rng));
}

// --- record serialization ---------------------------------------------------

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

std::string write_record(const GraphRecord& rec) {
    std::string out = "g ";
    out += std::to_string(rec.id);
    out += ' ';
    out += rec.family;
    out += ' ';
    out += std::to_string(rec.graph.n());
    out += ' ';
    out += g17(rec.param);
    out += ' ';
    out += std::to_string(rec.seed);
    out += ' ';
    out += std::to_string(rec.graph.edge_count());
    for (auto [u, v] : rec.graph.edge_list()) {
        out += ' ';
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
    }
    for (int v = 0; v < rec.graph.n(); ++v) {
        out += ' ';
        out += g17(rec.graph.weight(v));
    }
    return out;
}

namespace {

class TokenReader {
public:
    explicit TokenReader(const std::string& line) : in_(line) {}

    std::string next(const char* field) {
        std::string tok;
        if (!(in_ >> tok)) throw FormatError(std::string("record: missing field '") + field + "'");
        return tok;
    }
    std::uint64_t next_u64(const char* field) {
        const std::string tok = next(field);
        char* end = nullptr;
        const std::uint64_t v = std::strtoull(tok.c_str(), &end, 10);
        if (end == tok.c_str() || *end != '\0')
            throw FormatError(std::string("record: field '") + field + "' is not an integer: " + tok);
        return v;
    }
    long next_long(const char* field) {
        const std::string tok = next(field);
        char* end = nullptr;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (end == tok.c_str() || *end != '\0')
            throw FormatError(std::string("record: field '") + field + "' is not an integer: " + tok);
        return v;
    }
    double next_double(const char* field) {
        const std::string tok = next(field);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw FormatError(std::string("record: field '") + field + "' is not a number: " + tok);
        return v;
    }
    bool at_end() {
        std::string tok;
        return !(in_ >> tok);
    }

private:
    std::istringstream in_;
};

} // namespace

GraphRecord parse_record(const std::string& line) {
    TokenReader r(line);
    if (r.next("marker") != "g") throw FormatError("record: expected leading 'g' marker");
    GraphRecord rec;
    rec.id = r.next_u64("id");
    rec.family = r.next("family");
    if (rec.family != "er" && rec.family != "ba")
        throw FormatError("record: field 'family' must be er or ba, got " + rec.family);
    const long n = r.next_long("n");
    if (n < 1) throw FormatError("record: field 'n' must be >= 1");
    rec.param = r.next_double("param");
    rec.seed = r.next_u64("seed");
    const long edge_count = r.next_long("edge_count");
    if (edge_count < 0) throw FormatError("record: field 'edge_count' must be >= 0");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(edge_count);
    for (long e = 0; e < edge_count; ++e) {
        const long u = r.next_long("edge.u");
        const long v = r.next_long("edge.v");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw FormatError("record: edge endpoint out of range");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    std::vector<double> weights(n);
    for (long v = 0; v < n; ++v) weights[v] = r.next_double("weight");
    if (!r.at_end()) throw FormatError("record: trailing tokens after weights");
    rec.graph = WeightedGraph(static_cast<int>(n), edges, std::move(weights));
    return rec;
}

} // namespace kisched
