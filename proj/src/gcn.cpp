#include "kisched/gcn.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "kisched/errors.hpp"

namespace kisched {

namespace {

double sigmoid(double x) {
    double z;
    if (x >= 0.0) {
        z = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        z = e / (1.0 + e);
    }
    // Saturated exponentials can collapse to exactly 0 or 1; pin the output
    // strictly inside (0,1), which the likelihood contract requires.
    z = std::min(z, std::nextafter(1.0, 0.0));
    z = std::max(z, std::numeric_limits<double>::min());
    return z;
}

void check_dims(const std::vector<int>& dims) {
    if (dims.size() < 2) throw ParameterError("gcn: dims must list at least input and output channels");
    if (dims.front() != 1) throw ParameterError("gcn: input channel count must be 1 (node weight feature)");
    for (int d : dims) {
        if (d < 1) throw ParameterError("gcn: channel counts must be >= 1");
    }
}

} // namespace

bool GcnModel::same_params(const GcnModel& o) const {
    if (dims != o.dims) return false;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (!(layers[l].theta0 == o.layers[l].theta0)) return false;
        if (!(layers[l].theta1 == o.layers[l].theta1)) return false;
    }
    return true;
}

GcnModel init_model(const std::vector<int>& dims, Rng& rng) {
    check_dims(dims);
    GcnModel model;
    model.dims = dims;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        GcnModel::Layer layer;
        layer.theta0 = Matrix(dims[l], dims[l + 1]);
        layer.theta1 = Matrix(dims[l], dims[l + 1]);
        const double scale = std::sqrt(6.0 / (dims[l] + dims[l + 1]));
        for (double& x : layer.theta0.data()) x = (2.0 * rng.uniform01() - 1.0) * scale;
        for (double& x : layer.theta1.data()) x = (2.0 * rng.uniform01() - 1.0) * scale;
        model.layers.push_back(std::move(layer));
    }
    return model;
}

GcnModel zero_model(const std::vector<int>& dims) {
    check_dims(dims);
    GcnModel model;
    model.dims = dims;
    model.init_scheme = "zero";
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        model.layers.push_back({Matrix(dims[l], dims[l + 1]), Matrix(dims[l], dims[l + 1])});
    }
    return model;
}

std::vector<double> forward(const GcnModel& model, const WeightedGraph& g, ForwardTrace& trace) {
    check_dims(model.dims);
    const int n = g.n();
    const int num_layers = model.layer_count();

    trace.laplacian = normalized_laplacian(g);
    trace.z.clear();
    trace.pre.clear();

    Matrix z0(n, 1);
    for (int v = 0; v < n; ++v) z0(v, 0) = g.weight(v);
    trace.z.push_back(std::move(z0));

    for (int l = 0; l < num_layers; ++l) {
        const Matrix& zin = trace.z.back();
        Matrix pre = matmul(zin, model.layers[l].theta0);
        add_inplace(pre, matmul(matmul(trace.laplacian, zin), model.layers[l].theta1));

        Matrix zout = pre;
        const bool last = l == num_layers - 1;
        for (double& x : zout.data()) {
            x = last ? sigmoid(x) : std::max(x, 0.0);
        }
        trace.pre.push_back(std::move(pre));
        trace.z.push_back(std::move(zout));
    }

    const Matrix& zl = trace.z.back();
    std::vector<double> pi(n);
    for (int v = 0; v < n; ++v) pi[v] = zl(v, 0);
    return pi;
}

std::vector<GcnModel::Layer> gradients(const GcnModel& model, const WeightedGraph& g,
                                       const std::vector<double>& dcost_dpi,
                                       const ForwardTrace& trace) {
    const int n = g.n();
    const int num_layers = model.layer_count();
    if (static_cast<int>(dcost_dpi.size()) != n)
        throw ParameterError("gcn gradients: dcost_dpi length != n");
    if (static_cast<int>(trace.z.size()) != num_layers + 1 ||
        static_cast<int>(trace.pre.size()) != num_layers)
        throw ParameterError("gcn gradients: trace does not match model layer count");
    for (int l = 0; l < num_layers; ++l) {
        if (trace.z[l].rows() != n || trace.z[l].cols() != model.dims[l] ||
            trace.pre[l].rows() != n || trace.pre[l].cols() != model.dims[l + 1])
            throw ParameterError("gcn gradients: trace shapes do not match model dims");
    }
    if (model.dims.back() != 1)
        throw ParameterError("gcn gradients: output channel count must be 1");

    std::vector<GcnModel::Layer> grads(num_layers);

    Matrix dz(n, 1);
    for (int v = 0; v < n; ++v) dz(v, 0) = dcost_dpi[v];

    for (int l = num_layers - 1; l >= 0; --l) {
        const bool last = l == num_layers - 1;
        const Matrix& pre = trace.pre[l];
        const Matrix& zout = trace.z[l + 1];
        const Matrix& zin = trace.z[l];

        // dS = dZ' elementwise* Phi'(S); rectifier subgradient at 0 is 0.
        Matrix ds = dz;
        for (int i = 0; i < ds.rows(); ++i) {
            for (int j = 0; j < ds.cols(); ++j) {
                const double phi_prime =
                    last ? zout(i, j) * (1.0 - zout(i, j)) : (pre(i, j) > 0.0 ? 1.0 : 0.0);
                ds(i, j) *= phi_prime;
            }
        }

        grads[l].theta0 = matmul_at_b(zin, ds);
        const Matrix lap_ds = matmul(trace.laplacian, ds); // Laplacian is symmetric
        grads[l].theta1 = matmul_at_b(zin, lap_ds);

        if (l > 0) {
            dz = matmul_a_bt(ds, model.layers[l].theta0);
            add_inplace(dz, matmul(trace.laplacian, matmul_a_bt(ds, model.layers[l].theta1)));
        }
    }
    return grads;
}

// --- model file -------------------------------------------------------------
//
//   kisched-gcn v1
//   dims <count> <d0> ... <dL>
//   init <scheme> <seed>
//   theta0 <layer> <rows> <cols>   (one matrix row per line, 17 sig. digits)
//   ...
//   end

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_matrix(std::ofstream& out, const char* tag, int layer, const Matrix& m) {
    out << tag << ' ' << layer << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << g17(m(r, c));
        }
        out << '\n';
    }
}

Matrix read_matrix(std::istream& in, const std::string& tag, int layer, int rows, int cols) {
    std::string seen_tag;
    int seen_layer = 0, seen_rows = 0, seen_cols = 0;
    if (!(in >> seen_tag >> seen_layer >> seen_rows >> seen_cols))
        throw FormatError("model file: truncated before section '" + tag + "' of layer " +
                          std::to_string(layer));
    if (seen_tag != tag || seen_layer != layer)
        throw FormatError("model file: expected section '" + tag + "' for layer " +
                          std::to_string(layer) + ", got '" + seen_tag + "' layer " +
                          std::to_string(seen_layer));
    if (seen_rows != rows || seen_cols != cols)
        throw FormatError("model file: section '" + tag + "' layer " + std::to_string(layer) +
                          " shape " + std::to_string(seen_rows) + "x" + std::to_string(seen_cols) +
                          " does not match dims header " + std::to_string(rows) + "x" +
                          std::to_string(cols));
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            std::string tok;
            if (!(in >> tok))
                throw FormatError("model file: truncated inside section '" + tag + "' layer " +
                                  std::to_string(layer));
            char* end = nullptr;
            m(r, c) = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0')
                throw FormatError("model file: bad value '" + tok + "' in section '" + tag + "'");
        }
    }
    return m;
}

} // namespace

void save_model(const GcnModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("model file: cannot open for writing: " + path);
    out << "kisched-gcn v1\n";
    out << "dims " << model.dims.size();
    for (int d : model.dims) out << ' ' << d;
    out << '\n';
    out << "init " << model.init_scheme << ' ' << model.init_seed << '\n';
    for (int l = 0; l < model.layer_count(); ++l) {
        write_matrix(out, "theta0", l, model.layers[l].theta0);
        write_matrix(out, "theta1", l, model.layers[l].theta1);
    }
    out << "end\n";
    if (!out) throw FormatError("model file: write failed: " + path);
}

GcnModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("model file: cannot open: " + path);
    std::string magic, version;
    if (!(in >> magic >> version) || magic != "kisched-gcn" || version != "v1")
        throw FormatError("model file: bad magic/version header");

    std::string key;
    std::size_t dim_count = 0;
    if (!(in >> key >> dim_count) || key != "dims")
        throw FormatError("model file: missing 'dims' header");
    if (dim_count < 2 || dim_count > 64)
        throw FormatError("model file: implausible dims count " + std::to_string(dim_count));
    GcnModel model;
    model.dims.resize(dim_count);
    for (std::size_t i = 0; i < dim_count; ++i) {
        if (!(in >> model.dims[i]) || model.dims[i] < 1)
            throw FormatError("model file: bad dims entry " + std::to_string(i));
    }
    if (!(in >> key >> model.init_scheme >> model.init_seed) || key != "init")
        throw FormatError("model file: missing 'init' header");

    for (std::size_t l = 0; l + 1 < dim_count; ++l) {
        GcnModel::Layer layer;
        layer.theta0 = read_matrix(in, "theta0", static_cast<int>(l), model.dims[l], model.dims[l + 1]);
        layer.theta1 = read_matrix(in, "theta1", static_cast<int>(l), model.dims[l], model.dims[l + 1]);
        model.layers.push_back(std::move(layer));
    }
    if (!(in >> key) || key != "end") throw FormatError("model file: missing 'end' marker");
    return model;
}

} // namespace kisched
