#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kisched/graph.hpp"
#include "kisched/matrix.hpp"
#include "kisched/rng.hpp"

namespace kisched {

/// Graph convolutional model. Layer l maps an n x C_l feature matrix Z to
///   Z' = Phi(Z * theta0 + Lap * Z * theta1)
/// with Phi = rectifier on hidden layers and sigmoid on the last layer, Lap
/// the normalized Laplacian. The input feature is the per-node weight, so
/// dims always starts at 1; the default shape is (1, 32, 1).
struct GcnModel {
    struct Layer {
        Matrix theta0;
        Matrix theta1;
    };
    std::vector<int> dims;
    std::vector<Layer> layers;

    // provenance, recorded in the model file
    std::string init_scheme = "uniform-fan";
    std::uint64_t init_seed = 0;

    int layer_count() const { return static_cast<int>(layers.size()); }

    bool same_params(const GcnModel& o) const;
};

/// Per-layer values retained by forward for the backward pass.
struct ForwardTrace {
    Matrix laplacian;
    std::vector<Matrix> z;   // z[0] = input features, z[l] post-activation, size L+1
    std::vector<Matrix> pre; // pre-activation of each layer, size L
};

/// Fan-scaled symmetric uniform initialization, scale sqrt(6/(C_in + C_out)).
GcnModel init_model(const std::vector<int>& dims, Rng& rng);

/// Convenience: a model of the given dims with every parameter zero
/// (its likelihood output is identically 0.5).
GcnModel zero_model(const std::vector<int>& dims);

/// Runs the convolution stack on g (input features = node weights) and
/// returns the per-node likelihoods pi in (0,1) plus the trace.
std::vector<double> forward(const GcnModel& model, const WeightedGraph& g, ForwardTrace& trace);

/// Reverse-mode gradients of a scalar cost with per-likelihood partials
/// dcost_dpi, taken at the point recorded in trace. Output shapes mirror the
/// model's parameter shapes.
std::vector<GcnModel::Layer> gradients(const GcnModel& model, const WeightedGraph& g,
                                       const std::vector<double>& dcost_dpi,
                                       const ForwardTrace& trace);

void save_model(const GcnModel& model, const std::string& path);
GcnModel load_model(const std::string& path);

} // namespace kisched
