#include "kisched/train.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "kisched/errors.hpp"
#include "kisched/eval.hpp"

namespace kisched {

std::vector<double> default_p_values() { return {0.02, 0.05, 0.075, 0.10, 0.15}; }

std::vector<double> ba_attachment_counts(int n, const std::vector<double>& p_values) {
    std::vector<double> out;
    out.reserve(p_values.size());
    for (double p : p_values) {
        long m = std::lround(n * p);
        if (m < 1) m = 1;
        out.push_back(static_cast<double>(m));
    }
    return out;
}

Dataset build_split(const DatasetSpec& spec, const std::string& split, std::uint64_t count) {
    if (spec.params.empty()) throw ParameterError("build_dataset: empty parameter list");
    if (spec.family != "er" && spec.family != "ba")
        throw ParameterError("build_dataset: family must be er or ba");

    Dataset ds;
    DatasetMeta meta;
    meta.family = spec.family;
    meta.n = spec.n;
    meta.split = split;
    meta.count = count;
    meta.master_seed = spec.master_seed;
    meta.params = spec.params;
    ds.meta = meta;

    ds.records.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        GraphRecord rec;
        rec.id = i;
        rec.family = spec.family;
        rec.param = spec.params[i % spec.params.size()];
        rec.seed = derive_seed(spec.master_seed, split, i);
        Rng rng(rec.seed);
        if (spec.family == "er") {
            rec.graph = generate_er(spec.n, rec.param, rng);
        } else {
            rec.graph = generate_ba(spec.n, static_cast<int>(rec.param), rng);
        }
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

void build_dataset(const DatasetSpec& spec, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    save_dataset(build_split(spec, "train", spec.count_train), (dir / "train.graphs").string());
    save_dataset(build_split(spec, "val", spec.count_val), (dir / "val.graphs").string());
    save_dataset(build_split(spec, "test", spec.count_test), (dir / "test.graphs").string());
}

namespace {

// Adaptive-moment estimates per parameter matrix.
class AdamState {
public:
    explicit AdamState(const GcnModel& model) {
        for (const auto& layer : model.layers) {
            m_.push_back({Matrix(layer.theta0.rows(), layer.theta0.cols()),
                          Matrix(layer.theta1.rows(), layer.theta1.cols())});
            v_.push_back({Matrix(layer.theta0.rows(), layer.theta0.cols()),
                          Matrix(layer.theta1.rows(), layer.theta1.cols())});
        }
    }

    void step(GcnModel& model, const std::vector<GcnModel::Layer>& grads, double lr) {
        ++t_;
        const double bc1 = 1.0 - std::pow(kBeta1, t_);
        const double bc2 = 1.0 - std::pow(kBeta2, t_);
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            update(model.layers[l].theta0, grads[l].theta0, m_[l].theta0, v_[l].theta0, lr, bc1, bc2);
            update(model.layers[l].theta1, grads[l].theta1, m_[l].theta1, v_[l].theta1, lr, bc1, bc2);
        }
    }

private:
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

    static void update(Matrix& theta, const Matrix& g, Matrix& m, Matrix& v, double lr, double bc1,
                       double bc2) {
        for (std::size_t i = 0; i < theta.data().size(); ++i) {
            const double gi = g.data()[i];
            m.data()[i] = kBeta1 * m.data()[i] + (1.0 - kBeta1) * gi;
            v.data()[i] = kBeta2 * v.data()[i] + (1.0 - kBeta2) * gi * gi;
            const double mhat = m.data()[i] / bc1;
            const double vhat = v.data()[i] / bc2;
            theta.data()[i] -= lr * mhat / (std::sqrt(vhat) + kEps);
        }
    }

    std::vector<GcnModel::Layer> m_;
    std::vector<GcnModel::Layer> v_;
    long t_ = 0;
};

void sgd_step(GcnModel& model, const std::vector<GcnModel::Layer>& grads, double lr) {
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        for (std::size_t i = 0; i < model.layers[l].theta0.data().size(); ++i)
            model.layers[l].theta0.data()[i] -= lr * grads[l].theta0.data()[i];
        for (std::size_t i = 0; i < model.layers[l].theta1.data().size(); ++i)
            model.layers[l].theta1.data()[i] -= lr * grads[l].theta1.data()[i];
    }
}

bool all_finite(const std::vector<GcnModel::Layer>& grads) {
    for (const auto& layer : grads) {
        for (double x : layer.theta0.data())
            if (!std::isfinite(x)) return false;
        for (double x : layer.theta1.data())
            if (!std::isfinite(x)) return false;
    }
    return true;
}

double validation_metric(const GcnModel& model, const std::vector<GraphRecord>& val_set, int k) {
    return evaluate(model, val_set, k).mean;
}

} // namespace

TrainResult train_model(const std::vector<GraphRecord>& train_set,
                        const std::vector<GraphRecord>& val_set, const TrainConfig& config) {
    if (train_set.empty() || val_set.empty())
        throw ParameterError("train_model: empty train or validation set");
    if (config.epochs < 1) throw ParameterError("train_model: epochs must be >= 1");
    if (!(config.learning_rate > 0.0)) throw ParameterError("train_model: learning rate must be > 0");

    Rng init_rng(derive_seed(config.seed, "init", 0));
    GcnModel model = init_model(config.dims, init_rng);
    model.init_seed = config.seed;

    TrainResult result;
    result.model = model;
    result.best_epoch = 0;
    double best_metric = validation_metric(model, val_set, config.k);
    result.val_metric.push_back(best_metric);

    AdamState adam(model);
    std::vector<std::size_t> order(train_set.size());
    int epochs_since_improvement = 0;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        // seeded in-place shuffle, one independent stream per epoch
        Rng shuffle_rng(derive_seed(config.seed, "shuffle", static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = shuffle_rng.uniform_int(i);
            std::swap(order[i - 1], order[j]);
        }

        for (std::size_t idx : order) {
            const GraphRecord& rec = train_set[idx];
            ForwardTrace trace;
            const std::vector<double> pi = forward(model, rec.graph, trace);
            for (double p : pi) {
                if (!std::isfinite(p))
                    throw std::runtime_error("train_model: non-finite cost at epoch " +
                                             std::to_string(epoch) + ", graph " +
                                             std::to_string(rec.id) + " (diverged likelihoods)");
            }
            std::vector<double> dcost_dpi;
            const CostBreakdown breakdown =
                cost_and_grad(rec.graph, pi, config.k, config.betas, dcost_dpi, config.p1_mode);
            if (!std::isfinite(breakdown.cost))
                throw std::runtime_error("train_model: non-finite cost at epoch " +
                                         std::to_string(epoch) + ", graph " +
                                         std::to_string(rec.id));
            const std::vector<GcnModel::Layer> grads = gradients(model, rec.graph, dcost_dpi, trace);
            if (!all_finite(grads))
                throw std::runtime_error("train_model: non-finite gradient at epoch " +
                                         std::to_string(epoch) + ", graph " +
                                         std::to_string(rec.id));

            if (config.optimizer == Optimizer::Adam) {
                adam.step(model, grads, config.learning_rate);
            } else {
                sgd_step(model, grads, config.learning_rate);
            }
            ++result.steps;
            result.log.push_back({epoch, result.steps, rec.id, breakdown});
        }

        const double metric = validation_metric(model, val_set, config.k);
        result.val_metric.push_back(metric);
        if (metric > best_metric) {
            best_metric = metric;
            result.model = model;
            result.best_epoch = epoch;
            epochs_since_improvement = 0;
        } else {
            ++epochs_since_improvement;
            if (epochs_since_improvement >= config.patience) break;
        }
    }
    return result;
}

std::string train_log_csv(const std::vector<TrainLogRow>& log) {
    auto g17 = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };
    std::string out = "epoch,step,graph_id,r1,p1,p2,w_gcn,cost\n";
    for (const TrainLogRow& row : log) {
        out += std::to_string(row.epoch) + ',' + std::to_string(row.step) + ',' +
               std::to_string(row.graph_id) + ',' + g17(row.breakdown.r1) + ',' +
               g17(row.breakdown.p1) + ',' + g17(row.breakdown.p2) + ',' +
               g17(row.breakdown.w_gcn) + ',' + g17(row.breakdown.cost) + '\n';
    }
    return out;
}

} // namespace kisched
