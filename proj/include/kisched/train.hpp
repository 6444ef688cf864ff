#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kisched/dataset.hpp"
#include "kisched/gcn.hpp"
#include "kisched/loss.hpp"

namespace kisched {

/// Random-graph corpus description. For the BA family, params holds the
/// attachment counts m (already rounded); for ER it holds the p values.
/// Records cycle uniformly over the parameter list.
struct DatasetSpec {
    std::string family = "er"; // "er" | "ba"
    int n = 100;
    std::vector<double> params;
    std::uint64_t count_train = 5000;
    std::uint64_t count_val = 50;
    std::uint64_t count_test = 500;
    std::uint64_t master_seed = 1;
};

/// The stock edge probabilities used for corpus generation.
std::vector<double> default_p_values();

/// BA attachment counts m = round(n * p), floored at 1.
std::vector<double> ba_attachment_counts(int n, const std::vector<double>& p_values);

Dataset build_split(const DatasetSpec& spec, const std::string& split, std::uint64_t count);

/// Writes train.graphs / val.graphs / test.graphs under out_dir.
void build_dataset(const DatasetSpec& spec, const std::string& out_dir);

enum class Optimizer { Adam, Sgd };

struct TrainConfig {
    Betas betas;
    int k = 0;
    int epochs = 20;
    double learning_rate = 1e-3;
    Optimizer optimizer = Optimizer::Adam;
    std::uint64_t seed = 1;
    int patience = 5; // epochs without validation improvement before stopping
    std::vector<int> dims = {1, 32, 1};
    P1Mode p1_mode = P1Mode::TwoSided;
};

struct TrainLogRow {
    int epoch = 0;
    std::uint64_t step = 0;
    std::uint64_t graph_id = 0;
    CostBreakdown breakdown;
};

struct TrainResult {
    GcnModel model;     // best-validation checkpoint (the untrained model is a candidate)
    std::vector<TrainLogRow> log;
    std::vector<double> val_metric; // index 0 = untrained, then one entry per trained epoch
    int best_epoch = 0;             // 0 means the untrained model won
    std::uint64_t steps = 0;
};

/// Stochastic training, one graph per optimizer step, epochs over a seeded
/// shuffle of the training set. Keeps the parameters with the best validation
/// mean W_gcn/W_gr. Throws on non-finite cost or gradient, naming the
/// epoch and graph.
TrainResult train_model(const std::vector<GraphRecord>& train_set,
                        const std::vector<GraphRecord>& val_set, const TrainConfig& config);

std::string train_log_csv(const std::vector<TrainLogRow>& log);

} // namespace kisched
