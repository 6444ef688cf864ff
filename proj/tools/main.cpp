// kisched: data generation, training, evaluation, single-instance solving and
// queue simulation for GCN-assisted greedy scheduling on k-tolerant conflict
// graphs. Every subcommand is fully seeded and writes a manifest next to its
// outputs so runs can be reproduced byte for byte.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kisched/dataset.hpp"
#include "kisched/errors.hpp"
#include "kisched/eval.hpp"
#include "kisched/gcn.hpp"
#include "kisched/graph.hpp"
#include "kisched/kis.hpp"
#include "kisched/loss.hpp"
#include "kisched/manifest.hpp"
#include "kisched/sim.hpp"
#include "kisched/train.hpp"
#include "kisched/version.hpp"

namespace {

using namespace kisched;

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open for writing: " + path);
    out << content;
    if (!out) throw FormatError("write failed: " + path);
}

ArrivalKind parse_arrival_kind(const std::string& name) {
    if (name == "bernoulli") return ArrivalKind::Bernoulli;
    if (name == "poisson") return ArrivalKind::Poisson;
    if (name == "constant") return ArrivalKind::Constant;
    throw ParameterError("unknown arrival kind: " + name + " (want bernoulli|poisson|constant)");
}

// --- gen-data ----------------------------------------------------------------

struct GenDataOpts {
    std::string family = "er";
    int n = 100;
    std::uint64_t count_train = 5000;
    std::uint64_t count_val = 50;
    std::uint64_t count_test = 500;
    std::uint64_t seed = 1;
    std::vector<double> p_values;
    std::string out_dir;
};

int run_gen_data(const GenDataOpts& opts) {
    DatasetSpec spec;
    spec.family = opts.family;
    spec.n = opts.n;
    spec.count_train = opts.count_train;
    spec.count_val = opts.count_val;
    spec.count_test = opts.count_test;
    spec.master_seed = opts.seed;
    const std::vector<double> p = opts.p_values.empty() ? default_p_values() : opts.p_values;
    for (double pv : p) {
        if (!(pv > 0.0 && pv < 1.0)) throw ParameterError("gen-data: p values must lie in (0,1)");
    }
    spec.params = opts.family == "ba" ? ba_attachment_counts(opts.n, p) : p;

    build_dataset(spec, opts.out_dir);

    RunManifest manifest;
    manifest.subcommand = "gen-data";
    manifest.flags["family"] = opts.family;
    manifest.flags["n"] = std::to_string(opts.n);
    manifest.flags["count-train"] = std::to_string(opts.count_train);
    manifest.flags["count-val"] = std::to_string(opts.count_val);
    manifest.flags["count-test"] = std::to_string(opts.count_test);
    manifest.flags["out-dir"] = opts.out_dir;
    std::string params;
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
        if (i) params += ',';
        params += g17(spec.params[i]);
    }
    manifest.flags["params"] = params;
    manifest.seeds["master"] = opts.seed;
    write_manifest(manifest, (std::filesystem::path(opts.out_dir) / "manifest.json").string());

    std::cout << "wrote " << spec.count_train << "/" << spec.count_val << "/" << spec.count_test
              << " " << opts.family << " graphs (n=" << opts.n << ") to " << opts.out_dir << "\n";
    return 0;
}

// --- train --------------------------------------------------------------------

struct TrainOpts {
    std::string data_dir;
    int k = 0;
    double beta1 = 5.0, beta2 = 5.0, beta3 = 10.0;
    int epochs = 20;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    std::string out_model;
    std::string log_path;
    std::string optimizer = "adam";
    int hidden = 32;
    int patience = 5;
    bool p1_one_sided = false;
};

int run_train(const TrainOpts& opts) {
    const std::filesystem::path dir(opts.data_dir);
    const std::string train_path = (dir / "train.graphs").string();
    const std::string val_path = (dir / "val.graphs").string();
    const Dataset train_set = load_dataset(train_path);
    const Dataset val_set = load_dataset(val_path);

    TrainConfig config;
    config.betas = {opts.beta1, opts.beta2, opts.beta3};
    config.k = opts.k;
    config.epochs = opts.epochs;
    config.learning_rate = opts.lr;
    config.seed = opts.seed;
    config.patience = opts.patience;
    config.dims = {1, opts.hidden, 1};
    config.p1_mode = opts.p1_one_sided ? P1Mode::OneSided : P1Mode::TwoSided;
    if (opts.optimizer == "adam") {
        config.optimizer = Optimizer::Adam;
    } else if (opts.optimizer == "sgd") {
        config.optimizer = Optimizer::Sgd;
    } else {
        throw ParameterError("train: unknown optimizer " + opts.optimizer);
    }

    const TrainResult result = train_model(train_set.records, val_set.records, config);
    save_model(result.model, opts.out_model);
    if (!opts.log_path.empty()) write_text_file(opts.log_path, train_log_csv(result.log));

    RunManifest manifest;
    manifest.subcommand = "train";
    manifest.flags["data-dir"] = opts.data_dir;
    manifest.flags["k"] = std::to_string(opts.k);
    manifest.flags["beta1"] = g17(opts.beta1);
    manifest.flags["beta2"] = g17(opts.beta2);
    manifest.flags["beta3"] = g17(opts.beta3);
    manifest.flags["epochs"] = std::to_string(opts.epochs);
    manifest.flags["lr"] = g17(opts.lr);
    manifest.flags["optimizer"] = opts.optimizer;
    manifest.flags["hidden"] = std::to_string(opts.hidden);
    manifest.flags["patience"] = std::to_string(opts.patience);
    manifest.flags["p1-one-sided"] = opts.p1_one_sided ? "1" : "0";
    manifest.flags["out-model"] = opts.out_model;
    if (!opts.log_path.empty()) manifest.flags["log"] = opts.log_path;
    manifest.seeds["train"] = opts.seed;
    manifest.input_digests[train_path] = file_digest(train_path);
    manifest.input_digests[val_path] = file_digest(val_path);
    write_manifest(manifest, opts.out_model + ".manifest.json");

    std::cout << "best epoch " << result.best_epoch << ", validation mean ratio "
              << g17(result.val_metric[result.best_epoch]) << ", " << result.steps
              << " optimizer steps\n";
    return 0;
}

// --- eval ----------------------------------------------------------------------

struct EvalOpts {
    std::string model_path;
    std::string data_path;
    int k = 0;
    std::string out_csv;
    std::string per_graph_csv;
    std::string train_family = "unknown";
    double beta1 = 5.0, beta2 = 5.0, beta3 = 10.0; // table labels only
};

int run_eval(const EvalOpts& opts) {
    const GcnModel model = load_model(opts.model_path);
    const Dataset test_set = load_dataset(opts.data_path);
    const RatioStats stats = evaluate(model, test_set.records, opts.k);

    EvalConfigRow cfg;
    cfg.train_family = opts.train_family;
    cfg.test_family = test_set.meta ? test_set.meta->family : "unknown";
    cfg.k = opts.k;
    cfg.betas = {opts.beta1, opts.beta2, opts.beta3};
    const std::string table = emit_table({{cfg, stats}});

    if (!opts.out_csv.empty()) {
        write_text_file(opts.out_csv, table);
        RunManifest manifest;
        manifest.subcommand = "eval";
        manifest.flags["model"] = opts.model_path;
        manifest.flags["data"] = opts.data_path;
        manifest.flags["k"] = std::to_string(opts.k);
        manifest.flags["out-csv"] = opts.out_csv;
        manifest.flags["train-family"] = opts.train_family;
        manifest.flags["beta1"] = g17(opts.beta1);
        manifest.flags["beta2"] = g17(opts.beta2);
        manifest.flags["beta3"] = g17(opts.beta3);
        if (!opts.per_graph_csv.empty()) manifest.flags["per-graph-csv"] = opts.per_graph_csv;
        manifest.input_digests[opts.model_path] = file_digest(opts.model_path);
        manifest.input_digests[opts.data_path] = file_digest(opts.data_path);
        write_manifest(manifest, opts.out_csv + ".manifest.json");
    } else {
        std::cout << table;
    }
    if (!opts.per_graph_csv.empty()) write_text_file(opts.per_graph_csv, emit_per_graph(stats));

    std::cout << "mean ratio " << g17(stats.mean) << ", variance " << g17(stats.variance)
              << " over " << stats.count << " graphs";
    if (stats.skipped) std::cout << " (" << stats.skipped << " skipped: zero baseline weight)";
    std::cout << "\n";
    return 0;
}

// --- solve -----------------------------------------------------------------------

struct SolveOpts {
    std::string graph_path;
    std::size_t index = 0;
    int k = 0;
    std::string method = "greedy";
    std::string model_path;
};

int run_solve(const SolveOpts& opts) {
    const Dataset ds = load_dataset(opts.graph_path);
    if (opts.index >= ds.records.size())
        throw ParameterError("solve: record index out of range (file has " +
                             std::to_string(ds.records.size()) + " records)");
    const WeightedGraph& g = ds.records[opts.index].graph;

    ScheduleSet schedule;
    if (opts.method == "greedy") {
        schedule = greedy_k_independent_set(g, g.weights(), opts.k);
    } else if (opts.method == "exact") {
        schedule = exact_max_weight_kis(g, opts.k);
    } else if (opts.method == "gcn-greedy") {
        if (opts.model_path.empty())
            throw ParameterError("solve: --method gcn-greedy requires --model");
        const GcnModel model = load_model(opts.model_path);
        ForwardTrace trace;
        const std::vector<double> pi = forward(model, g, trace);
        std::vector<double> scores(g.n());
        for (int v = 0; v < g.n(); ++v) scores[v] = pi[v] * g.weight(v);
        schedule = greedy_k_independent_set(g, scores, opts.k);
    } else {
        throw ParameterError("solve: unknown method " + opts.method +
                             " (want greedy|exact|gcn-greedy)");
    }

    std::string members = "{";
    bool first = true;
    for (int v : schedule.member_indices()) {
        if (!first) members += ',';
        members += std::to_string(v);
        first = false;
    }
    members += "}";
    std::cout << "members=" << members << " weight=" << g17(set_weight(g, schedule)) << "\n";
    return 0;
}

// --- simulate ----------------------------------------------------------------------

struct SimulateOpts {
    std::string graph_path;
    std::string family;
    int n = 0;
    double param = 0.0;
    std::uint64_t seed = 1;
    int k = 0;
    std::string scheduler = "greedy";
    std::string model_path;
    std::string arrival = "bernoulli:0.1";
    long horizon = 10000;
    std::string out_csv;
    long sample_every = 1;
};

int run_simulate(const SimulateOpts& opts) {
    WeightedGraph g(1, {}, {0.0});
    if (!opts.graph_path.empty()) {
        const Dataset ds = load_dataset(opts.graph_path);
        if (ds.records.empty()) throw ParameterError("simulate: graph file has no records");
        g = ds.records.front().graph;
    } else if (!opts.family.empty()) {
        if (opts.n < 1) throw ParameterError("simulate: --n must be >= 1");
        Rng rng(derive_seed(opts.seed, "sim-graph", 0));
        g = opts.family == "er" ? generate_er(opts.n, opts.param, rng)
                                : generate_ba(opts.n, static_cast<int>(opts.param), rng);
    } else {
        throw ParameterError("simulate: need --graph or --family/--n/--param");
    }

    const auto colon = opts.arrival.find(':');
    if (colon == std::string::npos)
        throw ParameterError("simulate: --arrival must look like kind:rate");
    const ArrivalKind kind = parse_arrival_kind(opts.arrival.substr(0, colon));
    char* end = nullptr;
    const std::string rate_str = opts.arrival.substr(colon + 1);
    const double rate = std::strtod(rate_str.c_str(), &end);
    if (end == rate_str.c_str() || *end != '\0' || rate < 0.0)
        throw ParameterError("simulate: bad arrival rate: " + rate_str);
    const ArrivalProcess arrivals =
        uniform_arrivals(kind, rate, g.n(), derive_seed(opts.seed, "sim-arrivals", 0));

    SchedulerKind scheduler;
    GcnModel model;
    const GcnModel* model_ptr = nullptr;
    if (opts.scheduler == "greedy") {
        scheduler = SchedulerKind::Greedy;
    } else if (opts.scheduler == "exact") {
        scheduler = SchedulerKind::Exact;
    } else if (opts.scheduler == "gcn-greedy") {
        if (opts.model_path.empty())
            throw ParameterError("simulate: --scheduler gcn-greedy requires --model");
        model = load_model(opts.model_path);
        model_ptr = &model;
        scheduler = SchedulerKind::GcnGreedy;
    } else {
        throw ParameterError("simulate: unknown scheduler " + opts.scheduler);
    }

    const SimReport report = run_sim(g, opts.k, arrivals, scheduler, model_ptr, opts.horizon);

    if (!opts.out_csv.empty()) {
        std::string csv = "slot,total_queue\n";
        for (long t = 0; t < report.horizon; t += opts.sample_every) {
            csv += std::to_string(t) + ',' + g17(report.total_queue[t]) + '\n';
        }
        write_text_file(opts.out_csv, csv);

        RunManifest manifest;
        manifest.subcommand = "simulate";
        if (!opts.graph_path.empty()) {
            manifest.flags["graph"] = opts.graph_path;
            manifest.input_digests[opts.graph_path] = file_digest(opts.graph_path);
        } else {
            manifest.flags["family"] = opts.family;
            manifest.flags["n"] = std::to_string(opts.n);
            manifest.flags["param"] = g17(opts.param);
        }
        manifest.flags["k"] = std::to_string(opts.k);
        manifest.flags["scheduler"] = opts.scheduler;
        if (!opts.model_path.empty()) {
            manifest.flags["model"] = opts.model_path;
            manifest.input_digests[opts.model_path] = file_digest(opts.model_path);
        }
        manifest.flags["arrival"] = opts.arrival;
        manifest.flags["horizon"] = std::to_string(opts.horizon);
        manifest.flags["sample-every"] = std::to_string(opts.sample_every);
        manifest.flags["out-csv"] = opts.out_csv;
        manifest.seeds["sim"] = opts.seed;
        write_manifest(manifest, opts.out_csv + ".manifest.json");
    }

    double avg_total = 0.0;
    for (double q : report.avg_queue) avg_total += q;
    std::cout << "horizon " << report.horizon << ", time-averaged total queue " << g17(avg_total)
              << ", max queue " << g17(report.max_queue) << ", violations " << report.violations
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GCN-assisted greedy scheduling on k-tolerant conflict graphs"};
    app.set_version_flag("--version", std::string(kisched::kToolVersion));
    app.require_subcommand(1);

    GenDataOpts gen;
    CLI::App* cmd_gen = app.add_subcommand("gen-data", "generate a random-graph corpus");
    cmd_gen->add_option("--family", gen.family, "graph family: er|ba")
        ->check(CLI::IsMember({"er", "ba"}));
    cmd_gen->add_option("--n", gen.n, "nodes per graph")->check(CLI::PositiveNumber);
    cmd_gen->add_option("--count-train", gen.count_train, "training graphs");
    cmd_gen->add_option("--count-val", gen.count_val, "validation graphs");
    cmd_gen->add_option("--count-test", gen.count_test, "test graphs");
    cmd_gen->add_option("--seed", gen.seed, "master seed");
    cmd_gen->add_option("--p-values", gen.p_values,
                        "edge probabilities to cycle over (ba derives m = round(n*p))");
    cmd_gen->add_option("--out-dir", gen.out_dir, "output directory")->required();

    TrainOpts tr;
    CLI::App* cmd_train = app.add_subcommand("train", "train a model on a generated corpus");
    cmd_train->add_option("--data-dir", tr.data_dir, "directory with train.graphs/val.graphs")
        ->required();
    cmd_train->add_option("--k", tr.k, "tolerance")->check(CLI::NonNegativeNumber);
    cmd_train->add_option("--beta1", tr.beta1, "constraint-penalty weight");
    cmd_train->add_option("--beta2", tr.beta2, "decode-anchor penalty weight");
    cmd_train->add_option("--beta3", tr.beta3, "reward weight");
    cmd_train->add_option("--epochs", tr.epochs, "max epochs")->check(CLI::PositiveNumber);
    cmd_train->add_option("--lr", tr.lr, "learning rate");
    cmd_train->add_option("--seed", tr.seed, "training seed");
    cmd_train->add_option("--out-model", tr.out_model, "model output path")->required();
    cmd_train->add_option("--log", tr.log_path, "training-log CSV path");
    cmd_train->add_option("--optimizer", tr.optimizer, "adam|sgd")
        ->check(CLI::IsMember({"adam", "sgd"}));
    cmd_train->add_option("--hidden", tr.hidden, "hidden channels")->check(CLI::PositiveNumber);
    cmd_train->add_option("--patience", tr.patience, "early-stop patience in epochs");
    cmd_train->add_flag("--p1-one-sided", tr.p1_one_sided,
                        "experimental: only penalize tolerance excess in P1");

    EvalOpts ev;
    CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate a model on a test file");
    cmd_eval->add_option("--model", ev.model_path, "model file")->required();
    cmd_eval->add_option("--data", ev.data_path, "test dataset file")->required();
    cmd_eval->add_option("--k", ev.k, "tolerance")->check(CLI::NonNegativeNumber);
    cmd_eval->add_option("--out-csv", ev.out_csv, "summary CSV path");
    cmd_eval->add_option("--per-graph-csv", ev.per_graph_csv, "per-graph detail CSV path");
    cmd_eval->add_option("--train-family", ev.train_family, "label for the table's train column");
    cmd_eval->add_option("--beta1", ev.beta1, "label for the table's beta1 column");
    cmd_eval->add_option("--beta2", ev.beta2, "label for the table's beta2 column");
    cmd_eval->add_option("--beta3", ev.beta3, "label for the table's beta3 column");

    SolveOpts so;
    CLI::App* cmd_solve = app.add_subcommand("solve", "decode one graph record");
    cmd_solve->add_option("--graph", so.graph_path, "graph record file")->required();
    cmd_solve->add_option("--index", so.index, "record index within the file");
    cmd_solve->add_option("--k", so.k, "tolerance")->check(CLI::NonNegativeNumber);
    cmd_solve->add_option("--method", so.method, "greedy|exact|gcn-greedy")
        ->check(CLI::IsMember({"greedy", "exact", "gcn-greedy"}));
    cmd_solve->add_option("--model", so.model_path, "model file (for gcn-greedy)");

    SimulateOpts si;
    CLI::App* cmd_sim = app.add_subcommand("simulate", "run the slotted queue simulator");
    cmd_sim->add_option("--graph", si.graph_path, "graph record file (first record is used)");
    cmd_sim->add_option("--family", si.family, "er|ba (generate instead of --graph)")
        ->check(CLI::IsMember({"er", "ba"}));
    cmd_sim->add_option("--n", si.n, "nodes (with --family)");
    cmd_sim->add_option("--param", si.param, "p or m (with --family)");
    cmd_sim->add_option("--seed", si.seed, "seed for graph and arrivals");
    cmd_sim->add_option("--k", si.k, "tolerance")->check(CLI::NonNegativeNumber);
    cmd_sim->add_option("--scheduler", si.scheduler, "greedy|gcn-greedy|exact")
        ->check(CLI::IsMember({"greedy", "gcn-greedy", "exact"}));
    cmd_sim->add_option("--model", si.model_path, "model file (for gcn-greedy)");
    cmd_sim->add_option("--arrival", si.arrival, "arrival process, kind:rate");
    cmd_sim->add_option("--horizon", si.horizon, "slots")->check(CLI::PositiveNumber);
    cmd_sim->add_option("--out-csv", si.out_csv, "per-slot total-queue CSV path");
    cmd_sim->add_option("--sample-every", si.sample_every, "CSV sampling stride")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion& e) {
        std::cout << kisched::kToolVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (cmd_gen->parsed()) return run_gen_data(gen);
        if (cmd_train->parsed()) return run_train(tr);
        if (cmd_eval->parsed()) return run_eval(ev);
        if (cmd_solve->parsed()) return run_solve(so);
        if (cmd_sim->parsed()) return run_simulate(si);
    } catch (const kisched::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const kisched::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const kisched::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
