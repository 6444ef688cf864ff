#include "kisched/sim.hpp"

#include <algorithm>
#include <cmath>

#include "kisched/errors.hpp"

namespace kisched {

ArrivalProcess uniform_arrivals(ArrivalKind kind, double rate, int n, std::uint64_t seed) {
    if (rate < 0.0) throw ParameterError("arrivals: rate must be >= 0");
    ArrivalProcess proc;
    proc.kind = kind;
    proc.rates.assign(n, rate);
    proc.seed = seed;
    return proc;
}

std::vector<double> sample_arrivals(const ArrivalProcess& proc, Rng& rng) {
    std::vector<double> a(proc.rates.size());
    for (std::size_t v = 0; v < proc.rates.size(); ++v) {
        const double rate = proc.rates[v];
        switch (proc.kind) {
        case ArrivalKind::Bernoulli:
            a[v] = rng.uniform01() < rate ? 1.0 : 0.0;
            break;
        case ArrivalKind::Poisson: {
            // Knuth's product method; rates here are O(1)
            const double limit = std::exp(-rate);
            long count = 0;
            double prod = rng.uniform01();
            while (prod > limit) {
                ++count;
                prod *= rng.uniform01();
            }
            a[v] = static_cast<double>(count);
            break;
        }
        case ArrivalKind::Constant:
            a[v] = rate;
            break;
        }
    }
    return a;
}

QueueState step(const WeightedGraph& g, const QueueState& state,
                const std::vector<double>& arrivals, const ScheduleSet& schedule) {
    const int n = g.n();
    if (static_cast<int>(state.q.size()) != n || static_cast<int>(arrivals.size()) != n ||
        static_cast<int>(schedule.members.size()) != n)
        throw ParameterError("sim step: vector length != n");
    if (!is_k_independent(g, schedule.members, schedule.k))
        throw ContractError("sim step: infeasible schedule");

    QueueState next;
    next.t = state.t + 1;
    next.q.resize(n);
    for (int v = 0; v < n; ++v) {
        const double service = schedule.members[v] ? 1.0 : 0.0;
        next.q[v] = std::max(0.0, state.q[v] + arrivals[v] - service);
    }
    return next;
}

namespace {

ScheduleSet decide_schedule(const WeightedGraph& g, int k, const std::vector<double>& queues,
                            SchedulerKind scheduler, const GcnModel* model) {
    const int n = g.n();
    // Scale queue lengths into [0,1]; ordering (and hence greedy/exact output)
    // is unaffected, and the GCN sees weights in its training range.
    double qmax = 0.0;
    for (double q : queues) qmax = std::max(qmax, q);
    std::vector<double> w(n, 0.0);
    if (qmax > 0.0) {
        for (int v = 0; v < n; ++v) w[v] = queues[v] / qmax;
    }
    const WeightedGraph weighted(n, g.edge_list(), w);

    switch (scheduler) {
    case SchedulerKind::Greedy:
        return greedy_k_independent_set(weighted, w, k);
    case SchedulerKind::Exact:
        return exact_max_weight_kis(weighted, k);
    case SchedulerKind::GcnGreedy: {
        if (model == nullptr) throw ParameterError("sim: gcn-greedy scheduler needs a model");
        ForwardTrace trace;
        const std::vector<double> pi = forward(*model, weighted, trace);
        std::vector<double> scores(n);
        for (int v = 0; v < n; ++v) scores[v] = pi[v] * w[v];
        return greedy_k_independent_set(weighted, scores, k);
    }
    }
    throw ParameterError("sim: unknown scheduler");
}

} // namespace

SimReport run_sim(const WeightedGraph& g, int k, const ArrivalProcess& arrivals,
                  SchedulerKind scheduler, const GcnModel* model, long horizon) {
    if (horizon < 1) throw ParameterError("sim: horizon must be >= 1");
    const int n = g.n();
    if (static_cast<int>(arrivals.rates.size()) != n)
        throw ParameterError("sim: arrival rate vector length != n");

    Rng rng(arrivals.seed);
    QueueState state;
    state.q.assign(n, 0.0);

    SimReport report;
    report.horizon = horizon;
    report.avg_queue.assign(n, 0.0);
    report.total_queue.reserve(horizon);

    for (long t = 0; t < horizon; ++t) {
        const std::vector<double> a = sample_arrivals(arrivals, rng);
        const ScheduleSet schedule = decide_schedule(g, k, state.q, scheduler, model);
        if (!is_k_independent(g, schedule.members, k)) {
            ++report.violations;
            throw ContractError("sim: scheduler produced an infeasible schedule at slot " +
                                std::to_string(t));
        }
        state = step(g, state, a, schedule);

        double total = 0.0;
        for (int v = 0; v < n; ++v) {
            report.avg_queue[v] += state.q[v];
            report.max_queue = std::max(report.max_queue, state.q[v]);
            total += state.q[v];
        }
        report.total_queue.push_back(total);
    }
    for (double& q : report.avg_queue) q /= static_cast<double>(horizon);
    return report;
}

double linear_slope(const std::vector<double>& series, std::size_t begin, std::size_t end) {
    if (end > series.size()) end = series.size();
    if (begin >= end || end - begin < 2) throw ParameterError("linear_slope: window too small");
    const double count = static_cast<double>(end - begin);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double x = static_cast<double>(i);
        const double y = series[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    return (count * sxy - sx * sy) / denom;
}

} // namespace kisched
