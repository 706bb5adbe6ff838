#include <benchmark/benchmark.h>

#include <algorithm>
#include <vector>

#include "hawkes_lob/diagnostics.hpp"
#include "hawkes_lob/likelihood.hpp"
#include "hawkes_lob/model.hpp"
#include "hawkes_lob/rng.hpp"
#include "hawkes_lob/simulator.hpp"

using namespace hawkes_lob;

namespace {

struct Instance {
    HawkesModel model;
    EventLog log;
};

Instance make_instance(std::size_t R, std::size_t M, std::size_t total_events) {
    Rng rng(1234);
    Instance inst;
    const double T = static_cast<double>(total_events) / 5.0;
    inst.model.kernel = KernelParams(R, M);
    for (std::size_t t = 0; t < R; ++t) {
        for (std::size_t s = 0; s < R; ++s)
            for (std::size_t i = 0; i < M; ++i) {
                inst.model.kernel.alpha_at(t, s, i) = rng.uniform(0.0, 0.3);
                inst.model.kernel.tau_at(t, s, i) = rng.uniform(0.05, 5.0);
            }
        inst.model.baselines.push_back(PiecewiseLinearBaseline::constant(1.0, T));
    }
    inst.model.horizon = T;
    inst.log.horizon = T;
    inst.log.events.resize(R);
    for (std::size_t t = 0; t < R; ++t) {
        auto& seq = inst.log.events[t];
        for (std::size_t i = 0; i < total_events / R; ++i) seq.push_back(rng.uniform(0.0, T));
        std::sort(seq.begin(), seq.end());
        for (std::size_t i = 1; i < seq.size(); ++i)
            if (seq[i] <= seq[i - 1]) seq[i] = seq[i - 1] + 1e-9;
    }
    return inst;
}

void BM_likelihood_events(benchmark::State& state) {
    auto inst = make_instance(4, 3, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        double total = 0.0;
        for (std::size_t target = 0; target < 4; ++target)
            total += log_likelihood(inst.model, inst.log, target).value;
        benchmark::DoNotOptimize(total);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_likelihood_events)->RangeMultiplier(2)->Range(1250, 20000)->Complexity();

void BM_likelihood_exponentials(benchmark::State& state) {
    auto inst = make_instance(4, static_cast<std::size_t>(state.range(0)), 10000);
    for (auto _ : state) {
        double total = 0.0;
        for (std::size_t target = 0; target < 4; ++target)
            total += log_likelihood(inst.model, inst.log, target).value;
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_likelihood_exponentials)->DenseRange(1, 4);

void BM_residuals(benchmark::State& state) {
    auto inst = make_instance(4, 1, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        for (std::size_t target = 0; target < 4; ++target)
            benchmark::DoNotOptimize(residuals(inst.model, inst.log, target).values.size());
    }
}
BENCHMARK(BM_residuals)->Range(2500, 20000);

void BM_simulate(benchmark::State& state) {
    HawkesModel m;
    m.kernel = KernelParams(1, 1);
    m.kernel.alpha_at(0, 0, 0) = 0.6;
    m.kernel.tau_at(0, 0, 0) = 0.5;
    const double T = static_cast<double>(state.range(0));
    m.baselines.push_back(PiecewiseLinearBaseline::constant(1.0, T));
    m.horizon = T;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto r = simulate(m, {T, ++seed});
        benchmark::DoNotOptimize(r.log.total_events());
    }
}
BENCHMARK(BM_simulate)->Range(500, 4000);

}  // namespace

BENCHMARK_MAIN();
