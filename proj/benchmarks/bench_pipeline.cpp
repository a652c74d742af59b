#include <benchmark/benchmark.h>

#include "casecost/aggregate.hpp"
#include "casecost/evaluate.hpp"
#include "casecost/models.hpp"
#include "casecost/optimize.hpp"
#include "casecost/synthetic.hpp"

using namespace casecost;

namespace {

const SyntheticData& dataset_10k() {
    static const SyntheticData data = [] {
        SyntheticSpec spec;
        spec.n_cmgs = 163;
        spec.cases_per_cmg_min = 62;
        spec.cases_per_cmg_max = 62;
        spec.cost_process = CostProcess::Mixed;
        spec.degenerate_pac_fraction = 0.07;
        spec.degenerate_both_fraction = 0.04;
        spec.seed = 1;
        return generate_synthetic(spec);
    }();
    return data;
}

void BM_GenerateSynthetic(benchmark::State& state) {
    SyntheticSpec spec;
    spec.n_cmgs = static_cast<int>(state.range(0));
    spec.cases_per_cmg_min = 20;
    spec.cases_per_cmg_max = 80;
    spec.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_synthetic(spec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateSynthetic)->Arg(20)->Arg(163);

void BM_Estimate(benchmark::State& state) {
    const auto& ds = dataset_10k().dataset;
    const auto model = static_cast<ModelId>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate(model, ds));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ds.cases.size()));
}
BENCHMARK(BM_Estimate)
    ->Arg(static_cast<int>(ModelId::M1))
    ->Arg(static_cast<int>(ModelId::M2))
    ->Arg(static_cast<int>(ModelId::M3))
    ->Arg(static_cast<int>(ModelId::M4))
    ->Arg(static_cast<int>(ModelId::M5));

void BM_Aggregate(benchmark::State& state) {
    const auto& ds = dataset_10k().dataset;
    const auto estimates = estimate(ModelId::M1, ds);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aggregate(estimates));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(estimates.size()));
}
BENCHMARK(BM_Aggregate);

void BM_ErrorsAndTable(benchmark::State& state) {
    const auto& ds = dataset_10k().dataset;
    const auto stats = aggregate(estimate(ModelId::M5, ds));
    for (auto _ : state) {
        const auto errors = compute_errors(stats, ds.benchmark);
        benchmark::DoNotOptimize(performance_table(ModelId::M5, errors, default_buckets()));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stats.size()));
}
BENCHMARK(BM_ErrorsAndTable);

void BM_GridSearch(benchmark::State& state) {
    const auto& ds = dataset_10k().dataset;
    GridSpec grid;
    const auto n = state.range(0);  // points per axis
    grid.k1 = {1.0, 1.0 + 0.1 * static_cast<double>(n - 1), 0.1};
    grid.k2 = {0.3, 0.3 + 0.05 * static_cast<double>(n - 1), 0.05};
    grid.k3 = {2.0, 2.0 + 0.1 * static_cast<double>(n - 1), 0.1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_search(ds, grid, ModelId::M5, 0));
    }
    state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_GridSearch)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
