#include <benchmark/benchmark.h>

#include <dvfsim/optimizer.hpp>
#include <dvfsim/workload.hpp>

using namespace dvfsim;

namespace {

std::vector<TaskProfile> sample_tasks(std::size_t count) {
    const auto library = build_library(20, 20);
    GeneratorConfig gen;
    gen.seed = 1;
    gen.target_utilization = 4.0;
    gen.baseline_pairs = static_cast<double>(count) / 8.0;
    auto tasks = generate_tasks(library, gen).tasks;
    tasks.resize(std::min(tasks.size(), count));
    return tasks;
}

void UnconstrainedOptimum(benchmark::State& state) {
    const ScalingDomain domain = ScalingDomain::wide();
    const auto tasks = sample_tasks(256);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            optimize_unconstrained(tasks[i % tasks.size()], domain));
        ++i;
    }
}
BENCHMARK(UnconstrainedOptimum);

void DeadlineConstrainedOptimum(benchmark::State& state) {
    const ScalingDomain domain = ScalingDomain::wide();
    const auto tasks = sample_tasks(256);
    std::vector<double> budgets;
    for (const TaskProfile& t : tasks) {
        const OptimizedTask opt = optimize_unconstrained(t, domain);
        budgets.push_back(0.5 * (opt.min_exec + opt.exec));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const std::size_t at = i % tasks.size();
        benchmark::DoNotOptimize(
            optimize_with_deadline(tasks[at], budgets[at], domain));
        ++i;
    }
}
BENCHMARK(DeadlineConstrainedOptimum);

void ConfigureTaskSet(benchmark::State& state) {
    const ScalingDomain domain = ScalingDomain::wide();
    const auto tasks = sample_tasks(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(configure_tasks(tasks, domain));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(ConfigureTaskSet)->Arg(64)->Arg(256);

} // namespace

BENCHMARK_MAIN();
