#include <benchmark/benchmark.h>

#include <dvfsim/scheduler.hpp>
#include <dvfsim/workload.hpp>

using namespace dvfsim;

namespace {

void OfflineEdl(benchmark::State& state) {
    const ScalingDomain domain = ScalingDomain::wide();
    const auto library = build_library(20, 20);
    GeneratorConfig gen;
    gen.seed = 1;
    gen.target_utilization = 0.4;
    gen.baseline_pairs = static_cast<double>(state.range(0)) / 2.0;
    const GeneratedWorkload workload = generate_tasks(library, gen);

    ClusterConfig cluster;
    cluster.total_pairs = static_cast<int>(state.range(0));
    cluster.pairs_per_server = 4;
    SchedulerConfig scheduler;
    scheduler.theta = 0.9;

    for (auto _ : state)
        benchmark::DoNotOptimize(
            schedule_offline(workload.tasks, scheduler, cluster, domain));
    state.SetItemsProcessed(state.iterations() *
                            static_cast<long>(workload.tasks.size()));
}
BENCHMARK(OfflineEdl)->Arg(64)->Arg(256);

void OnlineEdl(benchmark::State& state) {
    const ScalingDomain domain = ScalingDomain::wide();
    const auto library = build_library(20, 20);
    GeneratorConfig gen;
    gen.seed = 1;
    gen.mode = Mode::online;
    gen.u_off = 0.4;
    gen.u_on = 1.6;
    gen.horizon = 720;
    gen.baseline_pairs = static_cast<double>(state.range(0)) / 2.0;
    const GeneratedWorkload workload = generate_tasks(library, gen);

    ClusterConfig cluster;
    cluster.total_pairs = static_cast<int>(state.range(0));
    cluster.pairs_per_server = 4;
    SchedulerConfig scheduler;
    scheduler.mode = Mode::online;
    scheduler.theta = 0.9;

    for (auto _ : state)
        benchmark::DoNotOptimize(schedule_online(
            workload.tasks, workload.horizon, scheduler, cluster, domain));
    state.SetItemsProcessed(state.iterations() *
                            static_cast<long>(workload.tasks.size()));
}
BENCHMARK(OnlineEdl)->Arg(64)->Arg(256);

} // namespace

BENCHMARK_MAIN();
