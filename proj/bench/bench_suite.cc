// Serial reference vs OpenMP for the two parallel kernels: the problem x
// evaluator grid of a benchmark suite and per-problem dataset generation.

#include "pocl/learning.h"
#include "pocl/logging.h"
#include "pocl/pddl.h"
#include "pocl/suite.h"

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

using namespace pocl;

namespace {

std::string data(const std::string &rel) { return std::string(POCL_DATA_DIR) + "/" + rel; }

SuiteConfig logistics_suite() {
    SuiteConfig c;
    c.domain = data("logistics/domain.pddl");
    for (const char *p : {"p01", "p02", "p03"})
        c.problems.push_back(data(std::string("logistics/") + p + ".pddl"));
    for (const char *e : {"gval", "oc", "add", "add_w", "add_r", "add_w_r"})
        c.evaluators.push_back(parse_evaluator_spec(e));
    c.limits.max_generated = 20'000;
    c.limits.wall_time = 60.0;
    return c;
}

void run_suite_bench(benchmark::State &state, Execution execution) {
    const SuiteConfig config = logistics_suite();
    std::size_t solved = 0;
    for (auto _ : state) {
        ScoreReport report = run_suite(config, execution);
        solved = 0;
        for (const ScoreRow &r : report.rows) solved += r.solved;
        benchmark::DoNotOptimize(report);
    }
    state.counters["solved"] = static_cast<double>(solved);
}

void BM_SuiteSerial(benchmark::State &state) { run_suite_bench(state, Execution::serial); }
void BM_SuiteParallel(benchmark::State &state) { run_suite_bench(state, Execution::parallel); }

std::vector<GroundTask> gripper_tasks() {
    std::vector<GroundTask> tasks;
    for (const char *p : {"p01", "p02"})
        tasks.push_back(pddl::load_task(data("gripper/domain.pddl"),
                                        data(std::string("gripper/") + p + ".pddl")));
    return tasks;
}

void run_dataset_bench(benchmark::State &state, bool parallel) {
    const std::vector<GroundTask> tasks = gripper_tasks();
    DatasetConfig config;
    config.limits.max_generated = 20'000;
    config.parallel = parallel;
    std::size_t instances = 0;
    for (auto _ : state) {
        Dataset d = generate_dataset(tasks, Feature::add, config);
        instances = d.instances.size();
        benchmark::DoNotOptimize(d);
    }
    state.counters["instances"] = static_cast<double>(instances);
}

void BM_DatasetSerial(benchmark::State &state) { run_dataset_bench(state, false); }
void BM_DatasetParallel(benchmark::State &state) { run_dataset_bench(state, true); }

} // namespace

BENCHMARK(BM_SuiteSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuiteParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DatasetSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DatasetParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

int main(int argc, char **argv) {
    init_logging();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
