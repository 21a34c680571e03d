#include "pocl/learning.h"
#include "pocl/logging.h"
#include "pocl/pddl.h"
#include "pocl/plan_output.h"
#include "pocl/search.h"
#include "pocl/suite.h"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace pocl;

namespace {

enum Exit { kOk = 0, kUnsolved = 1, kUsage = 2, kInput = 3 };

// Input problems that are the user's fault rather than ours.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

std::string meta_path(const std::string &csv) { return csv + ".meta.json"; }

// solve

struct SolveArgs {
    std::string domain, problem;
    std::string eval = "add_w_r";
    std::string flaws = "mw-loc";
    std::uint64_t max_nodes = 1'000'000;
    double timeout = 900.0;
    int max_copies = 2;
    std::string plan_out, trace_out;
};

int run_solve(const SolveArgs &a) {
    auto strategy = parse_strategy(a.flaws);
    if (!strategy) throw CLI::ValidationError("--flaws", "expected mc-loc or mw-loc");
    EvaluatorSpec spec;
    try {
        spec = parse_evaluator_spec(a.eval);
    } catch (const ConfigError &e) {
        throw CLI::ValidationError("--eval", e.what());
    }

    GroundTask task = pddl::load_task(a.domain, a.problem);
    spdlog::info("{}: {} facts, {} ground actions, {} goals", task.problem_name, task.num_facts(),
                 task.num_actions(), task.goal.size());
    CostTables tables = CostTables::build(task);
    Evaluator evaluator = make_evaluator(spec);

    SearchOptions opts;
    opts.strategy = *strategy;
    opts.limits = {a.max_nodes, a.timeout};
    opts.refinement.max_copies = a.max_copies;
    opts.record_trace = !a.trace_out.empty();
    SearchResult res = gbfs(task, tables, evaluator, opts);

    if (!a.trace_out.empty()) {
        std::ofstream out(a.trace_out);
        if (!out) throw InputError("cannot write " + a.trace_out);
        write_trace_csv(out, res.trace);
    }
    std::cout << fmt::format(";; {} {} {}: {} length={} makespan={} visited={} generated={} time={:.3f}s\n",
                             task.problem_name, spec.label, strategy_name(*strategy),
                             outcome_name(res.outcome), res.stats.plan_length, res.stats.makespan,
                             res.stats.visited, res.stats.generated, res.stats.elapsed);
    if (!res.solved()) return kUnsolved;

    std::string text = format_plan(*res.plan);
    if (!validate(task, to_actions(*res.plan, linearize(*res.plan)))) {
        spdlog::error("plan failed validation");
        return kUnsolved;
    }
    if (a.plan_out.empty())
        std::cout << text;
    else
        write_text(a.plan_out, text);
    return kOk;
}

// learn dataset

struct DatasetArgs {
    std::string domain;
    std::vector<std::string> problems;
    std::string base = "add_w_r";
    std::size_t seeds_per_problem = 10;
    std::uint64_t seed = 1;
    std::uint64_t max_nodes = 500'000;
    double timeout = 180.0;
    std::string flaws = "mw-loc";
    std::string out;
    bool serial = false;
};

int run_dataset(const DatasetArgs &a) {
    auto base = parse_feature(a.base);
    if (!base || *base == Feature::gval || *base == Feature::oc)
        throw CLI::ValidationError("--base", "expected add, add_w, add_r or add_w_r");
    auto strategy = parse_strategy(a.flaws);
    if (!strategy) throw CLI::ValidationError("--flaws", "expected mc-loc or mw-loc");

    pddl::DomainAst domain = pddl::parse_domain(pddl::read_file(a.domain), a.domain);
    std::vector<GroundTask> tasks;
    for (const auto &p : a.problems)
        tasks.push_back(pddl::ground(domain, pddl::parse_problem(pddl::read_file(p), domain, p)));

    DatasetConfig config;
    config.seeds_per_problem = a.seeds_per_problem;
    config.rng_seed = a.seed;
    config.limits = {a.max_nodes, a.timeout};
    config.strategy = *strategy;
    config.parallel = !a.serial;
    Dataset d;
    try {
        d = generate_dataset(tasks, *base, config);
    } catch (const DatasetError &e) {
        // Nothing refined within the limits.
        std::cerr << "error: " << e.what() << "\n";
        return kUnsolved;
    }

    {
        std::ofstream out(a.out);
        if (!out) throw InputError("cannot write " + a.out);
        write_dataset_csv(out, d);
    }
    nlohmann::json meta = {{"domain", d.domain_name},   {"base_heuristic", d.base_heuristic},
                           {"seed", d.rng_seed},         {"instances", d.instances.size()},
                           {"problems", a.problems},     {"seeds_per_problem", a.seeds_per_problem}};
    write_text(meta_path(a.out), meta.dump(2) + "\n");
    std::cout << fmt::format("{} instances from {} problems -> {}\n", d.instances.size(),
                             tasks.size(), a.out);
    return kOk;
}

// learn fit

struct FitArgs {
    std::string dataset, out;
    double corr_low = 0.1, corr_high = 0.95;
    std::uint64_t seed = 1;
};

int run_fit(const FitArgs &a) {
    Dataset d;
    {
        std::ifstream in(a.dataset);
        if (!in) throw InputError("cannot read " + a.dataset);
        d = read_dataset_csv(in);
    }
    if (std::ifstream meta_in(meta_path(a.dataset)); meta_in) {
        try {
            nlohmann::json meta = nlohmann::json::parse(meta_in);
            d.domain_name = meta.value("domain", "");
            d.base_heuristic = meta.value("base_heuristic", "");
            d.rng_seed = meta.value("seed", std::uint64_t{0});
        } catch (const nlohmann::json::exception &e) {
            throw InputError(meta_path(a.dataset) + ": " + e.what());
        }
    }
    LinearModel model = train_model(d, {a.corr_low, a.corr_high}, a.seed);
    save_model(model, a.out);

    FitReport fit = evaluate_fit(model, subsample(d, kMaxTrainingInstances, a.seed));
    std::string features;
    for (Feature f : model.mask) features += (features.empty() ? "" : ",") + std::string(feature_name(f));
    std::cout << fmt::format("features={} instances={} r2={:.6f} residual_sd={:.6f} -> {}\n", features,
                             fit.instances, fit.r_squared, fit.residual_sd, a.out);
    return kOk;
}

// bench

struct BenchArgs {
    std::string config;
    bool serial = false;
};

int run_bench(const BenchArgs &a) {
    SuiteConfig config = load_suite_config(a.config);
    ScoreReport report = run_suite(config, a.serial ? Execution::serial : Execution::parallel);
    if (!config.out_dir.empty()) write_outputs(report, config.out_dir);

    std::cout << fmt::format("{:<32} {:>8} {:>9} {:>9} {:>9} {:>9}\n", "evaluator", "coverage",
                             "quality", "time", "nodes", "makespan");
    for (const auto &t : report.totals)
        std::cout << fmt::format("{:<32} {:>8} {:>9.3f} {:>9.3f} {:>9.3f} {:>9.3f}\n", t.evaluator,
                                 t.coverage, t.quality, t.time, t.nodes, t.makespan);
    for (const auto &r : report.rows)
        if (r.solved && !r.validated) return kUnsolved;
    return report.coverage == static_cast<int>(report.rows.size()) ? kOk : kUnsolved;
}

} // namespace

int main(int argc, char **argv) {
    init_logging();

    CLI::App app{"Partial-order causal-link planner with learned plan-ranking heuristics"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto *s = app.add_subcommand("solve", "solve one problem");
    s->add_option("domain", solve.domain)->required();
    s->add_option("problem", solve.problem)->required();
    s->add_option("--eval", solve.eval, "gval|oc|add|add_w|add_r|add_w_r|model:FILE[:enhanced]")
        ->capture_default_str();
    s->add_option("--flaws", solve.flaws, "mc-loc|mw-loc")->capture_default_str();
    s->add_option("--max-nodes", solve.max_nodes)->capture_default_str();
    s->add_option("--timeout", solve.timeout, "seconds")->capture_default_str();
    s->add_option("--max-copies", solve.max_copies)->capture_default_str();
    s->add_option("--plan-out", solve.plan_out);
    s->add_option("--trace", solve.trace_out, "write the search trace as CSV");

    auto *learn = app.add_subcommand("learn", "training data and model fitting");
    learn->require_subcommand(1);

    DatasetArgs ds;
    auto *d = learn->add_subcommand("dataset", "generate training instances");
    d->add_option("domain", ds.domain)->required();
    d->add_option("problems", ds.problems)->required();
    d->add_option("--base", ds.base, "add|add_w|add_r|add_w_r")->capture_default_str();
    d->add_option("--seeds-per-problem", ds.seeds_per_problem)->capture_default_str();
    d->add_option("--seed", ds.seed)->capture_default_str();
    d->add_option("--max-nodes", ds.max_nodes)->capture_default_str();
    d->add_option("--timeout", ds.timeout)->capture_default_str();
    d->add_option("--flaws", ds.flaws)->capture_default_str();
    d->add_option("--out", ds.out)->required();
    d->add_flag("--serial", ds.serial, "one problem at a time");

    FitArgs fit;
    auto *f = learn->add_subcommand("fit", "fit a linear model");
    f->add_option("dataset", fit.dataset)->required();
    f->add_option("--out", fit.out)->required();
    f->add_option("--corr-low", fit.corr_low)->capture_default_str();
    f->add_option("--corr-high", fit.corr_high)->capture_default_str();
    f->add_option("--seed", fit.seed, "subsampling seed")->capture_default_str();

    BenchArgs bench;
    auto *b = app.add_subcommand("bench", "run a benchmark suite");
    b->add_option("config", bench.config)->required();
    b->add_flag("--serial", bench.serial, "run cells one at a time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (s->parsed()) return run_solve(solve);
        if (d->parsed()) return run_dataset(ds);
        if (f->parsed()) return run_fit(fit);
        if (b->parsed()) return run_bench(bench);
    } catch (const CLI::ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const pddl::ParseError &e) {
        std::cerr << e.what() << "\n";
        return kInput;
    } catch (const ModelFormatError &e) {
        std::cerr << e.what() << "\n";
        return kInput;
    } catch (const DatasetError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::runtime_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
    return kUsage;
}
