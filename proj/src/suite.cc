#include "pocl/suite.h"

#include "pocl/pddl.h"
#include "pocl/plan_output.h"
#include "pocl/scoring.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace pocl {

EvaluatorSpec parse_evaluator_spec(const std::string &text) {
    EvaluatorSpec spec;
    spec.label = text;
    if (auto f = parse_feature(text)) {
        spec.feature = *f;
        return spec;
    }
    if (text.rfind("model:", 0) != 0 || text.size() == 6)
        throw ConfigError("unknown evaluator '" + text + "'");
    std::string rest = text.substr(6);
    const std::string suffix = ":enhanced";
    if (rest.size() > suffix.size() && rest.compare(rest.size() - suffix.size(), suffix.size(), suffix) == 0) {
        spec.enhanced = true;
        rest.resize(rest.size() - suffix.size());
    }
    spec.model_path = rest;
    return spec;
}

Evaluator make_evaluator(const EvaluatorSpec &spec, const TrackerOptions &tracker) {
    if (spec.feature) return Evaluator::feature(*spec.feature);
    return Evaluator::model(load_model(spec.model_path), spec.enhanced, tracker);
}

// Config parsing

namespace {

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <typename T>
T parse_number(const std::string &value, const std::string &where) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError(where + ": bad number '" + value + "'");
    return out;
}

std::string resolve(const std::string &base, const std::string &path) {
    if (base.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base) / path).lexically_normal().string();
}

EvaluatorSpec resolved_spec(const std::string &text, const std::string &base) {
    EvaluatorSpec spec = parse_evaluator_spec(text);
    if (!spec.feature) spec.model_path = resolve(base, spec.model_path);
    return spec;
}

} // namespace

SuiteConfig parse_suite_config(const std::string &text, const std::string &base_dir) {
    SuiteConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "domain") {
                config.domain = resolve(base_dir, value);
            } else if (key == "problem") {
                config.problems.push_back(resolve(base_dir, value));
            } else if (key == "problems") {
                for (auto &p : split_list(value)) config.problems.push_back(resolve(base_dir, p));
            } else if (key == "evaluator") {
                config.evaluators.push_back(resolved_spec(value, base_dir));
            } else if (key == "evaluators") {
                for (auto &e : split_list(value)) config.evaluators.push_back(resolved_spec(e, base_dir));
            } else if (key == "flaws") {
                auto s = parse_strategy(value);
                if (!s) throw ConfigError("unknown flaw strategy '" + value + "'");
                config.strategy = *s;
            } else if (key == "max_nodes") {
                config.limits.max_generated = parse_number<std::uint64_t>(value, where);
            } else if (key == "timeout") {
                config.limits.wall_time = parse_number<double>(value, where);
            } else if (key == "max_copies") {
                config.refinement.max_copies = parse_number<int>(value, where);
            } else if (key == "out") {
                config.out_dir = resolve(base_dir, value);
            } else if (key == "seed") {
                config.seed = parse_number<std::uint64_t>(value, where);
            } else if (key == "threads") {
                config.threads = parse_number<int>(value, where);
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } catch (const ConfigError &e) {
            std::string msg = e.what();
            if (msg.rfind("line ", 0) == 0) throw;
            throw ConfigError(where + ": " + msg);
        }
    }
    if (config.domain.empty()) throw ConfigError("missing 'domain'");
    if (config.problems.empty()) throw ConfigError("missing 'problem'");
    if (config.evaluators.empty()) throw ConfigError("missing 'evaluator'");
    return config;
}

SuiteConfig load_suite_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_suite_config(ss.str(), fs::path(path).parent_path().string());
    } catch (const ConfigError &e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// Scoring

void compute_scores(ScoreReport &report, const std::vector<std::string> &evaluator_order) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    struct Best {
        double length = inf, time = inf, nodes = inf, makespan = inf;
    };
    std::map<std::string, Best> best;
    for (const ScoreRow &r : report.rows) {
        if (!r.solved) continue;
        Best &b = best[r.problem];
        b.length = std::min(b.length, double(r.plan_length));
        b.time = std::min(b.time, r.time_s);
        b.nodes = std::min(b.nodes, double(r.nodes_visited));
        b.makespan = std::min(b.makespan, double(r.makespan));
    }
    for (ScoreRow &r : report.rows) {
        if (!r.solved) {
            r.quality = r.time_score = r.nodes_score = r.makespan_score = 0.0;
            continue;
        }
        const Best &b = best[r.problem];
        r.quality = quality_score(r.plan_length, b.length);
        r.time_score = time_score(r.time_s, b.time);
        r.nodes_score = nodes_score(double(r.nodes_visited), b.nodes);
        r.makespan_score = makespan_score(r.makespan, b.makespan);
    }

    report.totals.clear();
    report.coverage = 0;
    for (const std::string &e : evaluator_order) {
        EvaluatorTotals t;
        t.evaluator = e;
        for (const ScoreRow &r : report.rows) {
            if (r.evaluator != e) continue;
            t.coverage += r.solved ? 1 : 0;
            t.quality += r.quality;
            t.time += r.time_score;
            t.nodes += r.nodes_score;
            t.makespan += r.makespan_score;
        }
        report.coverage += t.coverage;
        report.totals.push_back(t);
    }
}

// Running

namespace {

struct LoadedProblem {
    std::string name;
    std::optional<GroundTask> task;   // empty if the file failed to load
    CostTables tables;
    std::string error;
};

ScoreRow failed_row(const std::string &problem, const std::string &label, const std::string &error) {
    ScoreRow row;
    row.problem = problem;
    row.evaluator = label;
    row.outcome = "error";
    row.error = error;
    return row;
}

ScoreRow search_cell(const LoadedProblem &problem, const Evaluator &evaluator,
                  const std::string &label, const SuiteConfig &config, std::size_t cell) {
    if (!problem.task) return failed_row(problem.name, label, problem.error);
    const GroundTask &task = *problem.task;
    SearchOptions opts;
    opts.strategy = config.strategy;
    opts.limits = config.limits;
    opts.refinement = config.refinement;
    SearchResult res = gbfs(task, problem.tables, evaluator, opts);

    ScoreRow row;
    row.problem = problem.name;
    row.evaluator = label;
    row.solved = res.solved();
    row.outcome = std::string(outcome_name(res.outcome));
    row.time_s = res.stats.elapsed;
    row.nodes_visited = res.stats.visited;
    row.nodes_generated = res.stats.generated;
    if (res.solved()) {
        row.plan_length = res.stats.plan_length;
        row.makespan = res.stats.makespan;
        row.plan_text = format_plan(*res.plan);
        std::seed_seq seq{config.seed, static_cast<std::uint64_t>(cell)};
        std::mt19937_64 rng(seq);
        row.validated = validate(task, to_actions(*res.plan, linearize(*res.plan)));
        for (int i = 0; i < kValidationSamples && row.validated; ++i)
            row.validated = validate(task,
                                     to_actions(*res.plan, random_linearization(*res.plan, rng)));
        if (!row.validated) spdlog::error("{} / {}: plan failed validation", row.problem, label);
    }
    spdlog::info("{} / {}: {} length={} visited={} generated={} {:.3f}s", row.problem, label,
                 row.outcome, row.plan_length, row.nodes_visited, row.nodes_generated, row.time_s);
    return row;
}

ScoreRow run_cell(const LoadedProblem &problem, const Evaluator &evaluator,
                  const std::string &label, const SuiteConfig &config, std::size_t cell) {
    try {
        return search_cell(problem, evaluator, label, config, cell);
    } catch (const std::exception &e) {
        spdlog::error("{} / {}: {}", problem.name, label, e.what());
        return failed_row(problem.name, label, e.what());
    }
}

} // namespace

ScoreReport run_suite(const SuiteConfig &config, Execution execution) {
    pddl::DomainAst domain = pddl::parse_domain(pddl::read_file(config.domain), config.domain);

    std::vector<LoadedProblem> problems;
    problems.reserve(config.problems.size());
    for (const std::string &path : config.problems) {
        LoadedProblem p;
        p.name = fs::path(path).stem().string();
        try {
            pddl::ProblemAst ast = pddl::parse_problem(pddl::read_file(path), domain, path);
            p.task = pddl::ground(domain, ast);
            p.tables = CostTables::build(*p.task);
        } catch (const std::exception &e) {
            spdlog::error("{}", e.what());
            p.error = e.what();
        }
        problems.push_back(std::move(p));
    }

    std::vector<Evaluator> evaluators;
    std::vector<std::string> labels;
    for (const EvaluatorSpec &spec : config.evaluators) {
        evaluators.push_back(make_evaluator(spec));
        labels.push_back(spec.label);
    }

    const std::size_t ne = evaluators.size();
    const std::size_t cells = problems.size() * ne;
    ScoreReport report;
    report.rows.resize(cells);

    if (execution == Execution::serial) {
        for (std::size_t c = 0; c < cells; ++c)
            report.rows[c] = run_cell(problems[c / ne], evaluators[c % ne], labels[c % ne], config, c);
    } else {
#ifdef _OPENMP
        int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#else
        int threads = 1;
#endif
        (void)threads;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (std::size_t c = 0; c < cells; ++c)
            report.rows[c] = run_cell(problems[c / ne], evaluators[c % ne], labels[c % ne], config, c);
    }

    compute_scores(report, labels);
    return report;
}

void write_report_csv(std::ostream &out, const ScoreReport &report) {
    out << "problem,evaluator,solved,plan_length,makespan,time_s,nodes_visited,nodes_generated,"
           "quality,time_score,nodes_score,makespan_score\n";
    for (const ScoreRow &r : report.rows) {
        out << fmt::format("{},{},{},{},{},{:.6f},{},{},{},{},{},{}\n", r.problem, r.evaluator,
                           r.solved ? 1 : 0, r.plan_length, r.makespan, r.time_s, r.nodes_visited,
                           r.nodes_generated, r.quality, r.time_score, r.nodes_score,
                           r.makespan_score);
    }
}

namespace {

std::string file_safe(const std::string &s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

} // namespace

void write_outputs(const ScoreReport &report, const std::string &out_dir) {
    fs::path dir(out_dir);
    fs::create_directories(dir / "plans");
    {
        std::ofstream csv(dir / "report.csv");
        if (!csv) throw std::runtime_error("cannot write " + (dir / "report.csv").string());
        write_report_csv(csv, report);
    }
    for (const ScoreRow &r : report.rows) {
        if (!r.solved) continue;
        std::ofstream plan(dir / "plans" / (r.problem + "." + file_safe(r.evaluator) + ".plan"));
        plan << r.plan_text;
    }
}

} // namespace pocl
