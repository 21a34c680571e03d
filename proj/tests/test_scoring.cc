#include "pocl/scoring.h"
#include "pocl/suite.h"

#include "support.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pocl;
namespace fs = std::filesystem;

namespace {

ScoreRow row(const std::string &problem, const std::string &eval, bool solved, int length,
             double time = 0.1, std::uint64_t visited = 10, int makespan = 1) {
    ScoreRow r;
    r.problem = problem;
    r.evaluator = eval;
    r.solved = solved;
    r.plan_length = length;
    r.time_s = time;
    r.nodes_visited = visited;
    r.makespan = makespan;
    return r;
}

fs::path scratch(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("pocl_scoring_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

} // namespace

TEST(Scores, Quality) {
    EXPECT_EQ(quality_score(10, 10), 1.0);
    EXPECT_NEAR(quality_score(12, 10), 10.0 / 12.0, 1e-12);
    EXPECT_EQ(quality_score(std::nullopt, 10), 0.0);
}

TEST(Scores, Time) {
    EXPECT_EQ(time_score(0.4, 0.4), 1.0);
    EXPECT_EQ(time_score(10, 10), 1.0);
    EXPECT_NEAR(time_score(100, 10), 0.5, 1e-12);
    EXPECT_EQ(time_score(std::nullopt, 1), 0.0);
    // Sub-second best times still compare against one second.
    EXPECT_NEAR(time_score(10, 0.01), 0.5, 1e-12);
}

TEST(Scores, NodesAndMakespan) {
    EXPECT_EQ(nodes_score(40, 40), 1.0);
    EXPECT_EQ(nodes_score(80, 40), 0.5);
    EXPECT_EQ(nodes_score(std::nullopt, 40), 0.0);
    EXPECT_EQ(makespan_score(3, 3), 1.0);
    EXPECT_EQ(makespan_score(6, 3), 0.5);
    EXPECT_EQ(makespan_score(std::nullopt, 3), 0.0);
    EXPECT_EQ(makespan_score(0, 0), 1.0);  // empty plans
}

TEST(ComputeScores, RatiosAgainstPerProblemBest) {
    ScoreReport r;
    r.rows = {row("p", "a", true, 10, 0.5, 100, 4), row("p", "b", true, 12, 100, 50, 8),
              row("q", "a", false, 0), row("q", "b", true, 3, 2, 5, 3)};
    r.rows[1].time_s = 100;
    compute_scores(r, {"a", "b"});
    EXPECT_EQ(r.rows[0].quality, 1.0);
    EXPECT_NEAR(r.rows[1].quality, 10.0 / 12.0, 1e-12);
    EXPECT_EQ(r.rows[0].nodes_score, 0.5);
    EXPECT_EQ(r.rows[1].nodes_score, 1.0);
    EXPECT_EQ(r.rows[0].makespan_score, 1.0);
    EXPECT_EQ(r.rows[1].makespan_score, 0.5);
    EXPECT_EQ(r.rows[0].time_score, 1.0);
    EXPECT_LT(r.rows[1].time_score, 1.0);
    const ScoreRow &unsolved = r.rows[2];
    EXPECT_EQ(unsolved.quality + unsolved.time_score + unsolved.nodes_score + unsolved.makespan_score, 0);
    EXPECT_EQ(r.rows[3].quality, 1.0);

    ASSERT_EQ(r.totals.size(), 2u);
    EXPECT_EQ(r.totals[0].coverage, 1);
    EXPECT_EQ(r.totals[1].coverage, 2);
    EXPECT_EQ(r.coverage, 3);
    EXPECT_EQ(r.totals[0].quality, 1.0);
    EXPECT_NEAR(r.totals[1].quality, 10.0 / 12.0 + 1.0, 1e-12);
}

TEST(EvaluatorSpec, Parsing) {
    auto f = parse_evaluator_spec("add_w_r");
    EXPECT_EQ(f.feature, Feature::add_w_r);
    auto m = parse_evaluator_spec("model:dir/m.json");
    EXPECT_FALSE(m.feature);
    EXPECT_EQ(m.model_path, "dir/m.json");
    EXPECT_FALSE(m.enhanced);
    auto e = parse_evaluator_spec("model:m.json:enhanced");
    EXPECT_EQ(e.model_path, "m.json");
    EXPECT_TRUE(e.enhanced);
    EXPECT_THROW(parse_evaluator_spec("hff"), ConfigError);
    EXPECT_THROW(parse_evaluator_spec("model:"), ConfigError);
}

TEST(SuiteConfig, Parsing) {
    SuiteConfig c = parse_suite_config("# demo\n"
                                       "domain = d.pddl\n"
                                       "problem = p1.pddl\n"
                                       "problems = p2.pddl, p3.pddl\n"
                                       "evaluators = add, oc\n"
                                       "evaluator = model:m.json:enhanced\n"
                                       "flaws = mc-loc\n"
                                       "max_nodes = 5000   # budget\n"
                                       "timeout = 2.5\n"
                                       "max_copies = 3\n"
                                       "out = results\n"
                                       "seed = 9\n"
                                       "threads = 2\n",
                                       "/base");
    EXPECT_EQ(c.domain, "/base/d.pddl");
    EXPECT_EQ(c.problems, (std::vector<std::string>{"/base/p1.pddl", "/base/p2.pddl", "/base/p3.pddl"}));
    ASSERT_EQ(c.evaluators.size(), 3u);
    EXPECT_EQ(c.evaluators[2].model_path, "/base/m.json");
    EXPECT_EQ(c.evaluators[2].label, "model:m.json:enhanced");
    EXPECT_EQ(c.strategy, FlawStrategy::mc_loc);
    EXPECT_EQ(c.limits.max_generated, 5000u);
    EXPECT_EQ(c.limits.wall_time, 2.5);
    EXPECT_EQ(c.refinement.max_copies, 3);
    EXPECT_EQ(c.out_dir, "/base/results");
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.threads, 2);
}

TEST(SuiteConfig, Errors) {
    EXPECT_THROW(parse_suite_config("problem=p\nevaluator=add\n"), ConfigError);
    EXPECT_THROW(parse_suite_config("domain=d\nproblem=p\nevaluator=add\nbogus=1\n"), ConfigError);
    EXPECT_THROW(parse_suite_config("domain=d\nproblem=p\nevaluator=add\nmax_nodes=lots\n"), ConfigError);
    EXPECT_THROW(parse_suite_config("domain=d\nproblem=p\nevaluator=add\nflaws=fifo\n"), ConfigError);
    EXPECT_THROW(parse_suite_config("domain=d\nproblem p\n"), ConfigError);
    try {
        parse_suite_config("domain=d\n\nwhat=1\n");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(RunSuite, TrivialProblem) {
    fs::path dir = scratch("trivial");
    std::ofstream(dir / "d.pddl") << "(define (domain t) (:predicates (p) (q))\n"
                                     " (:action a :parameters () :precondition (p) :effect (q)))";
    std::ofstream(dir / "p.pddl") << "(define (problem t1) (:domain t) (:init (p)) (:goal (q)))";
    std::ofstream(dir / "suite.cfg") << "domain=d.pddl\nproblem=p.pddl\nevaluator=add\nout=out\n";
    SuiteConfig c = load_suite_config((dir / "suite.cfg").string());
    ScoreReport r = run_suite(c);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.coverage, 1);
    EXPECT_EQ(r.rows[0].quality, 1.0);
    EXPECT_EQ(r.rows[0].plan_length, 1);
    EXPECT_TRUE(r.rows[0].validated);
    write_outputs(r, c.out_dir);
    EXPECT_TRUE(fs::exists(dir / "out" / "report.csv"));
    EXPECT_TRUE(fs::exists(dir / "out" / "plans" / "p.add.plan"));
    std::ifstream plan(dir / "out" / "plans" / "p.add.plan");
    std::stringstream ss;
    ss << plan.rdbuf();
    EXPECT_EQ(ss.str(), "0: (a)\n;; makespan=1\n");
}

TEST(RunSuite, BrokenProblemIsRecorded) {
    fs::path dir = scratch("broken");
    std::ofstream(dir / "d.pddl") << "(define (domain t) (:predicates (p) (q))\n"
                                     " (:action a :parameters () :precondition (p) :effect (q)))";
    std::ofstream(dir / "good.pddl") << "(define (problem t1) (:domain t) (:init (p)) (:goal (q)))";
    std::ofstream(dir / "bad.pddl") << "(define (problem t2) (:domain t) (:init (p)) (:goal (r)))";
    SuiteConfig c = parse_suite_config("domain=d.pddl\nproblem=bad.pddl\nproblem=good.pddl\nevaluators=add,oc\n",
                                       dir.string());
    ScoreReport r = run_suite(c);
    ASSERT_EQ(r.rows.size(), 4u);
    EXPECT_FALSE(r.rows[0].solved);
    EXPECT_FALSE(r.rows[0].error.empty());
    EXPECT_EQ(r.rows[0].quality, 0);
    EXPECT_TRUE(r.rows[2].solved);
    EXPECT_EQ(r.coverage, 2);
}

TEST(RunSuite, CsvColumnsSumToTotalsAndSerialMatchesParallel) {
    SuiteConfig c;
    c.domain = pocl::testing::data("gripper/domain.pddl");
    for (const char *p : {"p01", "p02", "p03"}) c.problems.push_back(pocl::testing::data(std::string("gripper/") + p + ".pddl"));
    for (const char *e : {"oc", "add", "add_r"}) c.evaluators.push_back(parse_evaluator_spec(e));
    c.limits.max_generated = 20000;
    ScoreReport par = run_suite(c, Execution::parallel);
    ScoreReport ser = run_suite(c, Execution::serial);

    std::stringstream csv;
    write_report_csv(csv, par);
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "problem,evaluator,solved,plan_length,makespan,time_s,nodes_visited,nodes_generated,"
                      "quality,time_score,nodes_score,makespan_score");
    std::map<std::string, std::array<double, 4>> sums;
    std::map<std::string, int> coverage;
    std::string line;
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        auto cells = split(line);
        ASSERT_EQ(cells.size(), 12u);
        for (int k = 0; k < 4; ++k) {
            double v = std::stod(cells[8 + k]);
            EXPECT_GE(v, 0);
            EXPECT_LE(v, 1);
            sums[cells[1]][k] += v;
        }
        coverage[cells[1]] += std::stoi(cells[2]);
        ++rows;
    }
    EXPECT_EQ(rows, 9u);
    for (const auto &t : par.totals) {
        EXPECT_NEAR(sums[t.evaluator][0], t.quality, 1e-12);
        EXPECT_NEAR(sums[t.evaluator][1], t.time, 1e-12);
        EXPECT_NEAR(sums[t.evaluator][2], t.nodes, 1e-12);
        EXPECT_NEAR(sums[t.evaluator][3], t.makespan, 1e-12);
        EXPECT_EQ(coverage[t.evaluator], t.coverage);
    }

    ASSERT_EQ(par.rows.size(), ser.rows.size());
    for (std::size_t i = 0; i < par.rows.size(); ++i) {
        EXPECT_EQ(par.rows[i].problem, ser.rows[i].problem);
        EXPECT_EQ(par.rows[i].evaluator, ser.rows[i].evaluator);
        EXPECT_EQ(par.rows[i].solved, ser.rows[i].solved);
        EXPECT_EQ(par.rows[i].nodes_visited, ser.rows[i].nodes_visited);
        EXPECT_EQ(par.rows[i].plan_text, ser.rows[i].plan_text);
        EXPECT_EQ(par.rows[i].quality, ser.rows[i].quality);
    }
}
