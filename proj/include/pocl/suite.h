#ifndef POCL_SUITE_H
#define POCL_SUITE_H

#include "pocl/search.h"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pocl {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "add", "model:FILE" or "model:FILE:enhanced".
struct EvaluatorSpec {
    std::string label;
    std::optional<Feature> feature;
    std::string model_path;
    bool enhanced = false;
};

EvaluatorSpec parse_evaluator_spec(const std::string &text);
Evaluator make_evaluator(const EvaluatorSpec &spec, const TrackerOptions &tracker = {});

struct SuiteConfig {
    std::string domain;
    std::vector<std::string> problems;
    std::vector<EvaluatorSpec> evaluators;
    FlawStrategy strategy = FlawStrategy::mw_loc;
    SearchLimits limits;
    RefinementOptions refinement;
    std::string out_dir;
    std::uint64_t seed = 1;
    int threads = 0;   // 0: OpenMP default
};

/*
  key=value lines, '#' starts a comment. Keys: domain, problem (repeatable),
  problems (comma separated), evaluator (repeatable), evaluators, flaws,
  max_nodes, timeout, max_copies, out, seed, threads. Relative paths are
  resolved against base_dir.
*/
SuiteConfig parse_suite_config(const std::string &text, const std::string &base_dir = "");
SuiteConfig load_suite_config(const std::string &path);

struct ScoreRow {
    std::string problem;
    std::string evaluator;
    bool solved = false;
    int plan_length = 0;
    int makespan = 0;
    double time_s = 0.0;
    std::uint64_t nodes_visited = 0;
    std::uint64_t nodes_generated = 0;
    double quality = 0.0;
    double time_score = 0.0;
    double nodes_score = 0.0;
    double makespan_score = 0.0;

    std::string outcome;
    std::string error;
    bool validated = false;  // every sampled linearization passed validate()
    std::string plan_text;
};

struct EvaluatorTotals {
    std::string evaluator;
    int coverage = 0;
    double quality = 0.0;
    double time = 0.0;
    double nodes = 0.0;
    double makespan = 0.0;
};

struct ScoreReport {
    std::vector<ScoreRow> rows;           // (problem, evaluator) order
    std::vector<EvaluatorTotals> totals;  // config evaluator order
    int coverage = 0;
};

// Fills the four score columns per problem and the per-evaluator totals.
void compute_scores(ScoreReport &report, const std::vector<std::string> &evaluator_order);

enum class Execution { parallel, serial };

ScoreReport run_suite(const SuiteConfig &config, Execution execution = Execution::parallel);

void write_report_csv(std::ostream &out, const ScoreReport &report);
void write_outputs(const ScoreReport &report, const std::string &out_dir);

// Number of random linearizations checked per solved cell.
constexpr int kValidationSamples = 10;

} // namespace pocl

#endif
