#ifndef POCL_SEARCH_H
#define POCL_SEARCH_H

#include "pocl/heuristics.h"
#include "pocl/linear_model.h"
#include "pocl/partial_plan.h"
#include "pocl/tuning.h"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pocl {

enum class FlawStrategy { mc_loc, mw_loc };

std::string_view strategy_name(FlawStrategy s);
std::optional<FlawStrategy> parse_strategy(std::string_view name);

/*
  Plan-ranking function. The raw value estimates the new actions still
  needed; an enhanced evaluator divides it by (1 - eps) using the search's
  error tracker at the time a node is generated.
*/
class Evaluator {
public:
    using Function = std::function<double(const PartialPlan &, const CostTables &)>;

    static Evaluator feature(Feature f);
    static Evaluator model(LinearModel m, bool enhanced = false, TrackerOptions tracker = {});
    static Evaluator custom(std::string name, Function fn, bool enhanced = false,
                            TrackerOptions tracker = {});

    double raw(const PartialPlan &plan, const CostTables &tables) const { return fn_(plan, tables); }
    double rank(double raw_value, const ErrorTracker &tracker) const;

    bool enhanced() const { return enhanced_; }
    const TrackerOptions &tracker_options() const { return tracker_; }
    const std::string &name() const { return name_; }

private:
    std::string name_;
    Function fn_;
    bool enhanced_ = false;
    TrackerOptions tracker_;
};

struct SearchLimits {
    std::uint64_t max_generated = 1'000'000;
    double wall_time = 900.0;   // seconds
};

struct SearchOptions {
    FlawStrategy strategy = FlawStrategy::mw_loc;
    SearchLimits limits;
    RefinementOptions refinement;
    bool record_trace = false;
    // Keep up to this many generated plans (excluding the root) in the result:
    // the first ones, or a uniform reservoir sample of all of them.
    std::size_t keep_generated = 0;
    bool keep_sample = false;
    std::uint64_t keep_seed = 0;
};

struct TraceRow {
    std::uint64_t node_id;
    std::int64_t parent_id;   // -1 for the root
    double h;                 // raw evaluator value
    int action_count;
    bool is_best_child;
};

void write_trace_csv(std::ostream &out, const std::vector<TraceRow> &trace);

struct SearchStats {
    std::uint64_t generated = 0;
    std::uint64_t visited = 0;
    double elapsed = 0.0;
    int plan_length = 0;
    int makespan = 0;
};

struct SearchResult {
    enum class Outcome { solved, exhausted, limit_hit };
    Outcome outcome = Outcome::exhausted;
    std::optional<PartialPlan> plan;
    SearchStats stats;
    std::vector<TraceRow> trace;
    std::uint64_t solution_node = 0;
    std::vector<PartialPlan> generated_plans;
    ErrorTracker tracker;

    bool solved() const { return outcome == Outcome::solved; }
};

std::string_view outcome_name(SearchResult::Outcome o);

// Threats first (newest first), then the costliest local open condition.
Flaw select_flaw(const PartialPlan &plan, FlawStrategy strategy, const CostTables &tables);

std::vector<PartialPlan> expand(const PartialPlan &plan, FlawStrategy strategy,
                                const CostTables &tables, const RefinementOptions &options = {});

// argmin rank; ties to fewer actions, then to the earlier child.
std::size_t best_child(std::span<const PartialPlan> children, std::span<const double> ranks);
std::size_t best_child(std::span<const PartialPlan> children, const Evaluator &evaluator,
                       const CostTables &tables);

SearchResult gbfs(const GroundTask &task, const CostTables &tables, const Evaluator &evaluator,
                  const SearchOptions &options = {});

// Search starting from an arbitrary partial plan of the task.
SearchResult gbfs_from(const PartialPlan &root, const CostTables &tables,
                       const Evaluator &evaluator, const SearchOptions &options = {});

} // namespace pocl

#endif
