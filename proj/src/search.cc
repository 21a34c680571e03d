#include "pocl/search.h"

#include "pocl/plan_output.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <tuple>

namespace pocl {

std::string_view strategy_name(FlawStrategy s) {
    return s == FlawStrategy::mc_loc ? "mc-loc" : "mw-loc";
}

std::optional<FlawStrategy> parse_strategy(std::string_view name) {
    if (name == "mc-loc") return FlawStrategy::mc_loc;
    if (name == "mw-loc") return FlawStrategy::mw_loc;
    return std::nullopt;
}

std::string_view outcome_name(SearchResult::Outcome o) {
    switch (o) {
    case SearchResult::Outcome::solved: return "solved";
    case SearchResult::Outcome::exhausted: return "exhausted";
    case SearchResult::Outcome::limit_hit: return "limit-hit";
    }
    return "?";
}

// Evaluator

Evaluator Evaluator::feature(Feature f) {
    Evaluator e;
    e.name_ = std::string(feature_name(f));
    e.fn_ = [f](const PartialPlan &plan, const CostTables &tables) {
        return evaluate_feature(plan, tables, f);
    };
    return e;
}

Evaluator Evaluator::model(LinearModel m, bool enhanced, TrackerOptions tracker) {
    Evaluator e;
    e.name_ = enhanced ? "model:enhanced" : "model";
    e.fn_ = [m = std::move(m)](const PartialPlan &plan, const CostTables &tables) {
        return predict(m, feature_vector(plan, tables));
    };
    e.enhanced_ = enhanced;
    e.tracker_ = tracker;
    return e;
}

Evaluator Evaluator::custom(std::string name, Function fn, bool enhanced, TrackerOptions tracker) {
    Evaluator e;
    e.name_ = std::move(name);
    e.fn_ = std::move(fn);
    e.enhanced_ = enhanced;
    e.tracker_ = tracker;
    return e;
}

double Evaluator::rank(double raw_value, const ErrorTracker &tracker) const {
    return enhanced_ ? enhance(tracker, raw_value) : raw_value;
}

void write_trace_csv(std::ostream &out, const std::vector<TraceRow> &trace) {
    out << "node_id,parent_id,h,action_count,is_best_child\n";
    for (const TraceRow &r : trace)
        out << r.node_id << ',' << r.parent_id << ',' << r.h << ',' << r.action_count << ','
            << (r.is_best_child ? 1 : 0) << '\n';
}

// Flaw selection and expansion

Flaw select_flaw(const PartialPlan &plan, FlawStrategy strategy, const CostTables &tables) {
    if (!plan.threats().empty()) return Flaw::of(plan.threats().back());

    const CostTable &table = tables.get(strategy == FlawStrategy::mc_loc ? CostVariant::plain
                                                                         : CostVariant::effort);
    const auto &open = plan.open_conditions();
    bool any_local = std::any_of(open.begin(), open.end(), [&](const OpenCondition &oc) {
        return oc.consumer == plan.newest_step();
    });
    const OpenCondition *best = nullptr;
    for (const OpenCondition &oc : open) {
        if (any_local && oc.consumer != plan.newest_step()) continue;
        if (!best) {
            best = &oc;
            continue;
        }
        double c = table[oc.fact];
        double b = table[best->fact];
        if (c > b || (c == b && std::tie(oc.fact, oc.consumer) < std::tie(best->fact, best->consumer)))
            best = &oc;
    }
    return Flaw::of(*best);
}

std::vector<PartialPlan> expand(const PartialPlan &plan, FlawStrategy strategy,
                                const CostTables &tables, const RefinementOptions &options) {
    std::vector<PartialPlan> children;
    Flaw flaw = select_flaw(plan, strategy, tables);
    for (const Resolver &r : resolvers(plan, flaw, options)) {
        if (auto child = apply(plan, r)) children.push_back(std::move(*child));
    }
    return children;
}

std::size_t best_child(std::span<const PartialPlan> children, std::span<const double> ranks) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < children.size(); ++i) {
        if (ranks[i] < ranks[best] ||
            (ranks[i] == ranks[best] && children[i].action_count() < children[best].action_count()))
            best = i;
    }
    return best;
}

std::size_t best_child(std::span<const PartialPlan> children, const Evaluator &evaluator,
                       const CostTables &tables) {
    std::vector<double> ranks;
    ranks.reserve(children.size());
    for (const auto &c : children) ranks.push_back(evaluator.raw(c, tables));
    return best_child(children, ranks);
}

// Greedy best-first search

namespace {

struct QueueEntry {
    double rank;
    int action_count;
    std::uint64_t seq;
    double h;
    PartialPlan plan;
};

struct WorseEntry {
    bool operator()(const QueueEntry &a, const QueueEntry &b) const {
        return std::tie(a.rank, a.action_count, a.seq) > std::tie(b.rank, b.action_count, b.seq);
    }
};

} // namespace

SearchResult gbfs(const GroundTask &task, const CostTables &tables, const Evaluator &evaluator,
                  const SearchOptions &options) {
    return gbfs_from(null_plan(task), tables, evaluator, options);
}

SearchResult gbfs_from(const PartialPlan &root, const CostTables &tables,
                       const Evaluator &evaluator, const SearchOptions &options) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    SearchResult result;
    result.tracker = ErrorTracker(evaluator.tracker_options());
    ErrorTracker &tracker = result.tracker;

    std::vector<QueueEntry> heap;
    std::mt19937_64 keep_rng(options.keep_seed);
    std::uint64_t offered = 0;
    auto push = [&](double h, PartialPlan plan, std::int64_t parent, bool best) {
        std::uint64_t id = result.stats.generated++;
        if (options.record_trace)
            result.trace.push_back({id, parent, h, plan.action_count(), best});
        if (parent >= 0 && options.keep_generated > 0) {
            ++offered;
            if (result.generated_plans.size() < options.keep_generated) {
                result.generated_plans.push_back(plan);
            } else if (options.keep_sample) {
                std::uint64_t j = keep_rng() % offered;
                if (j < options.keep_generated) result.generated_plans[j] = plan;
            }
        }
        double rank = evaluator.rank(h, tracker);
        int count = plan.action_count();
        heap.push_back({rank, count, id, h, std::move(plan)});
        std::push_heap(heap.begin(), heap.end(), WorseEntry{});
    };
    auto finish = [&](SearchResult::Outcome outcome) {
        result.outcome = outcome;
        result.stats.elapsed = elapsed();
        spdlog::debug("search {}: generated={} visited={} eps={:.4f} ({} observations)",
                      outcome_name(outcome), result.stats.generated, result.stats.visited,
                      tracker.epsilon(), tracker.observations());
        return std::move(result);
    };

    push(evaluator.raw(root, tables), root, -1, false);

    while (!heap.empty()) {
        if (elapsed() > options.limits.wall_time) return finish(SearchResult::Outcome::limit_hit);
        std::pop_heap(heap.begin(), heap.end(), WorseEntry{});
        QueueEntry node = std::move(heap.back());
        heap.pop_back();
        ++result.stats.visited;

        if (node.plan.is_solution()) {
            result.stats.plan_length = node.plan.action_count();
            result.stats.makespan = makespan(node.plan);
            result.solution_node = node.seq;
            result.plan = std::move(node.plan);
            return finish(SearchResult::Outcome::solved);
        }

        std::vector<PartialPlan> children =
            expand(node.plan, options.strategy, tables, options.refinement);
        spdlog::trace("expand {} h={} actions={} children={}", node.seq, node.h,
                      node.plan.action_count(), children.size());
        if (children.empty()) continue;

        std::vector<double> h(children.size());
        for (std::size_t i = 0; i < children.size(); ++i) h[i] = evaluator.raw(children[i], tables);
        std::size_t best = best_child(children, h);

        // The step error is learned before the children are ranked; plans
        // already in the queue keep their rank.
        if (evaluator.enhanced() && std::isfinite(node.h) && std::isfinite(h[best])) {
            int cost = children[best].action_count() - node.plan.action_count();
            if (cost > 0 || tracker.options().observe_zero_cost)
                tracker.observe(step_error(node.h, h[best], cost));
        }

        for (std::size_t i = 0; i < children.size(); ++i) {
            if (result.stats.generated >= options.limits.max_generated)
                return finish(SearchResult::Outcome::limit_hit);
            push(h[i], std::move(children[i]), static_cast<std::int64_t>(node.seq), i == best);
        }
    }
    return finish(SearchResult::Outcome::exhausted);
}

} // namespace pocl
