#ifndef POCL_PARTIAL_PLAN_H
#define POCL_PARTIAL_PLAN_H

#include "pocl/ground_task.h"

#include <cstdint>
#include <optional>
#include <vector>

namespace pocl {

using StepId = std::uint32_t;

// Every plan owns the two dummy steps: a0 supplies init, a_inf consumes goal.
constexpr StepId kInitStep = 0;
constexpr StepId kGoalStep = 1;
constexpr ActionId kNoAction = static_cast<ActionId>(-1);

/*
  Strict partial order over plan steps, stored as its transitive closure:
  one successor bitset per step. Inserting a constraint updates the closure
  in O(steps * words), so queries are a single bit test.
*/
class OrderingClosure {
public:
    std::size_t size() const { return num_steps_; }

    StepId add_step();
    bool before(StepId a, StepId b) const;
    bool consistent(StepId a, StepId b) const { return a != b && !before(b, a); }
    // False (and no change) if a < b would close a cycle.
    bool add(StepId a, StepId b);

    bool operator==(const OrderingClosure &) const = default;

private:
    void grow(std::size_t words);
    std::uint64_t *row(StepId s) { return bits_.data() + s * words_; }
    const std::uint64_t *row(StepId s) const { return bits_.data() + s * words_; }

    std::size_t num_steps_ = 0;
    std::size_t words_ = 1;
    std::vector<std::uint64_t> bits_;
};

struct CausalLink {
    StepId producer;
    FactId fact;
    StepId consumer;
    bool operator==(const CausalLink &) const = default;
};

struct OpenCondition {
    FactId fact;
    StepId consumer;
    bool operator==(const OpenCondition &) const = default;
};

struct Threat {
    StepId step;
    std::uint32_t link;   // index into PartialPlan::links()
    bool operator==(const Threat &) const = default;
};

struct Flaw {
    enum class Kind { open_condition, threat };
    Kind kind;
    OpenCondition open{};
    Threat threat{};

    static Flaw of(const OpenCondition &oc) { return {Kind::open_condition, oc, {}}; }
    static Flaw of(const Threat &t) { return {Kind::threat, {}, t}; }
    bool is_threat() const { return kind == Kind::threat; }
    bool operator==(const Flaw &) const = default;
};

struct Resolver {
    enum class Kind { reuse_step, new_step, promotion, demotion };
    Kind kind;
    Flaw flaw;
    StepId producer = 0;          // reuse_step
    ActionId action = kNoAction;  // new_step
    StepId before = 0;            // promotion / demotion: before < after
    StepId after = 0;

    int cost() const { return kind == Kind::new_step ? 1 : 0; }
};

struct RefinementOptions {
    // Cap on copies of one ground action inside a plan; 0 disables the filter.
    int max_copies = 2;
};

class PartialPlan {
public:
    // The null plan: a0 < a_inf with every goal fact open at a_inf.
    explicit PartialPlan(const GroundTask &task);

    const GroundTask &task() const { return *task_; }

    std::size_t num_steps() const { return steps_.size(); }
    // Ground action behind a step, kNoAction for the dummies.
    ActionId action_of(StepId s) const { return steps_[s]; }
    int action_count() const { return static_cast<int>(steps_.size()) - 2; }
    StepId newest_step() const { return newest_; }

    const std::vector<FactId> &adds_of(StepId s) const;
    const std::vector<FactId> &pre_of(StepId s) const;
    const std::vector<FactId> &dels_of(StepId s) const;

    const OrderingClosure &orderings() const { return orderings_; }
    const std::vector<CausalLink> &links() const { return links_; }
    const std::vector<OpenCondition> &open_conditions() const { return open_; }
    const std::vector<Threat> &threats() const { return threats_; }

    int copies_of(ActionId a) const;
    bool is_solution() const { return open_.empty() && threats_.empty(); }

    // Structural equality; both plans must belong to the same task.
    bool operator==(const PartialPlan &other) const;

private:
    friend class PlanEditor;

    const GroundTask *task_;
    std::vector<ActionId> steps_;
    OrderingClosure orderings_;
    std::vector<CausalLink> links_;
    std::vector<OpenCondition> open_;
    std::vector<Threat> threats_;
    StepId newest_ = kGoalStep;
};

PartialPlan null_plan(const GroundTask &task);

// Threats first, then open conditions; each group sorted by (consumer, fact).
std::vector<Flaw> collect_flaws(const PartialPlan &plan);

std::vector<Resolver> resolvers(const PartialPlan &plan, const Flaw &flaw,
                                const RefinementOptions &options = {});

// New plan with the resolver applied, or nullopt if it would be inconsistent.
std::optional<PartialPlan> apply(const PartialPlan &plan, const Resolver &resolver);

bool is_solution(const PartialPlan &plan);

// All threats of the plan, recomputed without the incremental bookkeeping.
std::vector<Threat> threats_from_scratch(const PartialPlan &plan);

/*
  Mutating builder for hand-constructed plans (tests, fixtures). Edits
  bypass the resolver machinery but keep threats up to date.
*/
class PlanEditor {
public:
    explicit PlanEditor(PartialPlan plan) : plan_(std::move(plan)) {}

    // Adds a step with all its preconditions open.
    StepId add_step(ActionId action);
    bool order(StepId before, StepId after);
    // Links producer to an open condition of consumer and closes it.
    bool link(StepId producer, FactId fact, StepId consumer);

    PartialPlan finish();

private:
    PartialPlan plan_;
};

} // namespace pocl

#endif
