#include "pocl/heuristics.h"

namespace pocl {

CostTable additive_costs(const GroundTask &task, CostVariant variant) {
    CostTable table;
    table.variant = variant;
    table.fact_cost.assign(task.num_facts(), kInfinity);
    for (FactId f : task.init) table.fact_cost[f] = 0.0;

    bool changed = true;
    while (changed) {
        changed = false;
        for (const GroundAction &a : task.actions) {
            double cost = variant == CostVariant::plain ? 1.0 : static_cast<double>(a.pre.size()) + 1.0;
            for (FactId p : a.pre) cost += table.fact_cost[p];
            if (cost == kInfinity) continue;
            for (FactId f : a.add) {
                if (cost < table.fact_cost[f]) {
                    table.fact_cost[f] = cost;
                    changed = true;
                }
            }
        }
    }
    return table;
}

std::string_view feature_name(Feature f) {
    switch (f) {
    case Feature::gval: return "gval";
    case Feature::oc: return "oc";
    case Feature::add: return "add";
    case Feature::add_w: return "add_w";
    case Feature::add_r: return "add_r";
    case Feature::add_w_r: return "add_w_r";
    }
    return "?";
}

std::optional<Feature> parse_feature(std::string_view name) {
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
        auto f = static_cast<Feature>(i);
        if (feature_name(f) == name) return f;
    }
    return std::nullopt;
}

double eval_g(const PartialPlan &plan) {
    return plan.action_count();
}

double eval_oc(const PartialPlan &plan) {
    return static_cast<double>(plan.open_conditions().size());
}

static bool reusable(const PartialPlan &plan, const OpenCondition &oc) {
    for (StepId s = 0; s < plan.num_steps(); ++s) {
        if (s == kGoalStep || s == oc.consumer) continue;
        if (contains(plan.adds_of(s), oc.fact) && plan.orderings().consistent(s, oc.consumer))
            return true;
    }
    return false;
}

double eval_add(const PartialPlan &plan, const CostTable &table, bool reuse) {
    double total = 0.0;
    for (const OpenCondition &oc : plan.open_conditions()) {
        if (reuse && reusable(plan, oc)) continue;
        total += table[oc.fact];
    }
    return total;
}

double evaluate_feature(const PartialPlan &plan, const CostTables &tables, Feature f) {
    switch (f) {
    case Feature::gval: return eval_g(plan);
    case Feature::oc: return eval_oc(plan);
    case Feature::add: return eval_add(plan, tables.plain, false);
    case Feature::add_w: return eval_add(plan, tables.effort, false);
    case Feature::add_r: return eval_add(plan, tables.plain, true);
    case Feature::add_w_r: return eval_add(plan, tables.effort, true);
    }
    return kInfinity;
}

FeatureVector feature_vector(const PartialPlan &plan, const CostTables &tables) {
    FeatureVector v;
    for (std::size_t i = 0; i < kNumFeatures; ++i)
        v.values[i] = evaluate_feature(plan, tables, static_cast<Feature>(i));
    return v;
}

} // namespace pocl
