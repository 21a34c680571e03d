#ifndef POCL_HEURISTICS_H
#define POCL_HEURISTICS_H

#include "pocl/partial_plan.h"

#include <array>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace pocl {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class CostVariant { plain, effort };

/*
  Delete-relaxed additive fact costs computed once from init. The plain
  variant charges 1 per action; the effort variant charges |pre(a)| + 1.
*/
struct CostTable {
    CostVariant variant = CostVariant::plain;
    std::vector<double> fact_cost;

    double operator[](FactId f) const { return fact_cost[f]; }
};

CostTable additive_costs(const GroundTask &task, CostVariant variant);

struct CostTables {
    CostTable plain;
    CostTable effort;

    static CostTables build(const GroundTask &task) {
        return {additive_costs(task, CostVariant::plain), additive_costs(task, CostVariant::effort)};
    }
    const CostTable &get(CostVariant v) const { return v == CostVariant::plain ? plain : effort; }
};

enum class Feature { gval = 0, oc, add, add_w, add_r, add_w_r };
constexpr std::size_t kNumFeatures = 6;

std::string_view feature_name(Feature f);
std::optional<Feature> parse_feature(std::string_view name);

struct FeatureVector {
    std::array<double, kNumFeatures> values{};

    double operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }
    double &operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
    bool operator==(const FeatureVector &) const = default;
};

double eval_g(const PartialPlan &plan);
double eval_oc(const PartialPlan &plan);
// Sum of open-condition costs; with reuse, a condition some existing step
// can consistently supply costs nothing.
double eval_add(const PartialPlan &plan, const CostTable &table, bool reuse);

double evaluate_feature(const PartialPlan &plan, const CostTables &tables, Feature f);
FeatureVector feature_vector(const PartialPlan &plan, const CostTables &tables);

} // namespace pocl

#endif
