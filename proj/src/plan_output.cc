#include "pocl/plan_output.h"

#include <algorithm>
#include <sstream>

namespace pocl {

namespace {

template <typename Pick>
std::vector<StepId> topological(const PartialPlan &plan, Pick pick) {
    const std::size_t n = plan.num_steps();
    const OrderingClosure &ord = plan.orderings();
    std::vector<int> indegree(n, 0);
    for (StepId a = 0; a < n; ++a)
        for (StepId b = 0; b < n; ++b)
            if (ord.before(a, b)) ++indegree[b];
    std::vector<StepId> ready, order;
    for (StepId s = 0; s < n; ++s)
        if (indegree[s] == 0) ready.push_back(s);
    while (!ready.empty()) {
        std::size_t i = pick(ready);
        StepId s = ready[i];
        ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(i));
        order.push_back(s);
        for (StepId b = 0; b < n; ++b)
            if (ord.before(s, b) && --indegree[b] == 0) ready.push_back(b);
    }
    return order;
}

} // namespace

std::vector<StepId> linearize(const PartialPlan &plan) {
    return topological(plan, [](const std::vector<StepId> &ready) {
        return static_cast<std::size_t>(std::min_element(ready.begin(), ready.end()) -
                                        ready.begin());
    });
}

std::vector<StepId> random_linearization(const PartialPlan &plan, std::mt19937_64 &rng) {
    return topological(plan, [&](const std::vector<StepId> &ready) {
        return static_cast<std::size_t>(rng() % ready.size());
    });
}

std::vector<int> earliest_slots(const PartialPlan &plan) {
    std::vector<int> slot(plan.num_steps(), 0);
    const OrderingClosure &ord = plan.orderings();
    for (StepId s : linearize(plan)) {
        if (s == kInitStep || s == kGoalStep) continue;
        for (StepId p = 2; p < plan.num_steps(); ++p)
            if (ord.before(p, s)) slot[s] = std::max(slot[s], slot[p] + 1);
    }
    return slot;
}

int makespan(const PartialPlan &plan) {
    if (plan.action_count() == 0) return 0;
    std::vector<int> slot = earliest_slots(plan);
    return *std::max_element(slot.begin() + 2, slot.end()) + 1;
}

std::vector<ActionId> to_actions(const PartialPlan &plan, const std::vector<StepId> &order) {
    std::vector<ActionId> out;
    for (StepId s : order)
        if (s != kInitStep && s != kGoalStep) out.push_back(plan.action_of(s));
    return out;
}

bool validate(const GroundTask &task, const std::vector<ActionId> &sequence) {
    std::vector<bool> state(task.num_facts(), false);
    for (FactId f : task.init) state[f] = true;
    for (ActionId id : sequence) {
        if (id >= task.num_actions()) return false;
        const GroundAction &a = task.actions[id];
        for (FactId f : a.pre)
            if (!state[f]) return false;
        for (FactId f : a.del) state[f] = false;
        for (FactId f : a.add) state[f] = true;
    }
    return std::all_of(task.goal.begin(), task.goal.end(), [&](FactId g) { return state[g]; });
}

std::string format_plan(const PartialPlan &plan) {
    std::vector<int> slot = earliest_slots(plan);
    std::vector<StepId> order = linearize(plan);
    std::vector<StepId> real;
    for (StepId s : order)
        if (s != kInitStep && s != kGoalStep) real.push_back(s);
    std::stable_sort(real.begin(), real.end(),
                     [&](StepId a, StepId b) { return slot[a] < slot[b]; });
    std::ostringstream out;
    for (StepId s : real)
        out << slot[s] << ": " << plan.task().actions[plan.action_of(s)].name << '\n';
    out << ";; makespan=" << makespan(plan) << '\n';
    return out.str();
}

} // namespace pocl
