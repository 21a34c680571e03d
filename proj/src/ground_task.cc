#include "pocl/ground_task.h"

#include <algorithm>
#include <stdexcept>

namespace pocl {

bool contains(const std::vector<FactId> &sorted, FactId f) {
    return std::binary_search(sorted.begin(), sorted.end(), f);
}

static void normalize(std::vector<FactId> &facts) {
    std::sort(facts.begin(), facts.end());
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
}

bool GroundTask::in_init(FactId f) const {
    return contains(init, f);
}

void GroundTask::finalize() {
    normalize(init);
    normalize(goal);
    achievers.assign(facts.size(), {});
    deleters.assign(facts.size(), {});
    for (std::size_t i = 0; i < actions.size(); ++i) {
        GroundAction &a = actions[i];
        a.id = static_cast<ActionId>(i);
        normalize(a.pre);
        normalize(a.add);
        normalize(a.del);
        // Add wins over delete when an effect list contains both.
        std::vector<FactId> del;
        std::set_difference(a.del.begin(), a.del.end(), a.add.begin(), a.add.end(),
                            std::back_inserter(del));
        a.del = std::move(del);
        for (FactId f : a.add) achievers[f].push_back(a.id);
        for (FactId f : a.del) deleters[f].push_back(a.id);
    }
}

FactId TaskBuilder::fact(const std::string &name) {
    auto it = std::find(task.facts.begin(), task.facts.end(), name);
    if (it != task.facts.end())
        return static_cast<FactId>(it - task.facts.begin());
    task.facts.push_back(name);
    return static_cast<FactId>(task.facts.size() - 1);
}

ActionId TaskBuilder::action(const std::string &name,
                             const std::vector<std::string> &pre,
                             const std::vector<std::string> &add,
                             const std::vector<std::string> &del) {
    GroundAction a;
    a.id = static_cast<ActionId>(task.actions.size());
    a.name = name;
    for (const auto &f : pre) a.pre.push_back(fact(f));
    for (const auto &f : add) a.add.push_back(fact(f));
    for (const auto &f : del) a.del.push_back(fact(f));
    task.actions.push_back(std::move(a));
    return task.actions.back().id;
}

void TaskBuilder::init(const std::vector<std::string> &names) {
    for (const auto &f : names) task.init.push_back(fact(f));
}

void TaskBuilder::goal(const std::vector<std::string> &names) {
    for (const auto &f : names) task.goal.push_back(fact(f));
}

GroundTask TaskBuilder::build() {
    GroundTask out = task;
    out.finalize();
    return out;
}

} // namespace pocl
