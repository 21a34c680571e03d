#ifndef POCL_GROUND_TASK_H
#define POCL_GROUND_TASK_H

#include <cstdint>
#include <string>
#include <vector>

namespace pocl {

using FactId = std::uint32_t;
using ActionId = std::uint32_t;

struct GroundAction {
    ActionId id = 0;
    std::string name;            // "(pick ball1 rooma left)"
    std::vector<FactId> pre;     // sorted, unique
    std::vector<FactId> add;     // sorted, unique
    std::vector<FactId> del;     // sorted, unique, disjoint from add
    int cost = 1;
};

/*
  A propositional STRIPS task. Facts and actions are dense indices; every
  fact list is kept sorted so membership tests can use binary search.
  achievers[f] lists the actions adding f, deleters[f] those deleting it.
*/
struct GroundTask {
    std::string domain_name;
    std::string problem_name;
    std::vector<std::string> facts;
    std::vector<GroundAction> actions;
    std::vector<FactId> init;
    std::vector<FactId> goal;
    std::vector<std::vector<ActionId>> achievers;
    std::vector<std::vector<ActionId>> deleters;

    std::size_t num_facts() const { return facts.size(); }
    std::size_t num_actions() const { return actions.size(); }
    bool in_init(FactId f) const;

    // Rebuilds achievers/deleters and normalizes every fact list.
    void finalize();
};

struct TaskBuilder {
    GroundTask task;

    FactId fact(const std::string &name);
    ActionId action(const std::string &name,
                    const std::vector<std::string> &pre,
                    const std::vector<std::string> &add,
                    const std::vector<std::string> &del = {});
    void init(const std::vector<std::string> &names);
    void goal(const std::vector<std::string> &names);
    GroundTask build();
};

bool contains(const std::vector<FactId> &sorted, FactId f);

} // namespace pocl

#endif
