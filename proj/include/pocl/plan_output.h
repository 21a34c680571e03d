#ifndef POCL_PLAN_OUTPUT_H
#define POCL_PLAN_OUTPUT_H

#include "pocl/partial_plan.h"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pocl {

// Topological order of all steps, a0 first and a_inf last; lowest ready id wins.
std::vector<StepId> linearize(const PartialPlan &plan);

// Uniformly picks among ready steps at every position.
std::vector<StepId> random_linearization(const PartialPlan &plan, std::mt19937_64 &rng);

// Earliest-start slot of every step (dummies get 0); real steps start at 0.
std::vector<int> earliest_slots(const PartialPlan &plan);

// Length of the longest ordering chain of real steps.
int makespan(const PartialPlan &plan);

// Real steps of an order as ground action ids.
std::vector<ActionId> to_actions(const PartialPlan &plan, const std::vector<StepId> &order);

// Simulates the sequence from init; checks preconditions and the goal.
bool validate(const GroundTask &task, const std::vector<ActionId> &sequence);

/*
  Text form of a solution: one "slot: (action args...)" line per real step,
  sorted by slot, followed by ";; makespan=K".
*/
std::string format_plan(const PartialPlan &plan);

} // namespace pocl

#endif
