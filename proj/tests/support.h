#ifndef POCL_TESTS_SUPPORT_H
#define POCL_TESTS_SUPPORT_H

#include "pocl/ground_task.h"
#include "pocl/pddl.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace pocl::testing {

inline std::string data(const std::string &rel) { return std::string(POCL_DATA_DIR) + "/" + rel; }

inline GroundTask fixture(const std::string &domain, const std::string &problem) {
    return pddl::load_task(data(domain + "/domain.pddl"), data(domain + "/" + problem + ".pddl"));
}

inline std::vector<std::pair<std::string, std::string>> all_fixtures() {
    return {{"gripper", "p01"},   {"gripper", "p02"},   {"gripper", "p03"},   {"gripper", "p04"},
            {"logistics", "p01"}, {"logistics", "p02"}, {"logistics", "p03"}, {"logistics", "p04"},
            {"logistics", "p05"}, {"blocks", "tower-2"}, {"blocks", "tower-3"}, {"blocks", "tower-4"},
            {"blocks", "tower-5"}, {"blocks", "sussman"}, {"blocks", "invert-3"}};
}

// Breadth-first search over world states; optimal sequential plan length.
inline std::optional<int> optimal_length(const GroundTask &task, std::size_t max_states = 2'000'000) {
    using State = std::vector<bool>;
    State init(task.num_facts(), false);
    for (FactId f : task.init) init[f] = true;
    auto is_goal = [&](const State &s) {
        return std::all_of(task.goal.begin(), task.goal.end(), [&](FactId g) { return s[g]; });
    };
    std::set<State> seen{init};
    std::deque<std::pair<State, int>> queue{{init, 0}};
    while (!queue.empty()) {
        auto [s, d] = queue.front();
        queue.pop_front();
        if (is_goal(s)) return d;
        for (const GroundAction &a : task.actions) {
            if (!std::all_of(a.pre.begin(), a.pre.end(), [&](FactId p) { return s[p]; })) continue;
            State t = s;
            for (FactId f : a.del) t[f] = false;
            for (FactId f : a.add) t[f] = true;
            if (seen.insert(t).second) {
                if (seen.size() > max_states) return std::nullopt;
                queue.push_back({std::move(t), d + 1});
            }
        }
    }
    return std::nullopt;
}

// Synchronous (Jacobi) Bellman sweeps from scratch until nothing moves.
inline std::vector<double> bellman_oracle(const GroundTask &task, bool effort) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> v(task.num_facts(), inf);
    for (FactId f : task.init) v[f] = 0;
    for (;;) {
        std::vector<double> next = v;
        for (const GroundAction &a : task.actions) {
            double c = effort ? double(a.pre.size() + 1) : 1.0;
            for (FactId p : a.pre) c += v[p];
            for (FactId f : a.add) next[f] = std::min(next[f], c);
        }
        if (next == v) return v;
        v = std::move(next);
    }
}

// Random STRIPS task over named facts f0..f{n-1}.
inline GroundTask random_task(std::mt19937_64 &rng, int max_facts = 12, int max_actions = 10) {
    std::uniform_int_distribution<int> nf(2, max_facts), na(1, max_actions);
    int facts = nf(rng), actions = na(rng);
    auto name = [](int i) { return "f" + std::to_string(i); };
    auto pick = [&](int lo, int hi) {
        std::uniform_int_distribution<int> k(lo, hi), f(0, facts - 1);
        std::set<int> s;
        int n = k(rng);
        for (int i = 0; i < n; ++i) s.insert(f(rng));
        std::vector<std::string> out;
        for (int i : s) out.push_back(name(i));
        return out;
    };
    TaskBuilder b;
    for (int i = 0; i < facts; ++i) b.fact(name(i));
    for (int a = 0; a < actions; ++a)
        b.action("a" + std::to_string(a), pick(0, 3), pick(1, 2), pick(0, 2));
    b.init(pick(1, 3));
    b.goal(pick(1, 2));
    return b.build();
}

} // namespace pocl::testing

#endif
