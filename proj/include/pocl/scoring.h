#ifndef POCL_SCORING_H
#define POCL_SCORING_H

#include <optional>

namespace pocl {

// IPC satisficing-track style scores in [0, 1]; nullopt means unsolved.

// best / value, both clamped to >= 1 so empty plans score as equals.
double ratio_score(std::optional<double> value, double best);

inline double quality_score(std::optional<double> cost, double best_cost) {
    return ratio_score(cost, best_cost);
}
inline double nodes_score(std::optional<double> visited, double best_visited) {
    return ratio_score(visited, best_visited);
}
inline double makespan_score(std::optional<double> makespan, double best_makespan) {
    return ratio_score(makespan, best_makespan);
}

// 1 under a second, else 1 / (1 + log10(t / max(t_best, 1))).
double time_score(std::optional<double> seconds, double best_seconds);

} // namespace pocl

#endif
