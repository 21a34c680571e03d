#ifndef POCL_TUNING_H
#define POCL_TUNING_H

#include <cstdint>

namespace pocl {

// (cost + h(best child)) - h(parent); zero when h drops by exactly the cost.
struct StepError {
    double value = 0.0;
};

// Throws std::invalid_argument on non-finite input.
StepError step_error(double h_parent, double h_best_child, double cost = 1.0);

struct TrackerOptions {
    double epsilon_cap = 0.9;
    // Also learn from refinements that add no step (cost 0).
    bool observe_zero_cost = false;
};

/*
  Running single-step-error average for one search. The average used for
  enhancement is clamped from above by epsilon_cap so h / (1 - eps) stays
  finite; negative averages pass through and shrink the estimate.
*/
class ErrorTracker {
public:
    ErrorTracker() = default;
    explicit ErrorTracker(TrackerOptions options) : options_(options) {}

    void observe(StepError e);

    double error_sum() const { return error_sum_; }
    std::uint64_t observations() const { return observations_; }
    double raw_average() const;
    double epsilon() const;
    const TrackerOptions &options() const { return options_; }

private:
    TrackerOptions options_;
    double error_sum_ = 0.0;
    std::uint64_t observations_ = 0;
};

double enhance(const ErrorTracker &tracker, double h);

// h * sum_{i < terms} eps^i; tends to enhance() as terms grows.
double geometric_enhance(const ErrorTracker &tracker, double h, int terms);

} // namespace pocl

#endif
