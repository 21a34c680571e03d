#include "pocl/tuning.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pocl {

StepError step_error(double h_parent, double h_best_child, double cost) {
    if (!std::isfinite(h_parent) || !std::isfinite(h_best_child) || !std::isfinite(cost))
        throw std::invalid_argument("step_error: non-finite heuristic value");
    return {(cost + h_best_child) - h_parent};
}

void ErrorTracker::observe(StepError e) {
    error_sum_ += e.value;
    ++observations_;
}

double ErrorTracker::raw_average() const {
    return observations_ == 0 ? 0.0 : error_sum_ / static_cast<double>(observations_);
}

double ErrorTracker::epsilon() const {
    return std::min(raw_average(), options_.epsilon_cap);
}

double enhance(const ErrorTracker &tracker, double h) {
    if (std::isinf(h)) return h;
    double eps = tracker.epsilon();
    if (eps == 0.0) return h;
    return std::max(0.0, h / (1.0 - eps));
}

double geometric_enhance(const ErrorTracker &tracker, double h, int terms) {
    if (std::isinf(h)) return h;
    double eps = tracker.epsilon();
    double sum = 0.0;
    double power = 1.0;
    for (int i = 0; i < terms; ++i) {
        sum += power;
        power *= eps;
    }
    return std::max(0.0, h * sum);
}

} // namespace pocl
