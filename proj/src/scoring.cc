#include "pocl/scoring.h"

#include <algorithm>
#include <cmath>

namespace pocl {

double ratio_score(std::optional<double> value, double best) {
    if (!value) return 0.0;
    return std::min(1.0, std::max(best, 1.0) / std::max(*value, 1.0));
}

double time_score(std::optional<double> seconds, double best_seconds) {
    if (!seconds) return 0.0;
    if (*seconds <= 1.0) return 1.0;
    return std::min(1.0, 1.0 / (1.0 + std::log10(*seconds / std::max(best_seconds, 1.0))));
}

} // namespace pocl
