#include "pocl/tuning.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace pocl;

namespace {

ErrorTracker tracker_at(double eps) {
    ErrorTracker t;
    t.observe({eps});
    return t;
}

} // namespace

TEST(StepError, Examples) {
    EXPECT_EQ(step_error(5, 4, 1).value, 0);
    EXPECT_EQ(step_error(5, 5, 1).value, 1);
    EXPECT_EQ(step_error(5, 3, 1).value, -1);
    EXPECT_EQ(step_error(5, 5, 0).value, 0);
}

TEST(StepError, RejectsInfinity) {
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW(step_error(inf, 1), std::invalid_argument);
    EXPECT_THROW(step_error(1, inf), std::invalid_argument);
}

TEST(Tracker, FreshIsZero) {
    ErrorTracker t;
    EXPECT_EQ(t.observations(), 0u);
    EXPECT_EQ(t.raw_average(), 0);
    EXPECT_EQ(t.epsilon(), 0);
    EXPECT_EQ(enhance(t, 4), 4);
}

TEST(Tracker, SingleObservationIsCapped) {
    ErrorTracker t = tracker_at(1);
    EXPECT_EQ(t.raw_average(), 1);
    EXPECT_EQ(t.epsilon(), 0.9);
}

TEST(Tracker, Average) {
    ErrorTracker t;
    t.observe({0});
    t.observe({1});
    t.observe({-1});
    EXPECT_EQ(t.raw_average(), 0);
    EXPECT_EQ(t.observations(), 3u);
}

TEST(Tracker, NegativeAveragePassesThrough) {
    ErrorTracker t = tracker_at(-0.5);
    EXPECT_EQ(t.epsilon(), -0.5);
    EXPECT_DOUBLE_EQ(enhance(t, 3), 2);
}

TEST(Enhance, Examples) {
    EXPECT_EQ(enhance(ErrorTracker{}, 4), 4);
    EXPECT_EQ(enhance(tracker_at(0.5), 4), 8);
    EXPECT_DOUBLE_EQ(enhance(tracker_at(2), 1), 10);
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(enhance(tracker_at(0.5), inf), inf);
    EXPECT_EQ(enhance(tracker_at(0.5), 0), 0);
}

TEST(Enhance, CustomCap) {
    ErrorTracker t({0.5, false});
    t.observe({0.8});
    EXPECT_EQ(t.epsilon(), 0.5);
    EXPECT_EQ(enhance(t, 3), 6);
}

TEST(Enhance, OrderPreserving) {
    for (double eps : {-0.9, -0.2, 0.0, 0.4, 0.89, 3.0}) {
        ErrorTracker t = tracker_at(eps);
        for (double h = 0; h < 50; h += 1) EXPECT_LT(enhance(t, h), enhance(t, h + 1)) << eps;
    }
}

TEST(Geometric, Examples) {
    EXPECT_EQ(geometric_enhance(tracker_at(0.5), 4, 1), 4);
    EXPECT_NEAR(geometric_enhance(tracker_at(0.5), 4, 20), 8, 1e-4);
    for (double h : {0.0, 1.0, 7.5})
        for (int terms : {1, 5, 64}) EXPECT_EQ(geometric_enhance(ErrorTracker{}, h, terms), h);
}

TEST(Geometric, PartialSumOracle) {
    // Closed form of the truncated series: h (1 - e^n) / (1 - e).
    for (double eps : {-0.9, -0.5, 0.3, 0.6, 0.89})
        for (int terms : {1, 2, 10, 64})
            for (double h : {1.0, 7.0, 100.0}) {
                double oracle = h * (1 - std::pow(eps, terms)) / (1 - eps);
                EXPECT_NEAR(geometric_enhance(tracker_at(eps), h, terms), oracle, 1e-9 * h);
            }
}

TEST(Geometric, ApproachesEnhance) {
    // Far more terms than the acceptance grid; the limit is reached.
    for (double eps : {-0.9, -0.5, 0.0, 0.3, 0.6, 0.89})
        for (double h : {0.0, 1.0, 7.0, 100.0})
            EXPECT_NEAR(geometric_enhance(tracker_at(eps), h, 1000), enhance(tracker_at(eps), h), 1e-9);
}
