#ifndef POCL_LEARNING_H
#define POCL_LEARNING_H

#include "pocl/heuristics.h"
#include "pocl/linear_model.h"
#include "pocl/search.h"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pocl {

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when the target column carries no signal (constant) or is too short.
class DegenerateDatasetError : public DatasetError {
public:
    using DatasetError::DatasetError;
};

struct TrainingInstance {
    FeatureVector features;
    double target = 0.0;   // new actions added while refining the seed
};

// Where an instance came from; plans are only kept on request.
struct InstanceProvenance {
    std::size_t problem = 0;
    int seed_action_count = 0;
    int solution_action_count = 0;
    std::optional<PartialPlan> seed_plan;
    std::optional<PartialPlan> solution_plan;
};

// One draw from the seed pool of a problem.
struct SeedDraw {
    std::size_t problem = 0;
    std::size_t pool_before = 0;   // after removing the drawn seed
    std::size_t pool_after = 0;
    bool refined = false;
    std::size_t instances_added = 0;
};

struct Dataset {
    std::string domain_name;
    std::string base_heuristic;
    std::uint64_t rng_seed = 0;
    std::vector<TrainingInstance> instances;
    std::vector<InstanceProvenance> provenance;
    std::vector<SeedDraw> draws;
};

struct DatasetConfig {
    std::size_t seeds_per_problem = 10;
    SearchLimits limits{500'000, 180.0};
    FlawStrategy strategy = FlawStrategy::mw_loc;
    RefinementOptions refinement;
    std::uint64_t rng_seed = 1;
    // Newly generated plans that may join the pool after a refined seed; a
    // uniform sample when a search generates more.
    std::size_t pool_cap_per_search = 1000;
    bool keep_plans = false;
    // Problems are independent; false runs the serial reference loop.
    bool parallel = true;
};

/*
  Seed-pool dataset preparation. Every problem starts with its null plan
  in the pool; each draw takes a random seed out of the pool and refines it
  with the base heuristic. A refined seed yields one instance and adds the
  plans generated on the way to the pool; a failed one adds nothing.
*/
Dataset generate_dataset(std::span<const GroundTask> tasks, Feature base,
                         const DatasetConfig &config);

void write_dataset_csv(std::ostream &out, const Dataset &dataset);
Dataset read_dataset_csv(std::istream &in);

// Instances whose six features are all finite.
std::vector<TrainingInstance> finite_instances(const Dataset &dataset);

double pearson(std::span<const double> x, std::span<const double> y);

struct SelectionThresholds {
    double low = 0.1;
    double high = 0.95;
};

/*
  Keeps features with |r(feature, target)| >= low, then walks them by
  falling |r| and drops any whose |r| with an already kept feature exceeds
  high. Constant columns never survive; the mask is never empty.
*/
std::vector<Feature> correlation_select(const Dataset &dataset,
                                        const SelectionThresholds &thresholds = {});

LinearModel fit_linear(const Dataset &dataset, const std::vector<Feature> &mask);

struct FitReport {
    double r_squared = 0.0;
    double residual_sd = 0.0;
    std::size_t instances = 0;
};

FitReport evaluate_fit(const LinearModel &model, const Dataset &dataset);

// Uniform subsample without replacement, original order kept.
Dataset subsample(const Dataset &dataset, std::size_t max_instances, std::uint64_t seed);

constexpr std::size_t kMaxTrainingInstances = 350;

// subsample -> correlation_select -> fit_linear, with metadata filled in.
LinearModel train_model(const Dataset &dataset, const SelectionThresholds &thresholds = {},
                        std::uint64_t seed = 1);

} // namespace pocl

#endif
