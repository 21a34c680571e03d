#ifndef POCL_LINEAR_MODEL_H
#define POCL_LINEAR_MODEL_H

#include "pocl/heuristics.h"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pocl {

/*
  Linear predictor of the number of new actions still needed. Only the
  masked features are read; the prediction is clamped to be non-negative.
*/
struct LinearModel {
    std::string technique = "linear";
    std::vector<Feature> mask;
    std::vector<double> weights;
    double intercept = 0.0;

    std::string domain;
    std::string base_heuristic;
    std::size_t instances = 0;
    std::uint64_t seed = 0;
    double ridge = 0.0;

    bool operator==(const LinearModel &) const = default;
};

double predict(const LinearModel &model, const FeatureVector &features);

class ModelFormatError : public std::runtime_error {
public:
    ModelFormatError(const std::string &field, const std::string &message)
        : std::runtime_error("model file: field '" + field + "': " + message), field_(field) {}
    const std::string &field() const { return field_; }

private:
    std::string field_;
};

std::string model_to_json(const LinearModel &model);
LinearModel model_from_json(const std::string &text);

void save_model(const LinearModel &model, const std::string &path);
LinearModel load_model(const std::string &path);

} // namespace pocl

#endif
