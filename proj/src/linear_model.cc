#include "pocl/linear_model.h"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace pocl {

using nlohmann::json;

double predict(const LinearModel &model, const FeatureVector &features) {
    double value = model.intercept;
    for (std::size_t i = 0; i < model.mask.size(); ++i) {
        double x = features[model.mask[i]];
        if (std::isinf(x)) return kInfinity;
        value += model.weights[i] * x;
    }
    return std::max(0.0, value);
}

std::string model_to_json(const LinearModel &model) {
    json j;
    j["technique"] = model.technique;
    j["domain"] = model.domain;
    j["base_heuristic"] = model.base_heuristic;
    json mask = json::array();
    for (Feature f : model.mask) mask.push_back(static_cast<int>(f) + 1);
    j["mask"] = mask;
    j["weights"] = model.weights;
    j["intercept"] = model.intercept;
    j["instances"] = model.instances;
    j["seed"] = model.seed;
    j["ridge"] = model.ridge;
    return j.dump(2) + "\n";
}

namespace {

template <typename T>
T field(const json &j, const char *name) {
    if (!j.contains(name))
        throw ModelFormatError(name, "missing");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception &e) {
        throw ModelFormatError(name, e.what());
    }
}

} // namespace

LinearModel model_from_json(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ModelFormatError("<document>", e.what());
    }
    if (!j.is_object())
        throw ModelFormatError("<document>", "expected a JSON object");
    LinearModel m;
    m.technique = j.contains("technique") ? field<std::string>(j, "technique") : "linear";
    if (m.technique != "linear")
        throw ModelFormatError("technique", "unsupported technique '" + m.technique + "'");
    // Metadata may be left out of hand-written files.
    if (j.contains("domain")) m.domain = field<std::string>(j, "domain");
    if (j.contains("base_heuristic")) m.base_heuristic = field<std::string>(j, "base_heuristic");
    for (int idx : field<std::vector<int>>(j, "mask")) {
        if (idx < 1 || idx > static_cast<int>(kNumFeatures))
            throw ModelFormatError("mask", "feature index " + std::to_string(idx) + " outside 1..6");
        m.mask.push_back(static_cast<Feature>(idx - 1));
    }
    m.weights = field<std::vector<double>>(j, "weights");
    if (m.weights.size() != m.mask.size())
        throw ModelFormatError("weights", "has " + std::to_string(m.weights.size()) +
                                              " entries but mask has " +
                                              std::to_string(m.mask.size()));
    m.intercept = field<double>(j, "intercept");
    if (j.contains("instances")) m.instances = field<std::size_t>(j, "instances");
    if (j.contains("seed")) m.seed = field<std::uint64_t>(j, "seed");
    if (j.contains("ridge")) m.ridge = field<double>(j, "ridge");
    return m;
}

void save_model(const LinearModel &model, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write model file " + path);
    out << model_to_json(model);
}

LinearModel load_model(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open model file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

} // namespace pocl
