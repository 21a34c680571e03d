#include "pocl/learning.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace pocl {

// Dataset preparation

namespace {

struct ProblemDataset {
    std::vector<TrainingInstance> instances;
    std::vector<InstanceProvenance> provenance;
    std::vector<SeedDraw> draws;
};

// splitmix64 finalizer; gives each problem its own stream.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t problem_seed(std::uint64_t seed, std::size_t problem) {
    return mix(seed ^ mix(static_cast<std::uint64_t>(problem)));
}

ProblemDataset prepare_problem(const GroundTask &task, std::size_t problem, Feature base,
                               const DatasetConfig &config) {
    ProblemDataset out;
    const CostTables tables = CostTables::build(task);
    const Evaluator evaluator = Evaluator::feature(base);
    SearchOptions options;
    options.strategy = config.strategy;
    options.limits = config.limits;
    options.refinement = config.refinement;
    options.keep_generated = config.pool_cap_per_search;

    std::mt19937_64 rng(problem_seed(config.rng_seed, problem));
    std::vector<PartialPlan> pool{null_plan(task)};
    for (std::size_t draw = 0; draw < config.seeds_per_problem && !pool.empty(); ++draw) {
        std::size_t pick = rng() % pool.size();
        PartialPlan seed = std::move(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));

        SeedDraw record;
        record.problem = problem;
        record.pool_before = pool.size();
        options.keep_sample = true;
        options.keep_seed = rng();
        SearchResult result = gbfs_from(seed, tables, evaluator, options);
        if (result.solved()) {
            record.refined = true;
            record.instances_added = 1;
            TrainingInstance inst;
            inst.features = feature_vector(seed, tables);
            inst.target = result.plan->action_count() - seed.action_count();
            out.instances.push_back(inst);

            InstanceProvenance prov;
            prov.problem = problem;
            prov.seed_action_count = seed.action_count();
            prov.solution_action_count = result.plan->action_count();
            if (config.keep_plans) {
                prov.seed_plan = seed;
                prov.solution_plan = *result.plan;
            }
            out.provenance.push_back(std::move(prov));
            for (auto &p : result.generated_plans) pool.push_back(std::move(p));
        }
        record.pool_after = pool.size();
        out.draws.push_back(record);
    }
    spdlog::info("dataset: problem {} ({}) -> {} instances from {} draws", problem,
                 task.problem_name, out.instances.size(), out.draws.size());
    return out;
}

} // namespace

Dataset generate_dataset(std::span<const GroundTask> tasks, Feature base,
                         const DatasetConfig &config) {
    std::vector<ProblemDataset> per_problem(tasks.size());
    const auto n = static_cast<std::ptrdiff_t>(tasks.size());
    if (config.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < n; ++i)
            per_problem[i] = prepare_problem(tasks[i], static_cast<std::size_t>(i), base, config);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            per_problem[i] = prepare_problem(tasks[i], static_cast<std::size_t>(i), base, config);
    }

    Dataset d;
    d.domain_name = tasks.empty() ? "" : tasks.front().domain_name;
    d.base_heuristic = std::string(feature_name(base));
    d.rng_seed = config.rng_seed;
    for (auto &p : per_problem) {
        std::move(p.instances.begin(), p.instances.end(), std::back_inserter(d.instances));
        std::move(p.provenance.begin(), p.provenance.end(), std::back_inserter(d.provenance));
        std::move(p.draws.begin(), p.draws.end(), std::back_inserter(d.draws));
    }
    if (d.instances.empty())
        throw DatasetError("dataset is empty: no seed was refined within the limits");
    return d;
}

// CSV

namespace {
const char *kCsvHeader = "h_gval,h_oc,h_add,h_add_w,h_add_r,h_add_w_r,target";

void write_number(std::ostream &out, double v) {
    if (std::isinf(v))
        out << "inf";
    else
        out << v;
}
} // namespace

void write_dataset_csv(std::ostream &out, const Dataset &dataset) {
    out << kCsvHeader << '\n';
    auto old = out.precision(17);
    for (const auto &inst : dataset.instances) {
        for (double v : inst.features.values) {
            write_number(out, v);
            out << ',';
        }
        write_number(out, inst.target);
        out << '\n';
    }
    out.precision(old);
}

Dataset read_dataset_csv(std::istream &in) {
    Dataset d;
    std::string line;
    if (!std::getline(in, line))
        throw DatasetError("dataset CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw DatasetError("dataset CSV: unexpected header '" + line + "'");
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> values;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (cell == "inf") {
                values.push_back(kInfinity);
                continue;
            }
            try {
                std::size_t used = 0;
                values.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception &) {
                throw DatasetError("dataset CSV row " + std::to_string(row) + ": bad number '" +
                                   cell + "'");
            }
        }
        if (values.size() != kNumFeatures + 1)
            throw DatasetError("dataset CSV row " + std::to_string(row) + ": expected " +
                               std::to_string(kNumFeatures + 1) + " columns");
        TrainingInstance inst;
        std::copy_n(values.begin(), kNumFeatures, inst.features.values.begin());
        inst.target = values.back();
        d.instances.push_back(inst);
    }
    return d;
}

std::vector<TrainingInstance> finite_instances(const Dataset &dataset) {
    std::vector<TrainingInstance> out;
    for (const auto &inst : dataset.instances) {
        if (std::all_of(inst.features.values.begin(), inst.features.values.end(),
                        [](double v) { return std::isfinite(v); }) &&
            std::isfinite(inst.target))
            out.push_back(inst);
    }
    return out;
}

// Feature selection

double pearson(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

namespace {

struct Columns {
    std::vector<std::vector<double>> feature;   // [feature][instance]
    std::vector<double> target;
};

Columns columns_of(const std::vector<TrainingInstance> &instances) {
    Columns c;
    c.feature.assign(kNumFeatures, {});
    for (const auto &inst : instances) {
        for (std::size_t f = 0; f < kNumFeatures; ++f) c.feature[f].push_back(inst.features.values[f]);
        c.target.push_back(inst.target);
    }
    return c;
}

bool is_constant(const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

} // namespace

std::vector<Feature> correlation_select(const Dataset &dataset,
                                        const SelectionThresholds &thresholds) {
    const auto instances = finite_instances(dataset);
    if (instances.size() < 2)
        throw DegenerateDatasetError("feature selection needs at least 2 finite instances");
    const Columns c = columns_of(instances);
    if (is_constant(c.target))
        throw DegenerateDatasetError("target column is constant");

    std::vector<double> relevance(kNumFeatures, 0.0);
    std::vector<std::size_t> candidates;
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        if (is_constant(c.feature[f])) continue;
        relevance[f] = std::abs(pearson(c.feature[f], c.target));
        if (relevance[f] >= thresholds.low) candidates.push_back(f);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return relevance[a] > relevance[b]; });

    std::vector<std::size_t> kept;
    for (std::size_t f : candidates) {
        bool redundant = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
            return std::abs(pearson(c.feature[f], c.feature[k])) > thresholds.high;
        });
        if (!redundant) kept.push_back(f);
    }
    if (kept.empty()) {
        std::size_t best = 0;
        for (std::size_t f = 1; f < kNumFeatures; ++f)
            if (relevance[f] > relevance[best]) best = f;
        kept.push_back(best);
    }
    std::sort(kept.begin(), kept.end());
    std::vector<Feature> mask;
    for (std::size_t f : kept) mask.push_back(static_cast<Feature>(f));
    return mask;
}

// Least squares

namespace {

// In-place Cholesky solve of a symmetric positive definite system.
bool cholesky_solve(std::vector<double> a, std::vector<double> &b, std::size_t n,
                    double relative_tolerance) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a[i * n + i]);
    const double tolerance = relative_tolerance * std::max(max_diag, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > tolerance)) return false;
        a[j * n + j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / a[j * n + j];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
        b[i] = s / a[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
        b[i] = s / a[i * n + i];
    }
    return true;
}

} // namespace

LinearModel fit_linear(const Dataset &dataset, const std::vector<Feature> &mask) {
    const auto instances = finite_instances(dataset);
    const std::size_t n = mask.size();
    if (instances.size() < n + 1)
        throw DegenerateDatasetError("fit needs at least " + std::to_string(n + 1) +
                                     " finite instances, got " + std::to_string(instances.size()));
    const double count = static_cast<double>(instances.size());
    std::vector<double> target;
    for (const auto &inst : instances) target.push_back(inst.target);
    if (is_constant(target))
        throw DegenerateDatasetError("target column is constant");

    // Centering removes the intercept from the normal equations.
    std::vector<double> mean(n, 0.0);
    double mean_y = std::accumulate(target.begin(), target.end(), 0.0) / count;
    for (const auto &inst : instances)
        for (std::size_t i = 0; i < n; ++i) mean[i] += inst.features[mask[i]] / count;

    std::vector<double> gram(n * n, 0.0), rhs(n, 0.0);
    for (const auto &inst : instances) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = inst.features[mask[i]] - mean[i];
        double y = inst.target - mean_y;
        for (std::size_t i = 0; i < n; ++i) {
            rhs[i] += x[i] * y;
            for (std::size_t j = 0; j < n; ++j) gram[i * n + j] += x[i] * x[j];
        }
    }

    LinearModel model;
    model.mask = mask;
    std::vector<double> w = rhs;
    if (!cholesky_solve(gram, w, n, 1e-12)) {
        model.ridge = 1e-8;
        for (std::size_t i = 0; i < n; ++i) gram[i * n + i] += model.ridge;
        w = rhs;
        if (!cholesky_solve(gram, w, n, 0.0))
            throw DatasetError("normal equations are not solvable even with ridge damping");
    }
    model.weights = w;
    model.intercept = mean_y;
    for (std::size_t i = 0; i < n; ++i) model.intercept -= w[i] * mean[i];
    model.instances = instances.size();
    model.domain = dataset.domain_name;
    model.base_heuristic = dataset.base_heuristic;
    model.seed = dataset.rng_seed;
    return model;
}

FitReport evaluate_fit(const LinearModel &model, const Dataset &dataset) {
    const auto instances = finite_instances(dataset);
    FitReport report;
    report.instances = instances.size();
    if (instances.empty()) return report;
    double mean_y = 0.0;
    for (const auto &inst : instances) mean_y += inst.target / static_cast<double>(instances.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto &inst : instances) {
        double r = inst.target - predict(model, inst.features);
        ss_res += r * r;
        ss_tot += (inst.target - mean_y) * (inst.target - mean_y);
    }
    report.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
    report.residual_sd = std::sqrt(ss_res / static_cast<double>(instances.size()));
    return report;
}

Dataset subsample(const Dataset &dataset, std::size_t max_instances, std::uint64_t seed) {
    if (dataset.instances.size() <= max_instances) return dataset;
    std::vector<std::size_t> index(dataset.instances.size());
    std::iota(index.begin(), index.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < max_instances; ++i) {
        std::size_t j = i + rng() % (index.size() - i);
        std::swap(index[i], index[j]);
    }
    index.resize(max_instances);
    std::sort(index.begin(), index.end());
    Dataset out;
    out.domain_name = dataset.domain_name;
    out.base_heuristic = dataset.base_heuristic;
    out.rng_seed = dataset.rng_seed;
    for (std::size_t i : index) {
        out.instances.push_back(dataset.instances[i]);
        if (i < dataset.provenance.size()) out.provenance.push_back(dataset.provenance[i]);
    }
    return out;
}

LinearModel train_model(const Dataset &dataset, const SelectionThresholds &thresholds,
                        std::uint64_t seed) {
    Dataset sample = subsample(dataset, kMaxTrainingInstances, seed);
    std::vector<Feature> mask = correlation_select(sample, thresholds);
    return fit_linear(sample, mask);
}

} // namespace pocl
