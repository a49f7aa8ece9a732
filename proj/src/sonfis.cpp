#include "granular/sonfis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "granular/error.hpp"
#include "granular/random.hpp"

namespace granular {

void SonfisConfig::validate() const {
    if (granule_min < 1 || granule_min > granule_max)
        fail(ErrorCode::invalid_argument, "granule range must satisfy 1 <= min <= max");
    if (max_rules < 1) fail(ErrorCode::invalid_argument, "max_rules must be >= 1");
    if (iterations_per_rule_count < 1) fail(ErrorCode::invalid_argument, "iterations per rule count must be >= 1");
    if (nfis_epochs < 1) fail(ErrorCode::invalid_argument, "NFIS epochs must be >= 1");
    if (som_epochs < 1) fail(ErrorCode::invalid_argument, "SOM epochs must be >= 1");
    if (!(learning_rate >= 0.0)) fail(ErrorCode::invalid_argument, "learning rate must be >= 0");
    clustering.validate();
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size())
        fail(ErrorCode::length_mismatch, "predictions and targets differ in length");
    if (predictions.empty()) fail(ErrorCode::empty_data, "MSE of an empty sample");
    double s = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = targets[i] - predictions[i];
        s += e * e;
    }
    return s / static_cast<double>(predictions.size());
}

namespace {

struct Problem {
    std::vector<Vector> train_x;
    Vector train_y;
    std::vector<Vector> patterns;  // train_x with the target appended
    std::vector<Vector> test_x;
    Vector test_y;
    Normalization input_normalization;
};

struct StepOutcome {
    IterationRecord record;
    SomModel som;
    TskModel tsk;
};

StepOutcome run_step(const Problem& p, const SonfisConfig& config, std::size_t step) {
    const std::size_t rules = config.rule_count_at(step);
    auto rng = make_rng(derive_seed(config.seed, "sonfis", step));
    std::uniform_int_distribution<std::size_t> neurons(config.granule_min, config.granule_max);

    StepOutcome out;
    out.record.step = step;
    out.record.n_neurons = neurons(rng);
    out.record.n_rules_requested = rules;

    // First granulation: the training patterns are replaced by the SOM prototypes.
    SomConfig som_config;
    som_config.n_neurons = out.record.n_neurons;
    som_config.epochs = config.som_epochs;
    som_config.seed = rng();
    out.som = train_som(p.patterns, som_config);

    std::vector<Vector> granule_x;
    Vector granule_y;
    std::vector<Vector> granule_scaled;
    for (auto g : out.som.prototypes()) {
        granule_y.push_back(g.back());
        g.pop_back();
        granule_scaled.push_back(p.input_normalization.apply(g));
        granule_x.push_back(std::move(g));
    }

    // Second granulation: fuzzy rules seeded by subtractive clustering.
    const auto clusters = subtractive_cluster(granule_scaled, config.clustering, rules);
    const auto initial = init_from_clusters(clusters, granule_x, granule_y, p.input_normalization);
    out.tsk = hybrid_train(initial, granule_x, granule_y, config.nfis_epochs, config.learning_rate).model;
    out.record.n_rules = out.tsk.n_rules();

    // Close-open check against the real held-out data.
    Vector predictions;
    predictions.reserve(p.test_x.size());
    for (const auto& x : p.test_x) predictions.push_back(forward(out.tsk, x));
    out.record.mse = mse(predictions, p.test_y);
    if (!std::isfinite(out.record.mse))
        fail(ErrorCode::singular_system, "non-finite test MSE");
    return out;
}

}  // namespace

SonfisResult run_sonfis_r(const InformationTable& train, const InformationTable& test, const SonfisConfig& config) {
    config.validate();
    if (train.attribute_names() != test.attribute_names() || train.decision().name != test.decision().name)
        fail(ErrorCode::schema_mismatch, "training and test tables have different schemas");
    if (config.granule_max > train.n_objects())
        fail(ErrorCode::insufficient_data, "granule_max (" + std::to_string(config.granule_max) +
                                               ") exceeds the number of training objects (" +
                                               std::to_string(train.n_objects()) + ")");

    Problem p;
    p.train_x = train.conditions();
    p.train_y = train.decisions();
    p.test_x = test.conditions();
    p.test_y = test.decisions();
    for (std::size_t r = 0; r < p.train_x.size(); ++r) {
        Vector pattern = p.train_x[r];
        pattern.push_back(p.train_y[r]);
        p.patterns.push_back(std::move(pattern));
    }
    p.input_normalization = Normalization::fit(p.train_x);

    const std::size_t n_steps = config.trace_length();
    std::vector<StepOutcome> outcomes(n_steps);
    std::vector<std::exception_ptr> errors(n_steps);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t s = next++; s < n_steps; s = next++) {
            try {
                outcomes[s] = run_step(p, config, s);
            } catch (...) {
                errors[s] = std::current_exception();
            }
        }
    };
    std::size_t n_threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, n_steps);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
        worker();
    }
    for (std::size_t s = 0; s < n_steps; ++s) {
        if (!errors[s]) continue;
        try {
            std::rethrow_exception(errors[s]);
        } catch (const Error& e) {
            throw Error(e.code(), "SONFIS-R step " + std::to_string(s) + ": " + e.what());
        }
    }

    SonfisResult result;
    result.config = config;
    result.input_names = train.attribute_names();
    result.input_means.assign(train.n_attributes(), 0.0);
    for (const auto& x : p.train_x)
        for (std::size_t i = 0; i < x.size(); ++i) result.input_means[i] += x[i];
    for (auto& m : result.input_means) m /= static_cast<double>(p.train_x.size());

    std::size_t best = 0;
    for (std::size_t s = 0; s < n_steps; ++s) {
        result.trace.push_back(outcomes[s].record);
        if (outcomes[s].record.mse < outcomes[best].record.mse) best = s;
    }
    auto& b = outcomes[best];
    result.best = SonfisBest{best, b.record.n_neurons, b.record.n_rules, b.record.mse, std::move(b.som),
                             std::move(b.tsk)};
    return result;
}

std::vector<SurfacePoint> response_surface(const TskModel& model, std::size_t attr_i, std::size_t attr_j,
                                           std::size_t grid_n, std::span<const double> baseline) {
    if (attr_i >= model.input_dim || attr_j >= model.input_dim)
        fail(ErrorCode::index_out_of_range, "surface attribute index out of range");
    if (attr_i == attr_j) fail(ErrorCode::invalid_argument, "surface needs two distinct attributes");
    if (grid_n < 2) fail(ErrorCode::invalid_argument, "surface grid needs at least 2 points per axis");
    if (baseline.size() != model.input_dim) fail(ErrorCode::dimension_mismatch, "baseline has wrong dimensionality");

    const auto axis = [&](std::size_t attr, std::size_t k) {
        const auto [lo, hi] = model.normalization.ranges[attr];
        return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid_n - 1);
    };
    std::vector<SurfacePoint> out;
    out.reserve(grid_n * grid_n);
    Vector x(baseline.begin(), baseline.end());
    for (std::size_t a = 0; a < grid_n; ++a)
        for (std::size_t b = 0; b < grid_n; ++b) {
            x[attr_i] = axis(attr_i, a);
            x[attr_j] = axis(attr_j, b);
            out.push_back({x[attr_i], x[attr_j], forward(model, x)});
        }
    return out;
}

}  // namespace granular
