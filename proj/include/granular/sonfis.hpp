#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "granular/anfis.hpp"
#include "granular/clustering.hpp"
#include "granular/information_table.hpp"
#include "granular/som.hpp"

namespace granular {

struct SonfisConfig {
    std::size_t granule_min = 5;
    std::size_t granule_max = 20;
    std::size_t max_rules = 4;
    std::size_t iterations_per_rule_count = 15;
    std::size_t nfis_epochs = 20;
    double learning_rate = 0.01;
    std::size_t som_epochs = 100;
    SubtractiveConfig clustering;
    std::uint64_t seed = 42;
    /// 0 = one worker per hardware thread. Results do not depend on it.
    std::size_t threads = 0;

    /// Rule counts searched run from 2 to max_rules; a single rule is only
    /// searched when max_rules is 1.
    std::size_t first_rule_count() const noexcept { return max_rules >= 2 ? 2 : 1; }
    std::size_t trace_length() const noexcept {
        return (max_rules + 1 - first_rule_count()) * iterations_per_rule_count;
    }
    std::size_t rule_count_at(std::size_t step) const noexcept {
        return first_rule_count() + step / iterations_per_rule_count;
    }
    void validate() const;
};

struct IterationRecord {
    std::size_t step = 0;
    std::size_t n_neurons = 0;
    std::size_t n_rules_requested = 0;
    std::size_t n_rules = 0;  // realized
    double mse = 0.0;

    bool operator==(const IterationRecord&) const = default;
};

struct SonfisBest {
    std::size_t step = 0;
    std::size_t n_neurons = 0;
    std::size_t n_rules = 0;
    double mse = 0.0;
    SomModel som;
    TskModel tsk;
};

struct SonfisResult {
    SonfisConfig config;
    std::vector<IterationRecord> trace;
    SonfisBest best;
    std::vector<std::string> input_names;
    Vector input_means;  // training means, the default surface baseline
};

/// Random search over SOM granularity and rule counts. For every requested
/// rule count r (see SonfisConfig) and every iteration a SOM size is drawn, the training
/// patterns (inputs + target) are replaced by its prototypes, a TSK model
/// with at most r rules is fitted on those granules and scored on the
/// untouched test set. The lowest test MSE wins (earliest step on ties).
SonfisResult run_sonfis_r(const InformationTable& train, const InformationTable& test,
                          const SonfisConfig& config);

/// Mean of squared differences.
double mse(std::span<const double> predictions, std::span<const double> targets);

struct SurfacePoint {
    double x_i = 0.0;
    double x_j = 0.0;
    double z = 0.0;
};

/// grid_n x grid_n evaluation over the model's observed ranges of inputs i and
/// j, every other input pinned at `baseline`. Row-major in x_i.
std::vector<SurfacePoint> response_surface(const TskModel& model, std::size_t attr_i,
                                           std::size_t attr_j, std::size_t grid_n,
                                           std::span<const double> baseline);

}  // namespace granular
