#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "granular/information_table.hpp"
#include "granular/normalization.hpp"

namespace granular {

struct SomConfig {
    std::size_t n_neurons = 3;
    std::size_t epochs = 100;
    double learning_rate_initial = 0.5;
    double learning_rate_final = 0.01;
    /// Defaults to n_neurons / 2 when unset.
    std::optional<double> neighborhood_radius_initial;
    std::uint64_t seed = 0;

    double initial_radius() const noexcept;
    void validate() const;
};

/// 1-D chain of prototypes. Weights live in the normalized [0,1] space
/// described by `normalization`.
struct SomModel {
    std::vector<Vector> weights;
    std::size_t input_dim = 0;
    Normalization normalization;

    std::size_t n_neurons() const noexcept { return weights.size(); }
    /// Weights mapped back to input units.
    std::vector<Vector> prototypes() const;

    bool operator==(const SomModel&) const = default;
};

/// Seeded initial chain (weights uniform inside the normalized data range).
SomModel init_som(std::span<const Vector> data, const SomConfig& config);

/// Online winner-take-all training with a Gaussian chain neighbourhood; the
/// learning rate and radius decay linearly over all presentations.
SomModel train_som(std::span<const Vector> data, const SomConfig& config);

/// Index of the nearest prototype to normalized x; ties go to the lowest index.
std::size_t assign(const SomModel& model, std::span<const double> x);

/// Mean Euclidean distance (normalized space) from each point to its winner.
double quantization_error(const SomModel& model, std::span<const Vector> data);

/// Frozen scalar discretizer: a trained 1-D SOM whose neurons are relabelled
/// by ascending weight so category 1 is the lowest prototype.
struct ScalarDiscretizer {
    SomModel model;
    std::vector<std::size_t> order;  // order[k] = neuron holding category k+1

    std::size_t n_categories() const noexcept { return order.size(); }
    int category(double value) const;

    bool operator==(const ScalarDiscretizer&) const = default;
};

ScalarDiscretizer fit_discretizer(std::span<const double> column, std::size_t n_categories,
                                  std::uint64_t seed = 0);

std::vector<int> discretize_attribute(std::span<const double> column, std::size_t n_categories,
                                      std::uint64_t seed = 0);

/// One discretizer per condition attribute, plus one for a numeric decision.
/// Categorical decisions pass through unchanged.
struct TableDiscretizer {
    std::size_t n_categories = 3;
    std::vector<std::string> attribute_names;
    std::vector<ScalarDiscretizer> attributes;
    std::optional<ScalarDiscretizer> decision;

    InformationTable apply(const InformationTable& table) const;

    bool operator==(const TableDiscretizer&) const = default;
};

TableDiscretizer fit_table_discretizer(const InformationTable& table, std::size_t n_categories,
                                       std::uint64_t seed);

}  // namespace granular
