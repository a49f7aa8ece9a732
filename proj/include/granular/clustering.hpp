#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "granular/normalization.hpp"

namespace granular {

struct SubtractiveConfig {
    double radius = 0.5;  // r_a, in normalized units
    double squash = 1.25;  // r_b = squash * r_a
    double accept_ratio = 0.5;
    double reject_ratio = 0.15;

    void validate() const;

    bool operator==(const SubtractiveConfig&) const = default;
};

struct ClusterSet {
    std::vector<Vector> centers;
    std::vector<double> potentials;  // potential of each center when selected
    std::vector<std::size_t> indices;  // data row each center was taken from
    SubtractiveConfig config;

    std::size_t size() const noexcept { return centers.size(); }

    bool operator==(const ClusterSet&) const = default;
};

/// Chiu's subtractive clustering over data already scaled to [0,1].
ClusterSet subtractive_cluster(std::span<const Vector> data, const SubtractiveConfig& config,
                               std::size_t max_clusters);

}  // namespace granular
