#include "granular/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "granular/error.hpp"

namespace granular {

void SubtractiveConfig::validate() const {
    if (!(radius > 0.0)) fail(ErrorCode::invalid_argument, "cluster radius must be positive");
    if (!(squash > 1.0)) fail(ErrorCode::invalid_argument, "squash factor must exceed 1");
    if (!(accept_ratio > 0.0 && accept_ratio < 1.0)) fail(ErrorCode::invalid_argument, "accept ratio must lie in (0,1)");
    if (!(reject_ratio > 0.0 && reject_ratio < accept_ratio))
        fail(ErrorCode::invalid_argument, "reject ratio must lie in (0, accept ratio)");
}

namespace {

double squared_distance(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return s;
}

std::size_t argmax_lowest(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

ClusterSet subtractive_cluster(std::span<const Vector> data, const SubtractiveConfig& config,
                               std::size_t max_clusters) {
    config.validate();
    if (data.empty()) fail(ErrorCode::empty_data, "cannot cluster an empty data set");
    const std::size_t dim = data.front().size();
    for (const auto& x : data)
        if (x.size() != dim) fail(ErrorCode::dimension_mismatch, "cluster inputs differ in dimensionality");

    ClusterSet out;
    out.config = config;
    if (max_clusters == 0) return out;

    const double alpha = 4.0 / (config.radius * config.radius);
    const double rb = config.squash * config.radius;
    const double beta = 4.0 / (rb * rb);
    const std::size_t n = data.size();

    std::vector<double> potential(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) potential[i] += std::exp(-alpha * squared_distance(data[i], data[j]));

    const auto take = [&](std::size_t k) {
        const double pk = potential[k];
        out.centers.push_back(data[k]);
        out.potentials.push_back(pk);
        out.indices.push_back(k);
        for (std::size_t i = 0; i < n; ++i) potential[i] -= pk * std::exp(-beta * squared_distance(data[i], data[k]));
    };

    std::size_t k = argmax_lowest(potential);
    const double first = potential[k];
    take(k);

    while (out.size() < max_clusters) {
        k = argmax_lowest(potential);
        const double pk = potential[k];
        if (!(pk > 0.0) || pk < config.reject_ratio * first) break;
        if (pk > config.accept_ratio * first) {
            take(k);
            continue;
        }
        double d_min = std::numeric_limits<double>::infinity();
        for (const auto& c : out.centers) d_min = std::min(d_min, std::sqrt(squared_distance(data[k], c)));
        if (d_min / config.radius + pk / first >= 1.0) {
            take(k);
        } else {
            // Rejected candidate: drop it and try the next-highest point.
            potential[k] = 0.0;
        }
    }
    return out;
}

}  // namespace granular
