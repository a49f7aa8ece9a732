#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace granular {

using Vector = std::vector<double>;

/// Per-dimension min-max scaling to [0,1]. A constant dimension maps to 0.
struct Normalization {
    std::vector<std::pair<double, double>> ranges;  // (min, max)

    static Normalization fit(std::span<const Vector> data);
    static Normalization identity(std::size_t dim);

    std::size_t size() const noexcept { return ranges.size(); }
    double apply(std::size_t dim, double value) const noexcept;
    double invert(std::size_t dim, double scaled) const noexcept;
    Vector apply(std::span<const double> x) const;
    Vector invert(std::span<const double> scaled) const;

    bool operator==(const Normalization&) const = default;
};

}  // namespace granular
