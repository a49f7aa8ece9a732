#include "granular/normalization.hpp"

#include <algorithm>

#include "granular/error.hpp"

namespace granular {

Normalization Normalization::fit(std::span<const Vector> data) {
    if (data.empty()) fail(ErrorCode::empty_data, "cannot fit a normalization on no data");
    const std::size_t dim = data.front().size();
    Normalization n;
    n.ranges.assign(dim, {0.0, 0.0});
    for (std::size_t d = 0; d < dim; ++d) n.ranges[d] = {data.front()[d], data.front()[d]};
    for (const auto& x : data) {
        if (x.size() != dim) fail(ErrorCode::dimension_mismatch, "rows differ in dimensionality");
        for (std::size_t d = 0; d < dim; ++d) {
            n.ranges[d].first = std::min(n.ranges[d].first, x[d]);
            n.ranges[d].second = std::max(n.ranges[d].second, x[d]);
        }
    }
    return n;
}

Normalization Normalization::identity(std::size_t dim) {
    Normalization n;
    n.ranges.assign(dim, {0.0, 1.0});
    return n;
}

double Normalization::apply(std::size_t dim, double value) const noexcept {
    const auto [lo, hi] = ranges[dim];
    return hi > lo ? (value - lo) / (hi - lo) : 0.0;
}

double Normalization::invert(std::size_t dim, double scaled) const noexcept {
    const auto [lo, hi] = ranges[dim];
    return lo + scaled * (hi - lo);
}

Vector Normalization::apply(std::span<const double> x) const {
    if (x.size() != ranges.size()) fail(ErrorCode::dimension_mismatch, "input has wrong dimensionality");
    Vector out(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) out[d] = apply(d, x[d]);
    return out;
}

Vector Normalization::invert(std::span<const double> scaled) const {
    if (scaled.size() != ranges.size()) fail(ErrorCode::dimension_mismatch, "input has wrong dimensionality");
    Vector out(scaled.size());
    for (std::size_t d = 0; d < scaled.size(); ++d) out[d] = invert(d, scaled[d]);
    return out;
}

}  // namespace granular
