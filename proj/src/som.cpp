#include "granular/som.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "granular/error.hpp"
#include "granular/random.hpp"

namespace granular {

double SomConfig::initial_radius() const noexcept {
    return neighborhood_radius_initial.value_or(static_cast<double>(n_neurons) / 2.0);
}

void SomConfig::validate() const {
    if (n_neurons < 1) fail(ErrorCode::invalid_argument, "SOM needs at least one neuron");
    if (epochs < 1) fail(ErrorCode::invalid_argument, "SOM needs at least one epoch");
    if (!(learning_rate_initial > 0.0 && learning_rate_initial <= 1.0))
        fail(ErrorCode::invalid_argument, "initial learning rate must lie in (0,1]");
    if (!(learning_rate_final > 0.0 && learning_rate_final <= learning_rate_initial))
        fail(ErrorCode::invalid_argument, "final learning rate must lie in (0, initial]");
    if (!(initial_radius() >= 0.0)) fail(ErrorCode::invalid_argument, "neighbourhood radius must be >= 0");
}

std::vector<Vector> SomModel::prototypes() const {
    std::vector<Vector> out;
    out.reserve(weights.size());
    for (const auto& w : weights) out.push_back(normalization.invert(w));
    return out;
}

namespace {

void check_data(std::span<const Vector> data) {
    if (data.empty()) fail(ErrorCode::empty_data, "SOM data is empty");
    const std::size_t dim = data.front().size();
    if (dim == 0) fail(ErrorCode::dimension_mismatch, "SOM inputs have zero dimensions");
    for (const auto& x : data)
        if (x.size() != dim) fail(ErrorCode::dimension_mismatch, "SOM inputs differ in dimensionality");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

std::size_t winner(const std::vector<Vector>& weights, std::span<const double> scaled) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double d = squared_distance(weights[k], scaled);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

std::vector<Vector> scale_all(const Normalization& n, std::span<const Vector> data) {
    std::vector<Vector> out;
    out.reserve(data.size());
    for (const auto& x : data) out.push_back(n.apply(x));
    return out;
}

SomModel init_from_scaled(const std::vector<Vector>& scaled, const Normalization& normalization,
                          const SomConfig& config, Rng& rng) {
    const std::size_t dim = scaled.front().size();
    Vector lo(dim, std::numeric_limits<double>::infinity());
    Vector hi(dim, -std::numeric_limits<double>::infinity());
    for (const auto& x : scaled)
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], x[d]);
            hi[d] = std::max(hi[d], x[d]);
        }

    SomModel model;
    model.input_dim = dim;
    model.normalization = normalization;
    model.weights.assign(config.n_neurons, Vector(dim));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& w : model.weights)
        for (std::size_t d = 0; d < dim; ++d) w[d] = lo[d] + unit(rng) * (hi[d] - lo[d]);
    return model;
}

}  // namespace

SomModel init_som(std::span<const Vector> data, const SomConfig& config) {
    check_data(data);
    config.validate();
    auto rng = make_rng(config.seed);
    const auto normalization = Normalization::fit(data);
    return init_from_scaled(scale_all(normalization, data), normalization, config, rng);
}

SomModel train_som(std::span<const Vector> data, const SomConfig& config) {
    check_data(data);
    config.validate();
    auto rng = make_rng(config.seed);
    const auto normalization = Normalization::fit(data);
    const auto scaled = scale_all(normalization, data);
    SomModel model = init_from_scaled(scaled, normalization, config, rng);

    const std::size_t n = scaled.size();
    const double total = static_cast<double>(config.epochs * n);
    const double radius0 = config.initial_radius();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx : order) {
            const double frac = total > 1.0 ? static_cast<double>(t) / (total - 1.0) : 1.0;
            const double alpha =
                config.learning_rate_initial + (config.learning_rate_final - config.learning_rate_initial) * frac;
            const double radius = radius0 * (1.0 - frac);
            const auto& x = scaled[idx];
            const std::size_t win = winner(model.weights, x);
            for (std::size_t j = 0; j < model.weights.size(); ++j) {
                const double dist = static_cast<double>(j) - static_cast<double>(win);
                double h = 0.0;
                if (radius > 0.0)
                    h = std::exp(-(dist * dist) / (2.0 * radius * radius));
                else
                    h = j == win ? 1.0 : 0.0;
                if (h == 0.0) continue;
                auto& w = model.weights[j];
                for (std::size_t d = 0; d < w.size(); ++d) w[d] += alpha * h * (x[d] - w[d]);
            }
            ++t;
        }
    }
    return model;
}

std::size_t assign(const SomModel& model, std::span<const double> x) {
    if (x.size() != model.input_dim) fail(ErrorCode::dimension_mismatch, "input has wrong dimensionality for SOM");
    return winner(model.weights, model.normalization.apply(x));
}

double quantization_error(const SomModel& model, std::span<const Vector> data) {
    if (data.empty()) fail(ErrorCode::empty_data, "quantization error of no data");
    double sum = 0.0;
    for (const auto& x : data) {
        if (x.size() != model.input_dim) fail(ErrorCode::dimension_mismatch, "input has wrong dimensionality for SOM");
        const auto s = model.normalization.apply(x);
        sum += std::sqrt(squared_distance(model.weights[winner(model.weights, s)], s));
    }
    return sum / static_cast<double>(data.size());
}

// ---- discretization ------------------------------------------------------

int ScalarDiscretizer::category(double value) const {
    const double s = model.normalization.apply(0, value);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double d = std::abs(model.weights[order[k]][0] - s);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return static_cast<int>(best) + 1;
}

ScalarDiscretizer fit_discretizer(std::span<const double> column, std::size_t n_categories, std::uint64_t seed) {
    if (column.empty()) fail(ErrorCode::empty_data, "cannot discretize an empty column");
    if (n_categories < 1) fail(ErrorCode::invalid_argument, "need at least one category");
    std::vector<Vector> data;
    data.reserve(column.size());
    for (double v : column) data.push_back({v});
    SomConfig config;
    config.n_neurons = n_categories;
    config.seed = seed;

    ScalarDiscretizer d;
    d.model = train_som(data, config);
    d.order.resize(n_categories);
    std::iota(d.order.begin(), d.order.end(), std::size_t{0});
    std::stable_sort(d.order.begin(), d.order.end(),
                     [&](std::size_t a, std::size_t b) { return d.model.weights[a][0] < d.model.weights[b][0]; });
    return d;
}

std::vector<int> discretize_attribute(std::span<const double> column, std::size_t n_categories, std::uint64_t seed) {
    const auto d = fit_discretizer(column, n_categories, seed);
    std::vector<int> out;
    out.reserve(column.size());
    for (double v : column) out.push_back(d.category(v));
    return out;
}

namespace {

AttributeSpec category_spec(const std::string& name, std::size_t n_categories) {
    std::vector<std::pair<std::string, int>> codes;
    for (std::size_t k = 1; k <= n_categories; ++k) codes.emplace_back(std::to_string(k), static_cast<int>(k));
    return AttributeSpec::categorical(name, std::move(codes));
}

}  // namespace

InformationTable TableDiscretizer::apply(const InformationTable& table) const {
    if (table.attribute_names() != attribute_names)
        fail(ErrorCode::schema_mismatch, "table attributes differ from the ones the discretizer was fitted on");
    Schema schema;
    for (const auto& name : attribute_names) schema.attributes.push_back(category_spec(name, n_categories));
    schema.decision = decision ? category_spec(table.decision().name, n_categories) : table.decision();

    std::vector<Vector> conditions;
    Vector decisions;
    for (std::size_t r = 0; r < table.n_objects(); ++r) {
        Vector row(table.n_attributes());
        for (std::size_t a = 0; a < row.size(); ++a) row[a] = attributes[a].category(table.value(r, a));
        conditions.push_back(std::move(row));
        decisions.push_back(decision ? decision->category(table.decision_value(r)) : table.decision_value(r));
    }
    return InformationTable(std::move(schema), std::move(conditions), std::move(decisions), table.ids());
}

TableDiscretizer fit_table_discretizer(const InformationTable& table, std::size_t n_categories, std::uint64_t seed) {
    TableDiscretizer d;
    d.n_categories = n_categories;
    d.attribute_names = table.attribute_names();
    for (std::size_t a = 0; a < table.n_attributes(); ++a)
        d.attributes.push_back(fit_discretizer(table.column(a), n_categories, derive_seed(seed, "discretize", a)));
    if (table.decision().kind == AttributeKind::numeric)
        d.decision = fit_discretizer(table.decisions(), n_categories,
                                     derive_seed(seed, "discretize", table.n_attributes()));
    return d;
}

}  // namespace granular
