#include <algorithm>
#include <cmath>

#include "granular/error.hpp"
#include "granular/information_table.hpp"
#include "granular/random.hpp"

// Synthetic longwall dilution survey.
//
// Ground truth (noise free):
//   score = 0.30 t + 0.25 l + 0.20 r + 0.15 m + 0.10 f
// with t, l, r, m the thickness of layer, length of stope, rate of advance and
// number of miners scaled to [0,1] over their generating ranges, and f = 1 for
// forward extraction, 0 for backward. The dilution category is 1 below 0.44,
// 3 at or above 0.56, else 2. Observed rows add uniform noise in
// [-0.03, 0.03] to the score before thresholding. The other eight attributes
// are drawn independently and never enter the decision.

namespace granular {

namespace {

struct NumericRange {
    double lo;
    double hi;
    int decimals;  // -1: integer draw
};

enum Column : std::size_t {
    dip,
    thickness_of_layer,
    contract_type,
    length_of_stope,
    depth,
    rate_of_advance,
    drilling_instrument,
    number_of_miners,
    panel_width,
    type_of_extraction,
    type_of_floor_rock,
    working_height,
    number_of_supports,
    n_columns,
};

constexpr NumericRange kDip{5.0, 35.0, 1};
constexpr NumericRange kThickness{0.8, 2.5, 2};
constexpr NumericRange kStope{60.0, 200.0, 1};
constexpr NumericRange kDepth{150.0, 600.0, 0};
constexpr NumericRange kAdvance{0.5, 3.0, 2};
constexpr NumericRange kMiners{20.0, 80.0, -1};
constexpr NumericRange kPanel{80.0, 250.0, 0};
constexpr NumericRange kHeight{1.6, 3.4, 2};
constexpr NumericRange kSupports{40.0, 160.0, -1};

constexpr double kLowThreshold = 0.44;
constexpr double kHighThreshold = 0.56;
constexpr double kNoise = 0.03;

double scaled(const NumericRange& r, double v) { return std::clamp((v - r.lo) / (r.hi - r.lo), 0.0, 1.0); }

double score(std::span<const double> row) {
    const double forward = row[type_of_extraction] == 1.0 ? 1.0 : 0.0;
    return 0.30 * scaled(kThickness, row[thickness_of_layer]) + 0.25 * scaled(kStope, row[length_of_stope]) +
           0.20 * scaled(kAdvance, row[rate_of_advance]) + 0.15 * scaled(kMiners, row[number_of_miners]) +
           0.10 * forward;
}

int category(double s) {
    if (s < kLowThreshold) return 1;
    if (s < kHighThreshold) return 2;
    return 3;
}

double draw(Rng& rng, const NumericRange& r) {
    if (r.decimals < 0) {
        std::uniform_int_distribution<int> dist(static_cast<int>(r.lo), static_cast<int>(r.hi));
        return dist(rng);
    }
    std::uniform_real_distribution<double> dist(r.lo, r.hi);
    const double scale = std::pow(10.0, r.decimals);
    return std::round(dist(rng) * scale) / scale;
}

double draw_binary(Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    return coin(rng) ? 2.0 : 1.0;
}

}  // namespace

Schema synthetic_schema() {
    Schema s;
    s.attributes = {
        AttributeSpec::numeric("dip"),
        AttributeSpec::numeric("thickness_of_layer"),
        AttributeSpec::categorical("contract_type", {{"Contract work", 1}, {"Service(state)", 2}}),
        AttributeSpec::numeric("length_of_stope"),
        AttributeSpec::numeric("depth"),
        AttributeSpec::numeric("rate_of_advance"),
        AttributeSpec::categorical("drilling_instrument", {{"Pic", 1}, {"Drilling &blasting", 2}}),
        AttributeSpec::numeric("number_of_miners"),
        AttributeSpec::numeric("panel_width"),
        AttributeSpec::categorical("type_of_extraction", {{"Forward", 1}, {"Backward", 2}}),
        AttributeSpec::categorical("type_of_floor_rock", {{"Argillite", 1}, {"Sandy rock", 2}}),
        AttributeSpec::numeric("working_height"),
        AttributeSpec::numeric("number_of_supports"),
    };
    s.decision = AttributeSpec::categorical("dilution", {{"1", 1}, {"2", 2}, {"3", 3}});
    return s;
}

std::vector<std::string> synthetic_sensitive_attributes() {
    return {"thickness_of_layer", "length_of_stope", "rate_of_advance", "number_of_miners", "type_of_extraction"};
}

int synthetic_ground_truth(std::span<const double> row) {
    if (row.size() != n_columns) fail(ErrorCode::dimension_mismatch, "synthetic rows have 13 condition values");
    return category(score(row));
}

InformationTable generate_synthetic(std::size_t n_rows, std::uint64_t seed) {
    if (n_rows < 2) fail(ErrorCode::insufficient_data, "synthetic table needs at least 2 rows");
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> noise(-kNoise, kNoise);

    std::vector<Vector> conditions;
    Vector decisions;
    for (std::size_t r = 0; r < n_rows; ++r) {
        Vector row(n_columns);
        row[dip] = draw(rng, kDip);
        row[thickness_of_layer] = draw(rng, kThickness);
        row[contract_type] = draw_binary(rng);
        row[length_of_stope] = draw(rng, kStope);
        row[depth] = draw(rng, kDepth);
        row[rate_of_advance] = draw(rng, kAdvance);
        row[drilling_instrument] = draw_binary(rng);
        row[number_of_miners] = draw(rng, kMiners);
        row[panel_width] = draw(rng, kPanel);
        row[type_of_extraction] = draw_binary(rng);
        row[type_of_floor_rock] = draw_binary(rng);
        row[working_height] = draw(rng, kHeight);
        row[number_of_supports] = draw(rng, kSupports);
        decisions.push_back(category(score(row) + noise(rng)));
        conditions.push_back(std::move(row));
    }
    return InformationTable(synthetic_schema(), std::move(conditions), std::move(decisions));
}

}  // namespace granular
