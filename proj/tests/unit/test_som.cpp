#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "granular/error.hpp"
#include "granular/information_table.hpp"
#include "granular/serialization.hpp"
#include "granular/som.hpp"

using namespace granular;

namespace {

std::vector<Vector> synthetic_inputs() { return generate_synthetic(30, 7).conditions(); }

}  // namespace

TEST_CASE("train_som: a single neuron moves to the data mean") {
    const std::vector<Vector> data{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {0.5, 0.2}};
    SomConfig config;
    config.n_neurons = 1;
    config.seed = 3;
    const auto before = init_som(data, config);
    const auto model = train_som(data, config);
    CHECK(quantization_error(model, data) <= quantization_error(before, data));
    const auto proto = model.prototypes().front();
    CHECK(proto[0] == doctest::Approx(0.5).epsilon(0.1));
    CHECK(proto[1] == doctest::Approx(0.44).epsilon(0.15));
}

TEST_CASE("train_som: n distinct points claim n distinct winners") {
    // Evenly spaced points along a curve. Unevenly spaced sets can strand a
    // neuron between two points (a dead unit), so they are not used here.
    for (std::size_t n = 2; n <= 8; ++n) {
        std::vector<Vector> data;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n - 1);
            data.push_back({3.0 * t + 1.0, -2.0 * t, t * t});
        }
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            SomConfig config;
            config.n_neurons = n;
            config.epochs = 300;
            config.seed = seed;
            const auto model = train_som(data, config);
            std::set<std::size_t> winners;
            for (const auto& x : data) {
                // exhaustive winner search, independent of assign()
                const auto s = model.normalization.apply(x);
                std::size_t best = 0;
                double best_d = 1e300;
                for (std::size_t k = 0; k < model.n_neurons(); ++k) {
                    double d = 0.0;
                    for (std::size_t i = 0; i < s.size(); ++i) d += std::pow(model.weights[k][i] - s[i], 2);
                    if (d < best_d) best_d = d, best = k;
                }
                CHECK(assign(model, x) == best);
                winners.insert(best);
            }
            CHECK(winners.size() == data.size());
        }
    }
}

TEST_CASE("train_som: deterministic, finite, and errors") {
    const auto data = synthetic_inputs();
    SomConfig config;
    config.n_neurons = 7;
    config.seed = 11;
    const auto a = train_som(data, config);
    CHECK(a == train_som(data, config));
    for (const auto& w : a.weights)
        for (double v : w) CHECK(std::isfinite(v));

    CHECK_THROWS_AS(train_som(std::vector<Vector>{}, config), Error);
    CHECK_THROWS_AS(train_som(std::vector<Vector>{{1.0}, {1.0, 2.0}}, config), Error);
    SomConfig bad = config;
    bad.learning_rate_final = 0.9;
    CHECK_THROWS_AS(train_som(data, bad), Error);
}

TEST_CASE("assign") {
    SomModel model;
    model.input_dim = 1;
    model.normalization = Normalization::identity(1);
    model.weights = {{0.0}, {0.4}, {0.6}, {1.0}};
    CHECK(assign(model, Vector{0.4}) == 1);
    CHECK(assign(model, Vector{0.5}) == 1);  // equidistant between 1 and 2
    CHECK(assign(model, Vector{5.0}) == 3);
    CHECK_THROWS_AS(assign(model, Vector{0.1, 0.2}), Error);

    const auto trained = train_som(synthetic_inputs(), SomConfig{5, 50, 0.5, 0.01, {}, 1});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-100.0, 300.0);
    for (int i = 0; i < 200; ++i) {
        Vector x(13);
        for (auto& v : x) v = u(rng);
        const auto k = assign(trained, x);
        CHECK(k < 5);
        CHECK(assign(trained, x) == k);
    }
}

TEST_CASE("quantization_error") {
    SomModel model;
    model.input_dim = 2;
    model.normalization = Normalization::identity(2);
    model.weights = {{0.0, 0.0}, {1.0, 1.0}};
    CHECK(quantization_error(model, std::vector<Vector>{{0.0, 0.0}, {1.0, 1.0}}) == 0.0);

    SomModel single = model;
    single.weights = {{0.0, 0.0}};
    CHECK(quantization_error(single, std::vector<Vector>{{0.3, 0.4}}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(quantization_error(single, std::vector<Vector>{}), Error);

    SUBCASE("training lowers the error on the bundled set") {
        const auto data = synthetic_inputs();
        SomConfig config;
        config.n_neurons = 8;
        config.seed = 4;
        CHECK(quantization_error(train_som(data, config), data) < quantization_error(init_som(data, config), data));
    }
    SUBCASE("order of presentation barely matters") {
        auto data = synthetic_inputs();
        SomConfig config;
        config.n_neurons = 6;
        config.seed = 9;
        const double base = quantization_error(train_som(data, config), data);
        std::mt19937_64 rng(1);
        std::shuffle(data.begin(), data.end(), rng);
        const double permuted = quantization_error(train_som(data, config), data);
        CHECK(std::abs(permuted - base) <= 0.1 * base);
    }
}

TEST_CASE("discretize_attribute") {
    SUBCASE("three clumps map to low / medium / high") {
        Vector column;
        std::mt19937_64 rng(2);
        std::normal_distribution<double> jitter(0.0, 0.5);
        for (double c : {20.0, 1.0, 10.0})
            for (int i = 0; i < 7; ++i) column.push_back(c + jitter(rng));
        const auto d = fit_discretizer(column, 3, 17);
        // nearest ordered center, computed here by brute force
        std::vector<double> centers;
        for (auto k : d.order) centers.push_back(d.model.normalization.invert(0, d.model.weights[k][0]));
        CHECK(std::is_sorted(centers.begin(), centers.end()));
        const auto cats = discretize_attribute(column, 3, 17);
        for (std::size_t i = 0; i < column.size(); ++i) {
            std::size_t nearest = 0;
            for (std::size_t k = 1; k < centers.size(); ++k)
                if (std::abs(column[i] - centers[k]) < std::abs(column[i] - centers[nearest])) nearest = k;
            CHECK(cats[i] == static_cast<int>(nearest) + 1);
            const int expected = column[i] > 15 ? 3 : column[i] > 5 ? 2 : 1;
            CHECK(cats[i] == expected);
        }
    }
    SUBCASE("constant column") {
        const auto cats = discretize_attribute(Vector(9, 4.2), 3, 1);
        CHECK(std::all_of(cats.begin(), cats.end(), [](int c) { return c == 1; }));
    }
    SUBCASE("single category") {
        const auto cats = discretize_attribute(Vector{1.0, 5.0, 3.0}, 1, 1);
        CHECK(cats == std::vector<int>{1, 1, 1});
    }
    SUBCASE("empty column") { CHECK_THROWS_AS(discretize_attribute(Vector{}, 3, 1), Error); }
    SUBCASE("monotone on random columns") {
        std::mt19937_64 rng(8);
        std::lognormal_distribution<double> dist(0.0, 1.0);
        for (int trial = 0; trial < 30; ++trial) {
            Vector column(25);
            for (auto& v : column) v = dist(rng);
            const auto cats = discretize_attribute(column, 1 + trial % 5, static_cast<std::uint64_t>(trial));
            for (std::size_t i = 0; i < column.size(); ++i)
                for (std::size_t j = 0; j < column.size(); ++j)
                    if (column[i] <= column[j]) CHECK(cats[i] <= cats[j]);
        }
    }
}

TEST_CASE("binary attribute discretized into three categories uses the end codes") {
    const auto d = fit_discretizer(Vector{1, 2, 1, 1, 2, 2, 1, 2, 2, 1}, 3, 5);
    CHECK(d.category(1.0) == 1);
    CHECK(d.category(2.0) == 3);
}

TEST_CASE("TableDiscretizer") {
    const auto t = generate_synthetic(30, 7);
    const auto d = fit_table_discretizer(t, 3, 42);
    const auto cat = d.apply(t);
    CHECK(cat.ids() == t.ids());
    CHECK(cat.decisions() == t.decisions());  // categorical decision passes through
    for (const auto& row : cat.conditions())
        for (double v : row) CHECK((v == 1.0 || v == 2.0 || v == 3.0));

    const auto round = Json(d).get<TableDiscretizer>();
    CHECK(round == d);
    CHECK(round.apply(t) == cat);

    SUBCASE("numeric decision is discretized too") {
        Schema s;
        s.attributes = {AttributeSpec::numeric("x")};
        s.decision = AttributeSpec::numeric("y");
        InformationTable numeric(s, {{1.0}, {2.0}, {3.0}, {4.0}}, {10.0, 20.0, 80.0, 90.0});
        const auto dn = fit_table_discretizer(numeric, 2, 1);
        REQUIRE(dn.decision.has_value());
        CHECK(dn.apply(numeric).decisions() == Vector{1, 1, 2, 2});
    }
}

TEST_CASE("SomModel JSON round trip is exact") {
    SomConfig config;
    config.n_neurons = 4;
    const auto m = train_som(synthetic_inputs(), config);
    const auto j = Json(m);
    CHECK(j.contains("input_dim"));
    CHECK(j.contains("weights"));
    CHECK(j.contains("normalization"));
    CHECK(Json::parse(j.dump()).get<SomModel>() == m);
}
