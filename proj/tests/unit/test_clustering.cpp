#include <doctest.h>

#include <algorithm>
#include <random>

#include "../support/oracles.hpp"
#include "granular/clustering.hpp"
#include "granular/error.hpp"
#include "granular/serialization.hpp"

using namespace granular;

namespace {

std::vector<Vector> random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vector> out(n, Vector(dim));
    for (auto& x : out)
        for (auto& v : x) v = u(rng);
    return out;
}

std::vector<Vector> bundled_scaled() {
    const auto t = generate_synthetic(30, 42);
    const auto norm = Normalization::fit(t.conditions());
    std::vector<Vector> out;
    for (const auto& x : t.conditions()) out.push_back(norm.apply(x));
    return out;
}

}  // namespace

TEST_CASE("single point is its own center") {
    const std::vector<Vector> one{{0.3, 0.7}};
    const auto c = subtractive_cluster(one, {}, 4);
    REQUIRE(c.size() == 1);
    CHECK(c.centers[0] == one[0]);
    CHECK(c.potentials[0] == 1.0);
    CHECK(c.indices == std::vector<std::size_t>{0});
}

TEST_CASE("two clumps get one center each") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> jitter(-0.02, 0.02);
    std::vector<Vector> data;
    for (int i = 0; i < 10; ++i) data.push_back({0.05 + jitter(rng), 0.05 + jitter(rng)});
    for (int i = 0; i < 10; ++i) data.push_back({0.95 + jitter(rng), 0.95 + jitter(rng)});
    SubtractiveConfig config;
    config.radius = 0.3;
    const auto c = subtractive_cluster(data, config, 4);
    REQUIRE(c.size() == 2);
    std::set<int> clumps;
    for (const auto& center : c.centers) {
        const double d_low = std::hypot(center[0] - 0.05, center[1] - 0.05);
        const double d_high = std::hypot(center[0] - 0.95, center[1] - 0.95);
        clumps.insert(d_low < d_high ? 0 : 1);
    }
    CHECK(clumps.size() == 2);
}

TEST_CASE("max_clusters = 1 returns the max-potential point") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto data = random_points(rng, 5 + trial % 20, 1 + trial % 4);
        const auto p = oracle::potentials(data, 0.5);
        const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
        const auto c = subtractive_cluster(data, {}, 1);
        REQUIRE(c.size() == 1);
        CHECK(c.indices[0] == best);
        CHECK(c.centers[0] == data[best]);
        CHECK(c.potentials[0] == doctest::Approx(p[best]).epsilon(1e-12));
    }
}

TEST_CASE("ties on potential go to the lowest index") {
    const std::vector<Vector> data{{0.0}, {1.0}};
    const auto c = subtractive_cluster(data, {}, 1);
    CHECK(c.indices[0] == 0);
}

TEST_CASE("cluster set invariants") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const auto data = random_points(rng, 3 + trial % 25, 1 + trial % 3);
        const std::size_t cap = 1 + trial % 6;
        SubtractiveConfig config;
        config.radius = 0.2 + 0.1 * (trial % 5);
        const auto c = subtractive_cluster(data, config, cap);
        CHECK(c.size() >= 1);
        CHECK(c.size() <= std::min(cap, data.size()));
        CHECK(c.potentials.size() == c.size());
        for (std::size_t k = 0; k < c.size(); ++k) {
            CHECK(c.potentials[k] > 0.0);
            if (k) CHECK(c.potentials[k] <= c.potentials[k - 1]);
            CHECK(c.centers[k] == data[c.indices[k]]);
            for (std::size_t l = 0; l < k; ++l) CHECK(c.centers[k] != c.centers[l]);
        }
    }
}

TEST_CASE("a smaller radius never finds fewer centers on the bundled set") {
    const auto data = bundled_scaled();
    std::vector<std::size_t> counts;
    for (double r : {0.7, 0.5, 0.3}) {
        SubtractiveConfig config;
        config.radius = r;
        counts.push_back(subtractive_cluster(data, config, data.size()).size());
    }
    MESSAGE("centers for r_a 0.7 / 0.5 / 0.3: " << counts[0] << " / " << counts[1] << " / " << counts[2]);
    CHECK(counts[0] <= counts[1]);
    CHECK(counts[1] <= counts[2]);
}

TEST_CASE("errors and validation") {
    CHECK_THROWS_AS(subtractive_cluster(std::vector<Vector>{}, {}, 2), Error);
    CHECK_THROWS_AS(subtractive_cluster(std::vector<Vector>{{0.1}, {0.1, 0.2}}, {}, 2), Error);
    SubtractiveConfig bad;
    bad.reject_ratio = 0.6;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = {};
    bad.squash = 1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK(subtractive_cluster(std::vector<Vector>{{0.1}}, {}, 0).size() == 0);
}

TEST_CASE("ClusterSet JSON round trip") {
    const auto c = subtractive_cluster(bundled_scaled(), {}, 4);
    const auto j = Json(c);
    CHECK(j.contains("centers"));
    CHECK(j.contains("potentials"));
    CHECK(j.contains("config"));
    CHECK(Json::parse(j.dump()).get<ClusterSet>() == c);
}
