// Weight interpolation against a direct convex-combination oracle.
#include "doctest.h"

#include "msurg/weights.hpp"

#include <map>
#include <random>

using namespace msurg;

namespace {

// Direct dense convex combination over bone ids, no pruning.
std::map<int, double> blend(const std::vector<std::pair<const WeightSet*, double>>& terms) {
    std::map<int, double> out;
    for (const auto& [set, coeff] : terms)
        for (const WeightEntry& e : set->entries) out[e.bone] += coeff * e.weight;
    return out;
}

WeightSet random_weights(std::mt19937& rng, int bones, int entries) {
    std::uniform_int_distribution<int> bone(0, bones - 1);
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    std::map<int, double> acc;
    for (int i = 0; i < entries; ++i) acc[bone(rng)] += mass(rng);
    double sum = 0.0;
    for (auto& [b, w] : acc) sum += w;
    WeightSet out;
    for (auto& [b, w] : acc) out.entries.push_back({b, w / sum});
    return out;
}

}  // namespace

TEST_SUITE("weights") {

TEST_CASE("endpoint identity and symmetry") {
    const WeightSet w0{{{0, 0.7}, {1, 0.3}}};
    const WeightSet w1{{{1, 0.6}, {2, 0.4}}};
    CHECK(interpolate_weights(w0, w1, 0.0) == w0);
    CHECK(interpolate_weights(w0, w1, 1.0) == w1);

    const WeightSet mid = interpolate_weights(WeightSet::single(0), WeightSet::single(1), 0.5);
    REQUIRE(mid.entries.size() == 2);
    CHECK(mid.entries[0].weight == doctest::Approx(0.5));
    CHECK(mid.entries[1].weight == doctest::Approx(0.5));
}

TEST_CASE("hand-checked convex combination") {
    const WeightSet w0{{{0, 0.7}, {1, 0.3}}};
    const WeightSet w1{{{1, 0.6}, {2, 0.4}}};
    const WeightSet got = interpolate_weights(w0, w1, 0.25);
    REQUIRE(got.entries.size() == 3);
    CHECK(got.entries[0].bone == 0);
    CHECK(got.entries[0].weight == doctest::Approx(0.525));
    CHECK(got.entries[1].bone == 1);
    CHECK(got.entries[1].weight == doctest::Approx(0.375));
    CHECK(got.entries[2].bone == 2);
    CHECK(got.entries[2].weight == doctest::Approx(0.1));
}

TEST_CASE("interpolation matches the dense oracle when nothing is pruned") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> param(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const WeightSet w0 = random_weights(rng, 4, 3);  // union support <= 4, no pruning
        const WeightSet w1 = random_weights(rng, 4, 3);
        const double t = param(rng);
        const WeightSet got = interpolate_weights(w0, w1, t);
        const auto expect = blend({{&w0, 1.0 - t}, {&w1, t}});
        double sum = 0.0;
        for (const WeightEntry& e : got.entries) {
            const auto it = expect.find(e.bone);
            REQUIRE(it != expect.end());
            CHECK(e.weight == doctest::Approx(it->second).epsilon(1e-9));
            sum += e.weight;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("barycentric endpoints and uniform blend") {
    const WeightSet wa{{{0, 1.0}}}, wb{{{1, 1.0}}}, wc{{{2, 1.0}}};
    CHECK(interpolate_weights_barycentric(wa, wb, wc, 1, 0, 0) == wa);
    const WeightSet mid = interpolate_weights_barycentric(wa, wb, wc, 1.0 / 3, 1.0 / 3, 1.0 / 3);
    REQUIRE(mid.entries.size() == 3);
    for (const WeightEntry& e : mid.entries) CHECK(e.weight == doctest::Approx(1.0 / 3));
}

TEST_CASE("barycentric outputs normalize over random inputs") {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> mass(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const WeightSet wa = random_weights(rng, 8, 3);
        const WeightSet wb = random_weights(rng, 8, 3);
        const WeightSet wc = random_weights(rng, 8, 3);
        double u = mass(rng), v = mass(rng), w = mass(rng);
        const double s = u + v + w;
        if (s == 0.0) continue;
        u /= s, v /= s, w /= s;
        const WeightSet got = interpolate_weights_barycentric(wa, wb, wc, u, v, w);
        CHECK(got.sum() == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(got.entries.size() <= static_cast<std::size_t>(kMaxBoneInfluences));
        for (std::size_t k = 1; k < got.entries.size(); ++k)
            CHECK(got.entries[k - 1].bone < got.entries[k].bone);  // sorted by bone
        for (const WeightEntry& e : got.entries) CHECK(e.weight >= 0.0);
    }
}

TEST_CASE("pruning keeps the largest entries and renormalizes") {
    WeightSet wide{{{0, 0.3}, {1, 0.05}, {2, 0.25}, {3, 0.2}, {4, 0.2}}};
    const WeightSet pruned = prune_and_normalize(wide);
    REQUIRE(pruned.entries.size() == 4);  // bone 1 dropped
    for (const WeightEntry& e : pruned.entries) CHECK(e.bone != 1);
    CHECK(pruned.sum() == doctest::Approx(1.0));
    CHECK(pruned.entries[0].weight == doctest::Approx(0.3 / 0.95));
}

TEST_CASE("pruning breaks ties toward lower bone ids") {
    WeightSet tied{{{0, 0.2}, {1, 0.2}, {2, 0.2}, {3, 0.2}, {4, 0.2}}};
    const WeightSet pruned = prune_and_normalize(tied);
    REQUIRE(pruned.entries.size() == 4);
    CHECK(pruned.entries.back().bone == 3);  // bone 4 was dropped
}

}  // TEST_SUITE
