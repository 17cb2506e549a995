#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "kaccess/cluster.hpp"
#include "kaccess/explore.hpp"
#include "kaccess/synthetic.hpp"

using namespace kaccess;

TEST_CASE("effective region") {
    const auto a = random_matrix(30, 2);
    for (std::size_t s = 0; s < 30; ++s) {
        const auto r = effective_region(a, s, 0.01);
        CHECK(std::find(r.begin(), r.end(), s) != r.end());
    }
    AccessibilityMatrix f(4);
    f(0, 1) = 0.5;
    const auto all = effective_region(f, 0, 1e6);
    CHECK(all == std::vector<std::size_t>{0, 1});

    // strict inequality: t = 1 exactly is not inside t0 = 1
    AccessibilityMatrix e(2);
    e(0, 1) = std::exp(-1.0);
    CHECK(effective_region(e, 0, 1.0) == std::vector<std::size_t>{0});
    CHECK(effective_region(e, 0, 1.0 + 1e-9) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("planted region follows the generator formula") {
    PlantedSpec spec;
    spec.seed = 5;
    const auto d = generate_planted(spec);
    for (std::size_t src : {3u, 60u}) {
        const auto r = effective_region(d.matrix, src, 1.0);
        std::vector<std::size_t> expected;
        for (std::size_t j = 0; j < spec.n; ++j) {
            if (j == src || (d.labels[j] == d.labels[src] && d.escape[src] + d.depth[j] < 1.0)) {
                expected.push_back(j);
            }
        }
        CHECK(r == expected);
    }
}

TEST_CASE("coverage report") {
    const auto a = random_matrix(12, 7);
    InitialStateSet everyone{{}, "all"};
    for (std::size_t i = 0; i < 12; ++i) everyone.indices.push_back(i);
    CHECK(coverage_report(a, everyone, 0.5).coverage == 1.0);

    AccessibilityMatrix twin(5);
    for (std::size_t s : {0u, 1u}) {
        for (std::size_t j : {0u, 1u, 2u}) {
            if (s != j) twin(s, j) = 0.9;
        }
    }
    const auto rep = coverage_report(twin, {{0, 1}, "twins"}, 1.0);
    CHECK(rep.overlapRatio >= 0.5);
    CHECK(rep.coverage == doctest::Approx(0.6));
    CHECK(rep.perState == std::vector<std::size_t>{2, 2, 2, 0, 0});
    const auto h = rep.histogram();
    CHECK(h.at(0) == 2);
    CHECK(h.at(2) == 3);

    const auto none = coverage_report(a, {{}, "empty"}, 1.0);
    CHECK(none.coverage == 0.0);
    CHECK(none.overlapRatio == 0.0);
    CHECK_THROWS(coverage_report(a, {{12}, "bad"}, 1.0));
}

TEST_CASE("monotone in t0 and in the set") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_matrix(25, rng());
        auto set = random_initial_set(25, 4, rng());
        double prevCov = 0.0;
        std::size_t prevSize = 0;
        for (double t0 : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            const auto rep = coverage_report(a, set, t0);
            CHECK(rep.coverage >= prevCov);
            prevCov = rep.coverage;
            std::size_t total = 0;
            for (auto c : rep.perState) total += c;
            CHECK(total >= prevSize);
            prevSize = total;
        }
        const auto before = coverage_report(a, set, 1.0);
        std::size_t extra = 0;
        while (std::find(set.indices.begin(), set.indices.end(), extra) != set.indices.end()) ++extra;
        set.indices.push_back(extra);
        const auto after = coverage_report(a, set, 1.0);
        CHECK(after.coverage >= before.coverage);
        for (std::size_t j = 0; j < 25; ++j) CHECK(after.perState[j] >= before.perState[j]);
    }
}

TEST_CASE("region membership agrees with probe times") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> time(0.0, 6.0);
    const std::size_t n = 15;
    std::vector<double> t(n * n);
    AccessibilityMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            t[i * n + j] = time(rng);
            a(i, j) = access_from_time(TimeCost::of(t[i * n + j]));
        }
    }
    for (double t0 : {0.5, 1.7, 3.0}) {
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::size_t> expected;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == s || t[s * n + j] < t0) expected.push_back(j);
            }
            CHECK(effective_region(a, s, t0) == expected);
        }
    }
}

TEST_CASE("ranking") {
    const auto a = random_matrix(10, 1);
    InitialStateSet all{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, "all"};
    InitialStateSet lone{{3}, "lone"};
    auto ranked = compare_initializations(a, {lone, all}, 0.2);
    CHECK(ranked.ranking.front() == 1);

    InitialStateSet a1{{2, 5}, "same"}, a2{{2, 5}, "same"};
    ranked = compare_initializations(a, {a1, a2}, 1.0);
    CHECK(ranked.labels.size() == 2);
    CHECK(ranked.ranking == std::vector<std::size_t>{0, 1});
    CHECK(to_json(ranked)["ranking"].size() == 2);
    CHECK(coverage_csv(ranked).find("same") != std::string::npos);
}

TEST_CASE("random_initial_set") {
    const auto s = random_initial_set(20, 20, 3);
    auto sorted = s.indices;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < 20; ++i) CHECK(sorted[i] == i);
    CHECK(random_initial_set(20, 5, 3).indices == random_initial_set(20, 5, 3).indices);
    CHECK_THROWS(random_initial_set(4, 5, 0));
}

TEST_CASE("centroids cover planted data at least as well as random sets") {
    std::size_t better = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        PlantedSpec spec;
        spec.kStar = 4;
        spec.seed = seed;
        const auto d = generate_planted(spec);
        const auto r = k_access_best_of(d.matrix, 4, 5, seed);
        const auto ranked = compare_initializations(
            d.matrix, {{r.cIndex, "centroids"}, random_initial_set(spec.n, 4, seed + 1000)}, spec.hopCost);
        if (ranked.reports[0].coverage >= ranked.reports[1].coverage) ++better;
        if (ranked.reports[0].coverage > ranked.reports[1].coverage) CHECK(ranked.ranking[0] == 0);
    }
    CHECK(better >= 16);
}
