#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "kaccess/benchmark.hpp"
#include "kaccess/synthetic.hpp"
#include "kaccess/toy_rl.hpp"

using namespace kaccess;

namespace {

RecoveryTask chain_task() {
    // 0 -> 1 -> 2 -> 3 with goal {3}; each hop succeeds with probability 0.5
    AccessibilityMatrix a(6);
    for (std::size_t i = 0; i + 1 < 4; ++i) a(i, i + 1) = 0.5;
    a(0, 4) = a(4, 5) = 0.9;
    RecoveryTask task{a, {3}};
    task.episodeSteps = 12;
    return task;
}

}  // namespace

TEST_CASE("task validation") {
    RecoveryTask task{AccessibilityMatrix(3), {}};
    CHECK_THROWS(require_valid(task));
    task.goalSet = {3};
    CHECK_THROWS(require_valid(task));
    task.goalSet = {1};
    CHECK_NOTHROW(require_valid(task));
    CHECK_THROWS(run_training(task, {{}, "empty"}, {}));
    LearnerConfig bad;
    bad.discount = 1.0;
    CHECK_THROWS(run_training(task, {{0}, "x"}, bad));
}

TEST_CASE("starting inside the goal succeeds immediately") {
    const auto a = random_matrix(10, 2);
    RecoveryTask task{a, {1, 4, 7}};
    LearnerConfig cfg;
    cfg.episodes = 50;
    cfg.evalInterval = 5;
    const auto r = run_training(task, {{4, 7}, "inside"}, cfg, {4, 7});
    REQUIRE(r.curve.size() == 50);
    for (const auto& e : r.curve) CHECK(e.success);
    for (const auto& c : r.checkpoints) CHECK(c.successRate == 1.0);
    CHECK(episodes_to_threshold(r.checkpoints, 0.9) == 5u);
}

TEST_CASE("unreachable goal never succeeds") {
    RecoveryTask task{AccessibilityMatrix(6), {5}};
    LearnerConfig cfg;
    cfg.episodes = 40;
    cfg.evalInterval = 10;
    const auto r = run_training(task, {{0, 1, 2}, "far"}, cfg, {0, 1, 2});
    for (const auto& e : r.curve) {
        CHECK_FALSE(e.success);
        CHECK(e.ret == doctest::Approx(task.stepCost * task.episodeSteps));
    }
    for (const auto& c : r.checkpoints) CHECK(c.successRate == 0.0);
    CHECK_FALSE(episodes_to_threshold(r.checkpoints, 0.9).has_value());
    CHECK(evaluate_policy(task, r.policy, {{0, 1, 2}, "far"}, 20) == 0.0);
}

TEST_CASE("exact success probability on a chain") {
    auto task = chain_task();
    Policy p(task);
    // Greedy with zero values takes the most accessible action: 0 -> 4, a dead end.
    CHECK(success_probability(task, p, {0}) == 0.0);
    // Point state 0 at 1 instead.
    auto& v = p.values(0);
    const auto& acts = p.actions(0);
    for (std::size_t q = 0; q < acts.size(); ++q) v[q] = acts[q] == 1 ? 1.0 : -1.0;
    // Three hops at 0.5 within 12 steps: P(NegBin(3, 0.5) <= 12) = 1 - sum_{k<3} C(12,k)/2^12
    const double expected = 1.0 - (1.0 + 12.0 + 66.0) / 4096.0;
    CHECK(success_probability(task, p, {0}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(success_probability(task, p, {3}) == 1.0);

    const double mc = evaluate_policy(task, p, {{0}, "chain"}, 20000, 7);
    CHECK(mc == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("perfect policy on a fully reachable task") {
    AccessibilityMatrix a(8, 0.2);
    for (std::size_t i = 0; i < 8; ++i) a(i, 0) = 1.0;
    RecoveryTask task{a, {0}};
    LearnerConfig cfg;
    cfg.episodes = 100;
    const auto r = run_training(task, {{1, 2, 3, 4, 5, 6, 7}, "all"}, cfg);
    CHECK(evaluate_policy(task, r.policy, {{1, 2, 3, 4, 5, 6, 7}, "all"}, 50) == 1.0);
}

TEST_CASE("trained beats uniform random and is reproducible") {
    PlantedSpec spec = bench::recovery_spec(3);
    const auto d = generate_planted(spec);
    RecoveryTask task{d.matrix, bench::recovery_goal_set(d)};
    LearnerConfig cfg;
    cfg.episodes = 600;
    cfg.seed = 3;
    cfg.evalInterval = 50;
    const auto init = random_initial_set(spec.n, 5, 9);
    const auto r = run_training(task, init, cfg, init.indices);
    const auto again = run_training(task, init, cfg, init.indices);
    CHECK(curve_csv(r.curve) == curve_csv(again.curve));
    CHECK(r.checkpoints.size() == 12);

    InitialStateSet everyone{{}, "all"};
    for (std::size_t i = 0; i < spec.n; ++i) everyone.indices.push_back(i);
    Policy uniform(task, Policy::Mode::UniformRandom);
    const double trained = evaluate_policy(task, r.policy, everyone, 20, 1);
    const double random = evaluate_policy(task, uniform, everyone, 20, 1);
    CHECK(random <= trained);
    CHECK(success_probability(task, uniform, everyone.indices) <=
          success_probability(task, r.policy, everyone.indices));

    for (double rate : {trained, random}) {
        CHECK(rate >= 0.0);
        CHECK(rate <= 1.0);
    }

    // enlarging the goal set never lowers the success of a fixed policy
    auto bigger = task;
    for (std::size_t i = 0; i < spec.n; i += 7) bigger.goalSet.push_back(i);
    std::sort(bigger.goalSet.begin(), bigger.goalSet.end());
    bigger.goalSet.erase(std::unique(bigger.goalSet.begin(), bigger.goalSet.end()), bigger.goalSet.end());
    for (std::size_t s = 0; s < spec.n; ++s) {
        CHECK(success_probability(bigger, r.policy, {s}) >= success_probability(task, r.policy, {s}));
        CHECK(success_probability(bigger, uniform, {s}) >= success_probability(task, uniform, {s}) - 1e-12);
    }
}

TEST_CASE("curve CSV round-trip") {
    std::vector<EpisodeRecord> curve{{0, -0.75, false}, {1, 0.93, true}, {2, 1.0 / 3.0, true}};
    const auto text = curve_csv(curve);
    CHECK(text.rfind("episode,return,success\n", 0) == 0);
    std::istringstream in(text);
    const auto back = read_curve_csv(in);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back[i].episode == curve[i].episode);
        CHECK(back[i].ret == curve[i].ret);
        CHECK(back[i].success == curve[i].success);
    }
}

TEST_CASE("centroid initialisation reaches 90% in fewer episodes than random") {
    std::size_t fewer = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto cmp = bench::compare_recovery(seed);
        const auto c = cmp.centroids.episodesToThreshold.value_or(SIZE_MAX);
        const auto r = cmp.random.episodesToThreshold.value_or(SIZE_MAX);
        if (c < r) ++fewer;
    }
    MESSAGE("centroid arm faster on " << fewer << "/20 seed pairs");
    CHECK(fewer >= 16);
}
