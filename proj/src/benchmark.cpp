#include "kaccess/benchmark.hpp"

#include <algorithm>
#include <numeric>

#include "kaccess/cluster.hpp"

namespace kaccess::bench {

PlantedSpec coverage_spec(std::uint64_t seed) {
    PlantedSpec spec;
    spec.n = 100;
    spec.kStar = 5;
    spec.seed = seed;
    return spec;
}

PlantedSpec recovery_spec(std::uint64_t seed) {
    PlantedSpec spec;
    spec.n = 60;
    spec.kStar = 5;
    spec.hopCost = 1.5;
    spec.seed = seed;
    return spec;
}

std::vector<std::size_t> recovery_goal_set(const PlantedData& data) {
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
        if (data.labels[i] == 0) group.push_back(i);
    }
    std::vector<double> depths;
    for (auto i : group) depths.push_back(data.depth[i]);
    std::sort(depths.begin(), depths.end());
    const double median = depths[depths.size() / 2];

    std::vector<std::size_t> goal;
    for (auto i : group) {
        if (data.depth[i] < median) goal.push_back(i);
    }
    if (goal.empty()) goal.push_back(group.front());
    return goal;
}

RecoveryComparison compare_recovery(std::uint64_t seed, const RecoveryOptions& options) {
    const auto spec = recovery_spec(seed);
    const auto data = generate_planted(spec);
    RecoveryTask task;
    task.matrix = data.matrix;
    task.goalSet = recovery_goal_set(data);

    std::vector<std::size_t> population(spec.n);
    std::iota(population.begin(), population.end(), std::size_t{0});

    LearnerConfig learner;
    learner.episodes = options.episodes;
    learner.evalInterval = options.evalInterval;
    learner.seed = seed;

    auto run_arm = [&](InitialStateSet set) {
        auto training = run_training(task, set, learner, population);
        ArmOutcome arm{std::move(set), std::move(training), std::nullopt};
        arm.episodesToThreshold = episodes_to_threshold(arm.training.checkpoints, options.threshold);
        return arm;
    };

    const auto clusters = k_access_best_of(data.matrix, spec.kStar, options.restarts, seed);
    RecoveryComparison out{run_arm({clusters.cIndex, "centroids"}),
                           run_arm(random_initial_set(spec.n, spec.kStar, seed ^ 0x9e3779b97f4a7c15ULL))};
    return out;
}

}  // namespace kaccess::bench
