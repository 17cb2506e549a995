#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "kaccess/explore.hpp"
#include "kaccess/synthetic.hpp"
#include "kaccess/toy_rl.hpp"

namespace kaccess::bench {

/// Five planted groups of 20 samples with the generator defaults.
PlantedSpec coverage_spec(std::uint64_t seed);

/// Five planted groups of 12 samples with a 1.5 s group hop, so that every
/// state keeps a few cross-group targets among its 16 actions.
PlantedSpec recovery_spec(std::uint64_t seed);

/// Members of group 0 whose depth cost lies below the group median.
std::vector<std::size_t> recovery_goal_set(const PlantedData& data);

struct ArmOutcome {
    InitialStateSet initSet;
    TrainingResult training;
    /// First evaluated episode count with >= 90% success on the population.
    std::optional<std::size_t> episodesToThreshold;
};

struct RecoveryComparison {
    ArmOutcome centroids;
    ArmOutcome random;
};

struct RecoveryOptions {
    std::size_t episodes = 2000;
    std::size_t evalInterval = 10;
    double threshold = 0.9;
    std::size_t restarts = 5;
};

/// Trains from K-Access centroids (k = kStar) and from a random set of the
/// same size, with the same learner seed, on the recovery benchmark.
RecoveryComparison compare_recovery(std::uint64_t seed, const RecoveryOptions& options = {});

}  // namespace kaccess::bench
