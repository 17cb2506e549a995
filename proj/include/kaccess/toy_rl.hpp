#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kaccess/access.hpp"
#include "kaccess/explore.hpp"

namespace kaccess {

/// Episodic recovery problem on the sampled-state graph. From state i the
/// agent commands a transition to one of its most accessible targets j; the
/// command succeeds with probability A[i, j] and otherwise leaves the state
/// unchanged. An episode succeeds when it reaches the goal set within
/// episodeSteps commands.
struct RecoveryTask {
    AccessibilityMatrix matrix;
    std::vector<std::size_t> goalSet;
    std::size_t episodeSteps = 75;
    double stepCost = -0.01;
    double goalReward = 1.0;
    /// Actions per state: the top-m targets by accessibility, floor entries excluded.
    std::size_t actionsPerState = 16;
};

struct LearnerConfig {
    std::size_t episodes = 1000;
    double explorationRate = 0.1;
    double learningRate = 0.2;
    double discount = 0.987;
    std::uint64_t seed = 0;
    /// Evaluate the greedy policy every this many episodes (0 disables).
    std::size_t evalInterval = 0;
};

/// Tabular action values over the task's per-state action lists.
class Policy {
public:
    enum class Mode { Greedy, UniformRandom };

    explicit Policy(const RecoveryTask& task, Mode mode = Mode::Greedy);

    Mode mode() const noexcept { return mode_; }
    const std::vector<std::size_t>& actions(std::size_t state) const { return actions_[state]; }
    std::vector<double>& values(std::size_t state) { return values_[state]; }
    const std::vector<double>& values(std::size_t state) const { return values_[state]; }

    /// Highest-valued action (lowest position on ties); nullopt if the state has none.
    std::optional<std::size_t> greedy_action(std::size_t state) const;

private:
    Mode mode_;
    std::vector<std::vector<std::size_t>> actions_;
    std::vector<std::vector<double>> values_;
};

struct EpisodeRecord {
    std::size_t episode = 0;
    double ret = 0.0;
    bool success = false;
};

struct Checkpoint {
    /// Episodes completed when the evaluation ran.
    std::size_t episodes = 0;
    double successRate = 0.0;
};

struct TrainingResult {
    std::vector<EpisodeRecord> curve;
    std::vector<Checkpoint> checkpoints;
    Policy policy;
};

void require_valid(const RecoveryTask& task);

/// Epsilon-greedy Q-learning with episodes starting uniformly from initSet.
/// When config.evalInterval > 0 the greedy policy's exact success probability
/// over evalSet is recorded every evalInterval episodes.
TrainingResult run_training(const RecoveryTask& task, const InitialStateSet& initSet, const LearnerConfig& config,
                            const std::vector<std::size_t>& evalSet = {});

/// Monte Carlo success rate of `policy` over `trials` rollouts from each test
/// state. Every rollout draws from its own stream keyed by (seed, state, trial).
double evaluate_policy(const RecoveryTask& task, const Policy& policy, const InitialStateSet& testSet,
                       std::size_t trials, std::uint64_t seed = 0);

/// Exact probability, averaged over `states`, that the greedy policy reaches
/// the goal within episodeSteps commands.
double success_probability(const RecoveryTask& task, const Policy& policy, const std::vector<std::size_t>& states);

/// First checkpoint whose success rate reaches `threshold`.
std::optional<std::size_t> episodes_to_threshold(const std::vector<Checkpoint>& checkpoints, double threshold);

std::string curve_csv(const std::vector<EpisodeRecord>& curve);
std::vector<EpisodeRecord> read_curve_csv(std::istream& in);

}  // namespace kaccess
