#include "kaccess/toy_rl.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "kaccess/error.hpp"
#include "kaccess/io.hpp"

namespace kaccess {

namespace {

std::vector<char> goal_mask(const RecoveryTask& task) {
    std::vector<char> goal(task.matrix.size(), 0);
    for (auto g : task.goalSet) goal[g] = 1;
    return goal;
}

std::mt19937_64 rollout_stream(std::uint64_t seed, std::size_t state, std::size_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(state), static_cast<std::uint32_t>(trial)};
    return std::mt19937_64(seq);
}

}  // namespace

Policy::Policy(const RecoveryTask& task, Mode mode) : mode_(mode) {
    const auto& a = task.matrix;
    const std::size_t n = a.size();
    actions_.resize(n);
    values_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> targets;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && a(i, j) > a.floor()) targets.push_back(j);
        }
        std::stable_sort(targets.begin(), targets.end(),
                         [&](std::size_t x, std::size_t y) { return a(i, x) > a(i, y); });
        if (targets.size() > task.actionsPerState) targets.resize(task.actionsPerState);
        actions_[i] = std::move(targets);
        values_[i].assign(actions_[i].size(), 0.0);
    }
}

std::optional<std::size_t> Policy::greedy_action(std::size_t state) const {
    const auto& q = values_[state];
    if (q.empty()) return std::nullopt;
    return static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
}

void require_valid(const RecoveryTask& task) {
    require_valid(task.matrix);
    if (task.goalSet.empty()) throw InvariantError("goal set is empty");
    for (auto g : task.goalSet) {
        if (g >= task.matrix.size()) throw InvariantError(fmt::format("goal state {} out of range", g));
    }
    if (task.episodeSteps == 0) throw InvariantError("episodeSteps must be >= 1");
}

TrainingResult run_training(const RecoveryTask& task, const InitialStateSet& initSet, const LearnerConfig& config,
                            const std::vector<std::size_t>& evalSet) {
    require_valid(task);
    if (initSet.indices.empty()) throw std::invalid_argument("initial state set is empty");
    require_valid(initSet, task.matrix.size());
    if (!(config.discount > 0.0 && config.discount < 1.0)) {
        throw std::invalid_argument(fmt::format("discount must be in (0, 1), got {}", config.discount));
    }
    if (!(config.explorationRate >= 0.0 && config.explorationRate <= 1.0)) {
        throw std::invalid_argument("explorationRate must be in [0, 1]");
    }

    const auto& a = task.matrix;
    const auto goal = goal_mask(task);
    TrainingResult out{{}, {}, Policy(task)};
    Policy& policy = out.policy;

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pickStart(0, initSet.indices.size() - 1);

    out.curve.reserve(config.episodes);
    for (std::size_t e = 0; e < config.episodes; ++e) {
        std::size_t s = initSet.indices[pickStart(rng)];
        EpisodeRecord rec{e, 0.0, goal[s] != 0};
        for (std::size_t step = 0; step < task.episodeSteps && !rec.success; ++step) {
            const auto& acts = policy.actions(s);
            if (acts.empty()) {
                rec.ret += task.stepCost;
                continue;
            }
            std::size_t act;
            if (unit(rng) < config.explorationRate) {
                act = std::uniform_int_distribution<std::size_t>(0, acts.size() - 1)(rng);
            } else {
                act = *policy.greedy_action(s);
            }
            const std::size_t target = acts[act];
            const std::size_t next = unit(rng) < a(s, target) ? target : s;
            const bool terminal = goal[next] != 0;

            double reward = task.stepCost + (terminal ? task.goalReward : 0.0);
            double bootstrap = 0.0;
            if (!terminal && !policy.values(next).empty()) {
                const auto& qn = policy.values(next);
                bootstrap = config.discount * *std::max_element(qn.begin(), qn.end());
            }
            double& q = policy.values(s)[act];
            q += config.learningRate * (reward + bootstrap - q);

            rec.ret += reward;
            rec.success = terminal;
            s = next;
        }
        out.curve.push_back(rec);

        if (config.evalInterval && (e + 1) % config.evalInterval == 0 && !evalSet.empty()) {
            out.checkpoints.push_back({e + 1, success_probability(task, policy, evalSet)});
        }
    }
    return out;
}

double evaluate_policy(const RecoveryTask& task, const Policy& policy, const InitialStateSet& testSet,
                       std::size_t trials, std::uint64_t seed) {
    require_valid(task);
    require_valid(testSet, task.matrix.size());
    if (testSet.indices.empty() || trials == 0) return 0.0;

    const auto& a = task.matrix;
    const auto goal = goal_mask(task);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t successes = 0;
    for (auto start : testSet.indices) {
        for (std::size_t trial = 0; trial < trials; ++trial) {
            auto rng = rollout_stream(seed, start, trial);
            std::size_t s = start;
            bool success = goal[s] != 0;
            for (std::size_t step = 0; step < task.episodeSteps && !success; ++step) {
                const auto& acts = policy.actions(s);
                if (acts.empty()) break;
                std::size_t act;
                if (policy.mode() == Policy::Mode::UniformRandom) {
                    act = std::uniform_int_distribution<std::size_t>(0, acts.size() - 1)(rng);
                } else {
                    act = *policy.greedy_action(s);
                }
                if (unit(rng) < a(s, acts[act])) s = acts[act];
                success = goal[s] != 0;
            }
            successes += success ? 1 : 0;
        }
    }
    return static_cast<double>(successes) / static_cast<double>(testSet.indices.size() * trials);
}

double success_probability(const RecoveryTask& task, const Policy& policy, const std::vector<std::size_t>& states) {
    if (states.empty()) return 0.0;
    const auto& a = task.matrix;
    const std::size_t n = a.size();
    const auto goal = goal_mask(task);

    std::vector<double> prev(n), cur(n);
    for (std::size_t i = 0; i < n; ++i) prev[i] = goal[i] ? 1.0 : 0.0;
    for (std::size_t step = 0; step < task.episodeSteps; ++step) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& acts = policy.actions(i);
            if (goal[i] || acts.empty()) {
                cur[i] = prev[i];
                continue;
            }
            auto value_of = [&](std::size_t target) {
                const double p = a(i, target);
                return p * prev[target] + (1.0 - p) * prev[i];
            };
            if (policy.mode() == Policy::Mode::UniformRandom) {
                double sum = 0.0;
                for (auto t : acts) sum += value_of(t);
                cur[i] = sum / static_cast<double>(acts.size());
            } else {
                cur[i] = value_of(acts[*policy.greedy_action(i)]);
            }
        }
        std::swap(prev, cur);
    }
    double total = 0.0;
    for (auto s : states) total += prev.at(s);
    return total / static_cast<double>(states.size());
}

std::optional<std::size_t> episodes_to_threshold(const std::vector<Checkpoint>& checkpoints, double threshold) {
    for (const auto& c : checkpoints) {
        if (c.successRate >= threshold) return c.episodes;
    }
    return std::nullopt;
}

std::string curve_csv(const std::vector<EpisodeRecord>& curve) {
    std::ostringstream out;
    out << "episode,return,success\n";
    for (const auto& r : curve) out << r.episode << ',' << io::format_real(r.ret) << ',' << (r.success ? 1 : 0) << '\n';
    return out.str();
}

std::vector<EpisodeRecord> read_curve_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "episode,return,success") {
        throw ParseError("curve CSV must start with header 'episode,return,success'");
    }
    std::vector<EpisodeRecord> curve;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = io::split(line);
        if (f.size() != 3) throw ParseError(fmt::format("curve CSV: bad row '{}'", line));
        curve.push_back({io::parse_index(f[0]), io::parse_real(f[1]), io::parse_index(f[2]) != 0});
    }
    return curve;
}

}  // namespace kaccess
