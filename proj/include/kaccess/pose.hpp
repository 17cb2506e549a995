#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "kaccess/access.hpp"

namespace kaccess {

struct EnvironmentSpec {
    std::size_t breakpoints = 64;
    /// Number of large-scale valleys in the landscape.
    std::size_t valleys = 3;
    /// Half-width of the per-breakpoint height jitter.
    double roughness = 0.15;
    double speed = 1.0;
    double barrierBudget = 0.6;
    double barrierPenalty = 2.0;
    std::uint64_t seed = 0;
};

/// Piecewise-linear potential U on [0, 1]. Its local minima are the stable
/// ("static") states; moving between them costs travel time plus a penalty
/// proportional to the climb above the start.
class SettlingEnvironment {
public:
    /// xs must start at 0, end at 1 and be strictly increasing.
    SettlingEnvironment(std::vector<double> xs, std::vector<double> us, double speed = 1.0,
                        double barrierBudget = 0.6, double barrierPenalty = 2.0);

    /// Random landscape with at least two local minima.
    static SettlingEnvironment random(const EnvironmentSpec& spec);

    double potential(double x) const;
    /// Position of the local minimum reached by sliding downhill from x.
    double descend(double x) const;
    /// Largest U on the closed segment between x0 and x1.
    double max_between(double x0, double x1) const;
    bool is_minimum(double x, double tol) const;
    std::vector<double> minima() const;

    double speed() const noexcept { return speed_; }
    double barrier_budget() const noexcept { return barrierBudget_; }
    double barrier_penalty() const noexcept { return barrierPenalty_; }
    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& us() const noexcept { return us_; }

private:
    std::size_t segment_of(double x) const;
    std::size_t descend_from_breakpoint(std::size_t i) const;

    std::vector<double> xs_;
    std::vector<double> us_;
    double speed_;
    double barrierBudget_;
    double barrierPenalty_;
};

struct ProbeProtocol {
    double timeCap = 3.0;
    double floor = kDefaultFloor;
    /// How close the settled state must be to the target to count as arrival.
    double closenessTol = 1e-3;
};

/// Draws `count` uniform start positions, lets each settle, and returns the
/// distinct minima (merged within closenessTol) sorted by position. Each state
/// is (x, U(x)) with ids 0..m-1.
std::vector<StateVector> sample_static_states(const SettlingEnvironment& env, std::size_t count,
                                              std::uint64_t seed, double closenessTol = 1e-3);

/// Time to drive from one minimum to another: travel plus barrier penalty,
/// Unreachable when the climb exceeds the budget or the time exceeds the cap.
TimeCost probe_transition(const SettlingEnvironment& env, const StateVector& from, const StateVector& to,
                          const ProbeProtocol& protocol);

struct ProbeRecord {
    std::size_t from = 0;
    std::size_t to = 0;
    TimeCost cost = TimeCost::unreachable();
};

/// All-pairs probing. When `log` is non-null it receives every off-diagonal
/// probe in row-major order.
AccessibilityMatrix estimate_matrix(const SettlingEnvironment& env, const std::vector<StateVector>& states,
                                    const ProbeProtocol& protocol, std::vector<ProbeRecord>* log = nullptr);

nlohmann::json environment_to_json(const SettlingEnvironment& env);
SettlingEnvironment environment_from_json(const nlohmann::json& j);

/// One JSON object per line: {"from":i,"to":j,"seconds":t} or "seconds":"unreachable".
std::string probe_log_jsonl(const std::vector<ProbeRecord>& log);

}  // namespace kaccess
