#include "kaccess/pose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "kaccess/error.hpp"
#include "kaccess/io.hpp"
#include "kaccess/parallel.hpp"

namespace kaccess {

SettlingEnvironment::SettlingEnvironment(std::vector<double> xs, std::vector<double> us, double speed,
                                         double barrierBudget, double barrierPenalty)
    : xs_(std::move(xs)), us_(std::move(us)), speed_(speed), barrierBudget_(barrierBudget),
      barrierPenalty_(barrierPenalty) {
    if (xs_.size() < 2 || xs_.size() != us_.size()) {
        throw std::invalid_argument("potential needs >= 2 breakpoints with one height each");
    }
    if (xs_.front() != 0.0 || xs_.back() != 1.0) {
        throw std::invalid_argument("potential breakpoints must span [0, 1]");
    }
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(us_[i])) throw std::invalid_argument("potential heights must be finite");
        if (i && !(xs_[i] > xs_[i - 1])) throw std::invalid_argument("breakpoints must be strictly increasing");
    }
    if (!(speed_ > 0.0) || !(barrierBudget_ >= 0.0) || !(barrierPenalty_ >= 0.0)) {
        throw std::invalid_argument("speed must be > 0 and barrier parameters >= 0");
    }
}

SettlingEnvironment SettlingEnvironment::random(const EnvironmentSpec& spec) {
    if (spec.breakpoints < 3) throw std::invalid_argument("random potential needs >= 3 breakpoints");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double phase = 2.0 * std::numbers::pi * unit(rng);

    for (;;) {
        std::vector<double> xs(spec.breakpoints);
        xs.front() = 0.0;
        xs.back() = 1.0;
        for (std::size_t i = 1; i + 1 < xs.size(); ++i) xs[i] = unit(rng);
        std::sort(xs.begin() + 1, xs.end() - 1);
        if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) continue;

        std::vector<double> us(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double wave =
                std::sin(2.0 * std::numbers::pi * static_cast<double>(spec.valleys) * xs[i] + phase);
            us[i] = 0.5 + 0.3 * wave + spec.roughness * (2.0 * unit(rng) - 1.0);
        }
        SettlingEnvironment env(std::move(xs), std::move(us), spec.speed, spec.barrierBudget,
                                spec.barrierPenalty);
        if (env.minima().size() >= 2) return env;
    }
}

std::size_t SettlingEnvironment::segment_of(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - xs_.begin() - 1, 0));
    return std::min(i, xs_.size() - 2);
}

double SettlingEnvironment::potential(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    const std::size_t i = segment_of(x);
    const double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return us_[i] + w * (us_[i + 1] - us_[i]);
}

std::size_t SettlingEnvironment::descend_from_breakpoint(std::size_t i) const {
    const std::size_t last = xs_.size() - 1;
    for (;;) {
        std::size_t next = i;
        if (i > 0 && us_[i - 1] < us_[next]) next = i - 1;
        if (i < last && us_[i + 1] < us_[next]) next = i + 1;
        if (next == i) return i;
        i = next;
    }
}

double SettlingEnvironment::descend(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    const std::size_t i = segment_of(x);
    if (x == xs_[i]) return xs_[descend_from_breakpoint(i)];
    if (x == xs_[i + 1]) return xs_[descend_from_breakpoint(i + 1)];
    return xs_[descend_from_breakpoint(us_[i] <= us_[i + 1] ? i : i + 1)];
}

double SettlingEnvironment::max_between(double x0, double x1) const {
    const double lo = std::clamp(std::min(x0, x1), 0.0, 1.0);
    const double hi = std::clamp(std::max(x0, x1), 0.0, 1.0);
    double m = std::max(potential(lo), potential(hi));
    auto first = std::upper_bound(xs_.begin(), xs_.end(), lo);
    for (auto it = first; it != xs_.end() && *it < hi; ++it) {
        m = std::max(m, us_[static_cast<std::size_t>(it - xs_.begin())]);
    }
    return m;
}

bool SettlingEnvironment::is_minimum(double x, double tol) const { return std::abs(descend(x) - x) <= tol; }

std::vector<double> SettlingEnvironment::minima() const {
    std::vector<double> out;
    const std::size_t last = xs_.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
        const bool left = i == 0 || us_[i] <= us_[i - 1];
        const bool right = i == last || us_[i] <= us_[i + 1];
        if (left && right) out.push_back(xs_[i]);
    }
    return out;
}

std::vector<StateVector> sample_static_states(const SettlingEnvironment& env, std::size_t count,
                                              std::uint64_t seed, double closenessTol) {
    if (count == 0) throw std::invalid_argument("count must be >= 1");
    if (env.minima().empty()) throw std::invalid_argument("environment has no local minimum");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> settled(count);
    for (auto& x : settled) x = env.descend(unit(rng));
    std::sort(settled.begin(), settled.end());

    std::vector<StateVector> states;
    for (double x : settled) {
        if (!states.empty() && x - states.back().values[0] <= closenessTol) continue;
        states.push_back({states.size(), {x, env.potential(x)}});
    }
    return states;
}

TimeCost probe_transition(const SettlingEnvironment& env, const StateVector& from, const StateVector& to,
                          const ProbeProtocol& protocol) {
    const double x0 = from.values.at(0);
    const double x1 = to.values.at(0);
    if (!env.is_minimum(x0, protocol.closenessTol) || !env.is_minimum(x1, protocol.closenessTol)) {
        throw std::invalid_argument(fmt::format("probe endpoints must be stable states ({} -> {})", x0, x1));
    }
    const double distance = std::abs(x1 - x0);
    if (distance <= protocol.closenessTol) return TimeCost::of(0.0);

    const double barrier = env.max_between(x0, x1) - env.potential(x0);
    if (barrier > env.barrier_budget()) return TimeCost::unreachable();
    const double seconds = distance / env.speed() + env.barrier_penalty() * barrier;
    if (seconds > protocol.timeCap) return TimeCost::unreachable();
    return TimeCost::of(seconds);
}

AccessibilityMatrix estimate_matrix(const SettlingEnvironment& env, const std::vector<StateVector>& states,
                                    const ProbeProtocol& protocol, std::vector<ProbeRecord>* log) {
    if (!(protocol.timeCap > 0.0)) throw std::invalid_argument("timeCap must be > 0");
    const std::size_t n = states.size();
    AccessibilityMatrix a(n, protocol.floor);
    std::vector<ProbeRecord> records(log ? n * n : 0);

    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto cost = probe_transition(env, states[i], states[j], protocol);
            a(i, j) = access_from_time(cost, protocol.floor);
            if (log) records[i * n + j] = {i, j, cost};
        }
    });

    if (log) {
        log->clear();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) log->push_back(records[i * n + j]);
            }
        }
    }
    return a;
}

std::string probe_log_jsonl(const std::vector<ProbeRecord>& log) {
    std::ostringstream out;
    for (const auto& r : log) {
        out << "{\"from\":" << r.from << ",\"to\":" << r.to << ",\"seconds\":";
        if (r.cost.reachable()) {
            out << io::format_real(r.cost.seconds());
        } else {
            out << "\"unreachable\"";
        }
        out << "}\n";
    }
    return out.str();
}

nlohmann::json environment_to_json(const SettlingEnvironment& env) {
    return {{"xs", env.xs()},
            {"us", env.us()},
            {"speed", env.speed()},
            {"barrierBudget", env.barrier_budget()},
            {"barrierPenalty", env.barrier_penalty()}};
}

SettlingEnvironment environment_from_json(const nlohmann::json& j) {
    try {
        return SettlingEnvironment(j.at("xs").get<std::vector<double>>(), j.at("us").get<std::vector<double>>(),
                                   j.at("speed").get<double>(), j.at("barrierBudget").get<double>(),
                                   j.at("barrierPenalty").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("environment JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InvariantError(std::string("environment JSON: ") + e.what());
    }
}

}  // namespace kaccess
