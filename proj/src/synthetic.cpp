#include "kaccess/synthetic.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace kaccess {

PlantedData generate_planted(const PlantedSpec& spec) {
    if (spec.n == 0 || spec.kStar == 0 || spec.kStar > spec.n) {
        throw std::invalid_argument(fmt::format("planted spec needs 1 <= kStar <= n, got kStar={} n={}",
                                                spec.kStar, spec.n));
    }
    if (!(spec.escapeMax > 0.0 && spec.depthMax > 0.0 && spec.hopCost > 0.0)) {
        throw std::invalid_argument("planted cost parameters must be > 0");
    }
    if (!(spec.blockProb >= 0.0 && spec.blockProb <= 1.0)) {
        throw std::invalid_argument(fmt::format("blockProb must be in [0, 1], got {}", spec.blockProb));
    }

    const std::size_t n = spec.n;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    PlantedData out;
    out.labels.resize(n);
    out.escape.resize(n);
    out.depth.resize(n);
    out.blocked.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        out.labels[i] = i * spec.kStar / n;
        out.escape[i] = spec.escapeMax * unit(rng);
        out.depth[i] = spec.depthMax * unit(rng);
    }

    out.matrix = AccessibilityMatrix(n, spec.floor);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const bool cross = out.labels[i] != out.labels[j];
            if (cross && unit(rng) < spec.blockProb) {
                out.blocked[i * n + j] = 1;
                out.matrix(i, j) = access_from_time(TimeCost::unreachable(), spec.floor);
                continue;
            }
            const double t = out.escape[i] + out.depth[j] + (cross ? spec.hopCost : 0.0);
            out.matrix(i, j) = access_from_time(TimeCost::of(t), spec.floor);
        }
    }
    return out;
}

AccessibilityMatrix random_matrix(std::size_t n, std::uint64_t seed, double floor) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> entry(floor, 1.0);
    AccessibilityMatrix a(n, floor);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) a(i, j) = entry(rng);
        }
    }
    return a;
}

namespace {

struct Search {
    const AccessibilityMatrix& a;
    std::vector<std::size_t> centroids;
    std::vector<std::size_t> assignment;
    BruteForceOptimum best;
    bool found = false;

    void assign_from(std::size_t i, double runningMin) {
        if (i == a.size()) {
            if (!found || runningMin > best.g) {
                found = true;
                best = {runningMin, centroids, assignment};
            }
            return;
        }
        for (auto c : centroids) {
            const double m = std::min(runningMin, a(c, i));
            if (found && m <= best.g) continue;
            assignment[i] = c;
            assign_from(i + 1, m);
        }
    }

    void choose_from(std::size_t start, std::size_t k) {
        if (centroids.size() == k) {
            assign_from(0, 1.0);
            return;
        }
        for (std::size_t c = start; c + (k - centroids.size()) <= a.size(); ++c) {
            centroids.push_back(c);
            choose_from(c + 1, k);
            centroids.pop_back();
        }
    }
};

}  // namespace

BruteForceOptimum brute_force_best_g(const AccessibilityMatrix& a, std::size_t k) {
    if (a.size() > 10) {
        throw std::invalid_argument(fmt::format("brute force limited to n <= 10, got n={}", a.size()));
    }
    if (k < 1 || k > a.size()) throw std::invalid_argument(fmt::format("k must be in [1, {}]", a.size()));
    Search s{a, {}, std::vector<std::size_t>(a.size()), {}, false};
    s.choose_from(0, k);
    return s.best;
}

double adjusted_rand_index(std::span<const std::size_t> x, std::span<const std::size_t> y) {
    if (x.size() != y.size()) throw std::invalid_argument("label vectors differ in length");
    const double n = static_cast<double>(x.size());
    if (x.size() < 2) return 1.0;

    std::map<std::pair<std::size_t, std::size_t>, double> table;
    std::map<std::size_t, double> rows, cols;
    for (std::size_t i = 0; i < x.size(); ++i) {
        table[{x[i], y[i]}] += 1.0;
        rows[x[i]] += 1.0;
        cols[y[i]] += 1.0;
    }
    auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
    double index = 0.0, sumRows = 0.0, sumCols = 0.0;
    for (const auto& [_, m] : table) index += pairs(m);
    for (const auto& [_, m] : rows) sumRows += pairs(m);
    for (const auto& [_, m] : cols) sumCols += pairs(m);

    const double expected = sumRows * sumCols / pairs(n);
    const double maximum = 0.5 * (sumRows + sumCols);
    if (maximum == expected) return 1.0;  // both partitions trivial and identical in shape
    return (index - expected) / (maximum - expected);
}

}  // namespace kaccess
