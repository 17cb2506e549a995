#include "kaccess/cluster.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "kaccess/error.hpp"

namespace kaccess {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Maps sample index -> position in cIndex (kNone for non-centroids).
std::vector<std::size_t> centroid_positions(std::size_t n, std::span<const std::size_t> cIndex) {
    std::vector<std::size_t> pos(n, kNone);
    for (std::size_t p = 0; p < cIndex.size(); ++p) {
        if (cIndex[p] >= n) {
            throw std::invalid_argument(fmt::format("centroid index {} out of range for n={}", cIndex[p], n));
        }
        if (pos[cIndex[p]] != kNone) {
            throw std::invalid_argument(fmt::format("centroid {} listed twice", cIndex[p]));
        }
        pos[cIndex[p]] = p;
    }
    return pos;
}

std::vector<std::vector<std::size_t>> members_by_cluster(std::span<const std::size_t> cIndex,
                                                         std::span<const std::size_t> assignment,
                                                         const std::vector<std::size_t>& pos) {
    std::vector<std::vector<std::size_t>> members(cIndex.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const std::size_t c = assignment[i];
        if (c >= pos.size() || pos[c] == kNone) {
            throw InvariantError(fmt::format("sample {} assigned to {}, which is not a centroid", i, c));
        }
        members[pos[c]].push_back(i);
    }
    return members;
}

void require_nonempty(const AccessibilityMatrix& a, std::span<const std::size_t> cIndex,
                      std::span<const std::size_t> assignment) {
    std::vector<char> used(a.size(), 0);
    for (auto c : assignment) used[c] = 1;
    for (auto c : cIndex) {
        if (used[c]) continue;
        const std::size_t thief = assignment[c];
        throw DegenerateClusterError(
            fmt::format("cluster of centroid {} is empty: sample {} went to centroid {} with accessibility {} "
                        "(duplicate states {} and {})",
                        c, c, thief, a(thief, c), thief, c),
            c, thief);
    }
}

}  // namespace

std::vector<std::size_t> ClusteringResult::labels() const {
    std::vector<std::size_t> out(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        auto it = std::find(cIndex.begin(), cIndex.end(), assignment[i]);
        out[i] = static_cast<std::size_t>(it - cIndex.begin());
    }
    return out;
}

std::vector<std::size_t> init_centroids(const AccessibilityMatrix& a, std::size_t k, std::uint64_t seed) {
    const std::size_t n = a.size();
    if (k < 1 || k > n) {
        throw std::invalid_argument(fmt::format("k must be in [1, {}], got {}", n, k));
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);

    std::vector<std::size_t> centroids;
    centroids.reserve(k);
    centroids.push_back(pick(rng));

    std::vector<double> combined(n, 0.0);
    std::vector<char> chosen(n, 0);
    chosen[centroids[0]] = 1;
    while (centroids.size() < k) {
        const std::size_t last = centroids.back();
        for (std::size_t j = 0; j < n; ++j) combined[j] += a(last, j) + a(j, last);

        std::size_t best = kNone;
        for (std::size_t j = 0; j < n; ++j) {
            if (chosen[j]) continue;
            if (best == kNone || combined[j] < combined[best]) best = j;
        }
        chosen[best] = 1;
        centroids.push_back(best);
    }
    return centroids;
}

std::vector<std::size_t> assign(const AccessibilityMatrix& a, std::span<const std::size_t> cIndex) {
    if (cIndex.empty()) throw std::invalid_argument("assign needs at least one centroid");
    centroid_positions(a.size(), cIndex);

    std::vector<std::size_t> assignment(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::size_t best = cIndex[0];
        double bestAccess = a(best, i);
        for (std::size_t p = 1; p < cIndex.size(); ++p) {
            const double v = a(cIndex[p], i);
            if (v > bestAccess) {
                bestAccess = v;
                best = cIndex[p];
            }
        }
        assignment[i] = best;
    }
    return assignment;
}

std::vector<std::size_t> update_centroids(const AccessibilityMatrix& a, std::span<const std::size_t> cIndex,
                                          std::span<const std::size_t> assignment) {
    const auto pos = centroid_positions(a.size(), cIndex);
    const auto members = members_by_cluster(cIndex, assignment, pos);

    std::vector<std::size_t> next(cIndex.size());
    for (std::size_t p = 0; p < cIndex.size(); ++p) {
        const auto& m = members[p];
        if (m.empty()) throw InvariantError(fmt::format("cluster of centroid {} is empty", cIndex[p]));

        // Members are in ascending order, so strict '>' keeps the lowest index on ties.
        std::size_t best = m[0];
        double bestNeighborhood = -1.0;
        for (auto j : m) {
            double neighborhood = std::numeric_limits<double>::infinity();
            for (auto l : m) neighborhood = std::min(neighborhood, a(j, l));
            if (neighborhood > bestNeighborhood) {
                bestNeighborhood = neighborhood;
                best = j;
            }
        }
        next[p] = best;
    }
    return next;
}

double objective_g(const AccessibilityMatrix& a, std::span<const std::size_t> cIndex,
                   std::span<const std::size_t> assignment) {
    (void)cIndex;
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < assignment.size(); ++i) g = std::min(g, a(assignment[i], i));
    return g;
}

ClusteringResult k_access_from(const AccessibilityMatrix& a, std::vector<std::size_t> centroids,
                               std::size_t maxIterations) {
    const std::size_t n = a.size();
    if (centroids.empty() || centroids.size() > n) {
        throw std::invalid_argument(fmt::format("k must be in [1, {}], got {}", n, centroids.size()));
    }

    ClusteringResult r;
    r.k = centroids.size();
    r.cIndex = std::move(centroids);
    r.assignment = assign(a, r.cIndex);
    require_nonempty(a, r.cIndex, r.assignment);
    r.gTrace.push_back(objective_g(a, r.cIndex, r.assignment));

    std::vector<std::size_t> relabeled(n);
    for (;;) {
        if (r.iterations >= maxIterations) {
            throw NonConvergenceError(fmt::format(
                "K-Access did not converge within {} iterations (k={}, n={})", maxIterations, r.k, n));
        }
        const auto previous = r.assignment;

        auto next = update_centroids(a, r.cIndex, r.assignment);
        const auto pos = centroid_positions(n, r.cIndex);
        for (std::size_t i = 0; i < n; ++i) relabeled[i] = next[pos[r.assignment[i]]];
        r.gTrace.push_back(objective_g(a, next, relabeled));
        r.cIndex = std::move(next);

        r.assignment = assign(a, r.cIndex);
        require_nonempty(a, r.cIndex, r.assignment);
        r.gTrace.push_back(objective_g(a, r.cIndex, r.assignment));
        ++r.iterations;

        assert(r.gTrace[r.gTrace.size() - 2] >= r.gTrace[r.gTrace.size() - 3]);
        assert(r.gTrace.back() >= r.gTrace[r.gTrace.size() - 2]);

        if (r.assignment == previous) break;
    }
    return r;
}

ClusteringResult k_access(const AccessibilityMatrix& a, const KAccessConfig& config) {
    auto r = k_access_from(a, init_centroids(a, config.k, config.seed), config.maxIterations);
    r.seed = config.seed;
    return r;
}

ClusteringResult k_access_best_of(const AccessibilityMatrix& a, std::size_t k, std::size_t restarts,
                                  std::uint64_t baseSeed, std::size_t maxIterations) {
    if (restarts == 0) throw std::invalid_argument("restarts must be >= 1");
    ClusteringResult best;
    for (std::size_t r = 0; r < restarts; ++r) {
        auto run = k_access(a, {k, baseSeed + r, maxIterations});
        if (r == 0 || run.objective() > best.objective()) best = std::move(run);
    }
    return best;
}

void require_valid(const ClusteringResult& r, std::size_t n) {
    if (r.cIndex.empty() || r.cIndex.size() != r.k) {
        throw InvariantError(fmt::format("clustering has {} centroids but k={}", r.cIndex.size(), r.k));
    }
    if (r.assignment.size() != n) {
        throw InvariantError(fmt::format("clustering covers {} samples, expected {}", r.assignment.size(), n));
    }
    std::vector<std::size_t> pos;
    try {
        pos = centroid_positions(n, r.cIndex);
    } catch (const std::invalid_argument& e) {
        throw InvariantError(e.what());
    }
    auto members = members_by_cluster(r.cIndex, r.assignment, pos);
    for (std::size_t p = 0; p < members.size(); ++p) {
        if (members[p].empty()) throw InvariantError(fmt::format("cluster of centroid {} is empty", r.cIndex[p]));
    }
}

void to_json(nlohmann::json& j, const ClusteringResult& r) {
    j = nlohmann::json{{"k", r.k},
                       {"seed", r.seed},
                       {"cIndex", r.cIndex},
                       {"assignment", r.assignment},
                       {"gTrace", r.gTrace},
                       {"iterations", r.iterations}};
}

void from_json(const nlohmann::json& j, ClusteringResult& r) {
    j.at("k").get_to(r.k);
    j.at("seed").get_to(r.seed);
    j.at("cIndex").get_to(r.cIndex);
    j.at("assignment").get_to(r.assignment);
    j.at("gTrace").get_to(r.gTrace);
    j.at("iterations").get_to(r.iterations);
}

}  // namespace kaccess
