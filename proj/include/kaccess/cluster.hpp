#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "kaccess/access.hpp"

namespace kaccess {

struct KAccessConfig {
    std::size_t k = 1;
    std::uint64_t seed = 0;
    std::size_t maxIterations = 1000;
};

struct ClusteringResult {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    /// Centroid sample indices c_0..c_{k-1}.
    std::vector<std::size_t> cIndex;
    /// assignment[i] is the centroid (a sample index, member of cIndex) of sample i.
    std::vector<std::size_t> assignment;
    /// Objective G after the initial assignment and after every later half-step.
    std::vector<double> gTrace;
    std::size_t iterations = 0;

    double objective() const { return gTrace.empty() ? 0.0 : gTrace.back(); }
    /// Position of each sample's centroid within cIndex.
    std::vector<std::size_t> labels() const;

    bool operator==(const ClusteringResult&) const = default;
};

/// Farthest-first seeding: the first centroid is drawn uniformly from [0, n)
/// with `seed`, each next one minimises the summed two-way accessibility to
/// the centroids chosen so far. Ties resolve to the lowest index.
std::vector<std::size_t> init_centroids(const AccessibilityMatrix& a, std::size_t k, std::uint64_t seed);

/// assignment[i] = argmax over c in cIndex of A[c, i]; ties go to the centroid
/// listed first.
std::vector<std::size_t> assign(const AccessibilityMatrix& a, std::span<const std::size_t> cIndex);

/// Moves each centroid to the member with the largest minimum accessibility to
/// the rest of its cluster (lowest index on ties).
std::vector<std::size_t> update_centroids(const AccessibilityMatrix& a, std::span<const std::size_t> cIndex,
                                          std::span<const std::size_t> assignment);

/// min over i of A[assignment[i], i].
double objective_g(const AccessibilityMatrix& a, std::span<const std::size_t> cIndex,
                   std::span<const std::size_t> assignment);

/// Runs K-Access with farthest-first seeding. Throws NonConvergenceError at
/// the iteration cap and DegenerateClusterError when a cluster empties.
ClusteringResult k_access(const AccessibilityMatrix& a, const KAccessConfig& config);

/// Same iteration, started from the given centroids instead of seeding.
ClusteringResult k_access_from(const AccessibilityMatrix& a, std::vector<std::size_t> centroids,
                               std::size_t maxIterations = 1000);

/// Runs seeds baseSeed .. baseSeed+restarts-1 and keeps the largest final G
/// (earliest seed on ties).
ClusteringResult k_access_best_of(const AccessibilityMatrix& a, std::size_t k, std::size_t restarts,
                                  std::uint64_t baseSeed = 0, std::size_t maxIterations = 1000);

/// Throws InvariantError when `r` is not a structurally valid clustering of an
/// n-sample population (distinct centroids, assignments into cIndex, no empty
/// clusters).
void require_valid(const ClusteringResult& r, std::size_t n);

void to_json(nlohmann::json& j, const ClusteringResult& r);
void from_json(const nlohmann::json& j, ClusteringResult& r);

}  // namespace kaccess
