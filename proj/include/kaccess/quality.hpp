#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "kaccess/access.hpp"
#include "kaccess/cluster.hpp"

namespace kaccess {

struct QualityReport {
    std::vector<double> aIntra;
    /// k x k, row-major; aInter[i][i] == 1.
    std::vector<std::vector<double>> aInter;
    /// Centroids (sample indices) of clusters with exactly one member.
    std::vector<std::size_t> omega;
    double alpha = 1.0;
    double index = 0.0;

    bool operator==(const QualityReport&) const = default;
};

/// aIntra[i] = min over members j of cluster i of A[c_i, j].
std::vector<double> intra_accessibility(const AccessibilityMatrix& a, const ClusteringResult& r);

/// aInter[i][j] = mean over members l of cluster i of A[l, c_j] for i != j,
/// and 1 on the diagonal.
std::vector<std::vector<double>> inter_accessibility(const AccessibilityMatrix& a, const ClusteringResult& r);

/// I = mean(log aIntra) - mean(log aInter) - alpha * |omega|, where the aInter
/// mean runs over all k^2 entries including the unit diagonal.
QualityReport quality_index(const AccessibilityMatrix& a, const ClusteringResult& r, double alpha = 1.0);

/// Recomputes the index from the stored components.
double index_from_components(const QualityReport& q);

struct SweepRun {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    double index = 0.0;
    std::size_t iterations = 0;
    std::size_t numSingletons = 0;
    /// Non-empty when clustering failed for this (k, seed).
    std::string error;
};

struct SweepRecord {
    std::size_t k = 0;
    QualityReport report;
    ClusteringResult result;
};

struct SweepResult {
    /// Every attempted (k, seed) pair, ordered by k then seed.
    std::vector<SweepRun> runs;
    /// Best run per k (ascending k); a k whose every seed failed is absent.
    std::vector<SweepRecord> best;
    /// k with the largest index (smallest k on ties); empty when all runs failed.
    std::optional<std::size_t> bestK;
};

struct SweepConfig {
    std::size_t kMin = 1;
    std::size_t kMax = 1;
    double alpha = 1.0;
    std::size_t seedsPerK = 5;
    std::uint64_t baseSeed = 0;
    std::size_t maxIterations = 1000;
};

/// Runs K-Access for every k in [kMin, kMax] with seeds baseSeed ..
/// baseSeed+seedsPerK-1 and keeps the highest-index run per k. Work is spread
/// over threads; the result does not depend on scheduling.
SweepResult sweep_k(const AccessibilityMatrix& a, const SweepConfig& config);

std::string sweep_runs_csv(const SweepResult& s);

void to_json(nlohmann::json& j, const QualityReport& q);
void from_json(const nlohmann::json& j, QualityReport& q);

}  // namespace kaccess
