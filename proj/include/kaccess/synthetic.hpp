#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kaccess/access.hpp"

namespace kaccess {

/// Planted-partition generator. Sample i belongs to group g(i), has escape
/// cost a_i ~ U(0, escapeMax) and depth cost b_i ~ U(0, depthMax); the
/// transition time i -> j is a_i + b_j, plus hopCost across groups, where a
/// cross-group pair is unreachable with probability blockProb.
struct PlantedSpec {
    std::size_t n = 100;
    std::size_t kStar = 2;
    double escapeMax = 0.2;
    double depthMax = 0.5;
    double hopCost = 3.0;
    double blockProb = 0.2;
    std::uint64_t seed = 0;
    double floor = kDefaultFloor;
};

struct PlantedData {
    AccessibilityMatrix matrix;
    /// Ground-truth group of every sample, in [0, kStar).
    std::vector<std::size_t> labels;
    std::vector<double> escape;
    std::vector<double> depth;
    /// Row-major n x n; true where a cross-group pair was made unreachable.
    std::vector<char> blocked;
};

/// Groups are contiguous and balanced: g(i) = i * kStar / n.
PlantedData generate_planted(const PlantedSpec& spec);

/// Unit diagonal, off-diagonal entries uniform in [floor, 1).
AccessibilityMatrix random_matrix(std::size_t n, std::uint64_t seed, double floor = kDefaultFloor);

struct BruteForceOptimum {
    double g = 0.0;
    std::vector<std::size_t> cIndex;
    std::vector<std::size_t> assignment;
};

/// Exhaustive maximum of the objective G = min_i A[a_i, i] over every choice
/// of k centroid samples and every assignment of samples to them. Branches
/// that cannot beat the incumbent are pruned, which does not change the
/// optimum. Only for n <= 10.
BruteForceOptimum brute_force_best_g(const AccessibilityMatrix& a, std::size_t k);

double adjusted_rand_index(std::span<const std::size_t> x, std::span<const std::size_t> y);

}  // namespace kaccess
