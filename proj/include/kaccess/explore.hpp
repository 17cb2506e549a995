#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "kaccess/access.hpp"

namespace kaccess {

inline constexpr double kDefaultHorizon = 3.0;

struct InitialStateSet {
    std::vector<std::size_t> indices;
    std::string label;
};

struct CoverageReport {
    double t0 = kDefaultHorizon;
    /// Fraction of the population inside at least one region.
    double coverage = 0.0;
    /// (sum of region sizes - size of their union) / max(1, sum of region sizes).
    double overlapRatio = 0.0;
    /// perState[j] = number of regions containing sample j.
    std::vector<std::size_t> perState;

    /// cover count -> number of samples with that count.
    std::map<std::size_t, std::size_t> histogram() const;
};

/// Samples reachable from `source` in less than t0 seconds, i.e. with
/// A[source, j] > exp(-t0). Floor-valued entries never qualify.
std::vector<std::size_t> effective_region(const AccessibilityMatrix& a, std::size_t source, double t0);

CoverageReport coverage_report(const AccessibilityMatrix& a, const InitialStateSet& set, double t0);

struct RankedCoverage {
    std::vector<std::string> labels;
    std::vector<CoverageReport> reports;
    /// Positions into labels/reports: coverage descending, then overlap
    /// ascending, then input order.
    std::vector<std::size_t> ranking;
};

RankedCoverage compare_initializations(const AccessibilityMatrix& a, const std::vector<InitialStateSet>& sets,
                                       double t0);

/// `size` distinct indices drawn uniformly from [0, n), in draw order.
InitialStateSet random_initial_set(std::size_t n, std::size_t size, std::uint64_t seed,
                                   std::string label = "random");

void require_valid(const InitialStateSet& set, std::size_t n);

nlohmann::json to_json(const RankedCoverage& r);
std::string coverage_csv(const RankedCoverage& r);

}  // namespace kaccess
