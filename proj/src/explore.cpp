#include "kaccess/explore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "kaccess/error.hpp"
#include "kaccess/io.hpp"
#include "kaccess/parallel.hpp"

namespace kaccess {

std::map<std::size_t, std::size_t> CoverageReport::histogram() const {
    std::map<std::size_t, std::size_t> h;
    for (auto c : perState) ++h[c];
    return h;
}

std::vector<std::size_t> effective_region(const AccessibilityMatrix& a, std::size_t source, double t0) {
    if (!(t0 > 0.0)) throw std::invalid_argument(fmt::format("t0 must be > 0, got {}", t0));
    if (source >= a.size()) throw std::out_of_range(fmt::format("source {} out of range", source));
    const double threshold = std::max(std::exp(-t0), a.floor());
    std::vector<std::size_t> region;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a(source, j) > threshold) region.push_back(j);
    }
    return region;
}

void require_valid(const InitialStateSet& set, std::size_t n) {
    std::vector<char> seen(n, 0);
    for (auto i : set.indices) {
        if (i >= n) throw InvariantError(fmt::format("initial state {} out of range for n={}", i, n));
        if (seen[i]) throw InvariantError(fmt::format("initial state {} listed twice in '{}'", i, set.label));
        seen[i] = 1;
    }
}

CoverageReport coverage_report(const AccessibilityMatrix& a, const InitialStateSet& set, double t0) {
    require_valid(set, a.size());
    std::vector<std::vector<std::size_t>> regions(set.indices.size());
    parallel_for(regions.size(), [&](std::size_t s) { regions[s] = effective_region(a, set.indices[s], t0); });

    CoverageReport report;
    report.t0 = t0;
    report.perState.assign(a.size(), 0);
    std::size_t total = 0;
    for (const auto& r : regions) {
        total += r.size();
        for (auto j : r) ++report.perState[j];
    }
    const auto covered = static_cast<std::size_t>(
        std::count_if(report.perState.begin(), report.perState.end(), [](std::size_t c) { return c > 0; }));
    report.coverage = static_cast<double>(covered) / static_cast<double>(a.size());
    report.overlapRatio =
        static_cast<double>(total - covered) / static_cast<double>(std::max<std::size_t>(1, total));
    return report;
}

RankedCoverage compare_initializations(const AccessibilityMatrix& a, const std::vector<InitialStateSet>& sets,
                                       double t0) {
    if (sets.empty()) throw std::invalid_argument("compare_initializations needs at least one set");
    RankedCoverage out;
    for (const auto& s : sets) {
        out.labels.push_back(s.label);
        out.reports.push_back(coverage_report(a, s, t0));
    }
    out.ranking.resize(sets.size());
    std::iota(out.ranking.begin(), out.ranking.end(), std::size_t{0});
    std::stable_sort(out.ranking.begin(), out.ranking.end(), [&](std::size_t x, std::size_t y) {
        const auto& rx = out.reports[x];
        const auto& ry = out.reports[y];
        if (rx.coverage != ry.coverage) return rx.coverage > ry.coverage;
        return rx.overlapRatio < ry.overlapRatio;
    });
    return out;
}

InitialStateSet random_initial_set(std::size_t n, std::size_t size, std::uint64_t seed, std::string label) {
    if (size > n) throw std::invalid_argument(fmt::format("cannot draw {} distinct states from {}", size, n));
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < size; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(size);
    return {std::move(pool), std::move(label)};
}

nlohmann::json to_json(const RankedCoverage& r) {
    nlohmann::json sets = nlohmann::json::array();
    for (std::size_t s = 0; s < r.reports.size(); ++s) {
        nlohmann::json hist = nlohmann::json::object();
        for (auto [count, states] : r.reports[s].histogram()) hist[std::to_string(count)] = states;
        sets.push_back({{"label", r.labels[s]},
                        {"t0", r.reports[s].t0},
                        {"coverage", r.reports[s].coverage},
                        {"overlapRatio", r.reports[s].overlapRatio},
                        {"histogram", std::move(hist)}});
    }
    return {{"sets", std::move(sets)}, {"ranking", r.ranking}};
}

std::string coverage_csv(const RankedCoverage& r) {
    std::ostringstream out;
    out << "rank,label,t0,coverage,overlapRatio\n";
    for (std::size_t pos = 0; pos < r.ranking.size(); ++pos) {
        const auto s = r.ranking[pos];
        out << pos << ',' << r.labels[s] << ',' << io::format_real(r.reports[s].t0) << ','
            << io::format_real(r.reports[s].coverage) << ',' << io::format_real(r.reports[s].overlapRatio)
            << '\n';
    }
    return out.str();
}

}  // namespace kaccess
