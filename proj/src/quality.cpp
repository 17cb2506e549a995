#include "kaccess/quality.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "kaccess/error.hpp"
#include "kaccess/io.hpp"
#include "kaccess/parallel.hpp"

namespace kaccess {

namespace {

std::vector<std::vector<std::size_t>> cluster_members(const AccessibilityMatrix& a, const ClusteringResult& r) {
    require_valid(r, a.size());
    const auto labels = r.labels();
    std::vector<std::vector<std::size_t>> members(r.k);
    for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
    return members;
}

}  // namespace

std::vector<double> intra_accessibility(const AccessibilityMatrix& a, const ClusteringResult& r) {
    const auto members = cluster_members(a, r);
    std::vector<double> intra(r.k);
    for (std::size_t p = 0; p < r.k; ++p) {
        double v = std::numeric_limits<double>::infinity();
        for (auto j : members[p]) v = std::min(v, a(r.cIndex[p], j));
        intra[p] = v;
    }
    return intra;
}

std::vector<std::vector<double>> inter_accessibility(const AccessibilityMatrix& a, const ClusteringResult& r) {
    const auto members = cluster_members(a, r);
    std::vector<std::vector<double>> inter(r.k, std::vector<double>(r.k, 1.0));
    for (std::size_t p = 0; p < r.k; ++p) {
        for (std::size_t q = 0; q < r.k; ++q) {
            if (p == q) continue;
            double sum = 0.0;
            for (auto l : members[p]) sum += a(l, r.cIndex[q]);
            inter[p][q] = sum / static_cast<double>(members[p].size());
        }
    }
    return inter;
}

double index_from_components(const QualityReport& q) {
    const double k = static_cast<double>(q.aIntra.size());
    double intraLog = 0.0;
    for (double v : q.aIntra) intraLog += std::log(v);
    double interLog = 0.0;
    for (const auto& row : q.aInter) {
        for (double v : row) interLog += std::log(v);
    }
    return intraLog / k - interLog / (k * k) - q.alpha * static_cast<double>(q.omega.size());
}

QualityReport quality_index(const AccessibilityMatrix& a, const ClusteringResult& r, double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument(fmt::format("alpha must be >= 0, got {}", alpha));
    QualityReport q;
    q.alpha = alpha;
    q.aIntra = intra_accessibility(a, r);
    q.aInter = inter_accessibility(a, r);

    std::vector<std::size_t> counts(a.size(), 0);
    for (auto c : r.assignment) ++counts[c];
    for (auto c : r.cIndex) {
        if (counts[c] == 1) q.omega.push_back(c);
    }
    q.index = index_from_components(q);
    return q;
}

SweepResult sweep_k(const AccessibilityMatrix& a, const SweepConfig& config) {
    if (config.kMin < 1 || config.kMin > config.kMax || config.kMax > a.size()) {
        throw std::invalid_argument(
            fmt::format("k range [{}, {}] must lie within [1, {}]", config.kMin, config.kMax, a.size()));
    }
    if (config.seedsPerK == 0) throw std::invalid_argument("seedsPerK must be >= 1");

    const std::size_t numK = config.kMax - config.kMin + 1;
    const std::size_t total = numK * config.seedsPerK;

    struct Slot {
        SweepRun run;
        std::optional<SweepRecord> record;
    };
    std::vector<Slot> slots(total);

    parallel_for(total, [&](std::size_t t) {
        const std::size_t k = config.kMin + t / config.seedsPerK;
        const std::uint64_t seed = config.baseSeed + t % config.seedsPerK;
        auto& slot = slots[t];
        slot.run.k = k;
        slot.run.seed = seed;
        try {
            auto result = k_access(a, {k, seed, config.maxIterations});
            auto report = quality_index(a, result, config.alpha);
            slot.run.index = report.index;
            slot.run.iterations = result.iterations;
            slot.run.numSingletons = report.omega.size();
            slot.record = SweepRecord{k, std::move(report), std::move(result)};
        } catch (const std::exception& e) {
            slot.run.error = e.what();
        }
    });

    SweepResult out;
    out.runs.reserve(total);
    for (std::size_t ki = 0; ki < numK; ++ki) {
        std::optional<SweepRecord> best;
        for (std::size_t s = 0; s < config.seedsPerK; ++s) {
            auto& slot = slots[ki * config.seedsPerK + s];
            out.runs.push_back(slot.run);
            if (slot.record && (!best || slot.record->report.index > best->report.index)) {
                best = std::move(slot.record);
            }
        }
        if (best) out.best.push_back(std::move(*best));
    }
    double bestIndex = -std::numeric_limits<double>::infinity();
    for (const auto& rec : out.best) {
        if (!out.bestK || rec.report.index > bestIndex) {
            bestIndex = rec.report.index;
            out.bestK = rec.k;
        }
    }
    return out;
}

std::string sweep_runs_csv(const SweepResult& s) {
    std::ostringstream out;
    out << "k,seed,index,iterations,numSingletons\n";
    for (const auto& r : s.runs) {
        out << r.k << ',' << r.seed << ',';
        if (r.error.empty()) {
            out << io::format_real(r.index) << ',' << r.iterations << ',' << r.numSingletons;
        } else {
            out << "nan,,";
        }
        out << '\n';
    }
    return out.str();
}

void to_json(nlohmann::json& j, const QualityReport& q) {
    j = nlohmann::json{{"aIntra", q.aIntra}, {"aInter", q.aInter}, {"omega", q.omega},
                       {"alpha", q.alpha},   {"index", q.index}};
}

void from_json(const nlohmann::json& j, QualityReport& q) {
    j.at("aIntra").get_to(q.aIntra);
    j.at("aInter").get_to(q.aInter);
    j.at("omega").get_to(q.omega);
    j.at("alpha").get_to(q.alpha);
    j.at("index").get_to(q.index);
}

}  // namespace kaccess
