#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "kaccess/cluster.hpp"
#include "kaccess/quality.hpp"

namespace kaccess {

enum class ChordTier { Normal, Highlighted };

struct ChordEdge {
    std::size_t src = 0;
    std::size_t dst = 0;
    double value = 0.0;
    ChordTier tier = ChordTier::Normal;

    bool operator==(const ChordEdge&) const = default;
};

/// Off-diagonal inter-cluster accessibilities as chord-diagram edges: values
/// >= hi are highlighted, values <= lo are dropped, the rest are normal.
std::vector<ChordEdge> chord_edges(const ClusteringResult& clusters, const QualityReport& quality,
                                   double hi = 0.15, double lo = 0.05);

/// `srcCluster,dstCluster,aInter,tier` with tier `highlighted` or `normal`.
std::string chord_csv(const std::vector<ChordEdge>& edges);
std::vector<ChordEdge> read_chord_csv(std::istream& in);

}  // namespace kaccess
