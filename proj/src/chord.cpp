#include "kaccess/chord.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "kaccess/error.hpp"
#include "kaccess/io.hpp"

namespace kaccess {

std::vector<ChordEdge> chord_edges(const ClusteringResult& clusters, const QualityReport& quality, double hi,
                                   double lo) {
    if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
        throw std::invalid_argument(fmt::format("chord thresholds need 0 <= lo <= hi <= 1, got lo={} hi={}", lo, hi));
    }
    const std::size_t k = quality.aInter.size();
    if (k != clusters.k) {
        throw InvariantError(fmt::format("quality report has {} clusters, clustering has {}", k, clusters.k));
    }
    std::vector<ChordEdge> edges;
    for (std::size_t i = 0; i < k; ++i) {
        if (quality.aInter[i].size() != k) throw InvariantError("aInter is not square");
        for (std::size_t j = 0; j < k; ++j) {
            const double v = quality.aInter[i][j];
            if (i == j || v <= lo) continue;
            edges.push_back({i, j, v, v >= hi ? ChordTier::Highlighted : ChordTier::Normal});
        }
    }
    return edges;
}

std::string chord_csv(const std::vector<ChordEdge>& edges) {
    std::ostringstream out;
    out << "srcCluster,dstCluster,aInter,tier\n";
    for (const auto& e : edges) {
        out << e.src << ',' << e.dst << ',' << io::format_real(e.value) << ','
            << (e.tier == ChordTier::Highlighted ? "highlighted" : "normal") << '\n';
    }
    return out.str();
}

std::vector<ChordEdge> read_chord_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "srcCluster,dstCluster,aInter,tier") {
        throw ParseError("chord CSV must start with header 'srcCluster,dstCluster,aInter,tier'");
    }
    std::vector<ChordEdge> edges;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = io::split(line);
        if (f.size() != 4) throw ParseError(fmt::format("chord CSV: bad row '{}'", line));
        ChordEdge e{io::parse_index(f[0]), io::parse_index(f[1]), io::parse_real(f[2]), ChordTier::Normal};
        if (f[3] == "highlighted") {
            e.tier = ChordTier::Highlighted;
        } else if (f[3] != "normal") {
            throw ParseError(fmt::format("chord CSV: unknown tier '{}'", f[3]));
        }
        edges.push_back(e);
    }
    return edges;
}

}  // namespace kaccess
