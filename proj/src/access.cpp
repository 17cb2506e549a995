#include "kaccess/access.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "kaccess/error.hpp"

namespace kaccess {

TimeCost TimeCost::of(double seconds) {
    if (!(seconds >= 0.0) || std::isinf(seconds)) {
        throw std::invalid_argument(fmt::format("time cost must be finite and >= 0, got {}", seconds));
    }
    TimeCost t;
    t.seconds_ = seconds;
    return t;
}

double access_from_time(const TimeCost& t, double floor) {
    if (!t.reachable()) return floor;
    return std::max(std::exp(-t.seconds()), floor);
}

AccessibilityMatrix::AccessibilityMatrix(std::size_t n, double floor)
    : n_(n), floor_(floor), entries_(n * n, floor) {
    for (std::size_t i = 0; i < n; ++i) entries_[i * n + i] = 1.0;
}

AccessibilityMatrix::AccessibilityMatrix(std::size_t n, std::vector<double> entries, double floor)
    : n_(n), floor_(floor), entries_(std::move(entries)) {
    if (entries_.size() != n * n) {
        throw std::invalid_argument(
            fmt::format("matrix of size {} needs {} entries, got {}", n, n * n, entries_.size()));
    }
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& v : errors) {
        if (!out.empty()) out += "; ";
        out += v.message;
    }
    return out;
}

ValidationReport validate_matrix(const AccessibilityMatrix& a) {
    ValidationReport report;
    const std::size_t n = a.size();
    const double floor = a.floor();
    if (n == 0) {
        report.errors.push_back({Violation::Kind::Empty, 0, 0, 0.0, "matrix is empty"});
        return report;
    }
    if (!(floor > 0.0 && floor < 1.0)) {
        report.errors.push_back({Violation::Kind::BadFloor, 0, 0, floor,
                                 fmt::format("floor {} outside (0, 1)", floor)});
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = a(i, j);
            if (!std::isfinite(v)) {
                report.errors.push_back({Violation::Kind::NotFinite, i, j, v,
                                         fmt::format("non-finite entry at ({}, {})", i, j)});
            } else if (i == j) {
                if (v != 1.0) {
                    report.errors.push_back({Violation::Kind::DiagonalNotOne, i, i, v,
                                             fmt::format("diagonal != 1 at index {} (value {})", i, v)});
                }
            } else if (v < floor || v > 1.0) {
                report.errors.push_back({Violation::Kind::OutOfRange, i, j, v,
                                         fmt::format("entry out of range [{}, 1] at ({}, {}): {}", floor, i, j, v)});
            } else if (v == 1.0) {
                report.warnings.push_back({Violation::Kind::DuplicateState, i, j, v,
                                           fmt::format("zero-time transition {} -> {} (duplicate states?)", i, j)});
            }
        }
    }
    return report;
}

ValidationReport validate_states(std::span<const StateVector> states) {
    ValidationReport report;
    if (states.empty()) {
        report.errors.push_back({Violation::Kind::Empty, 0, 0, 0.0, "no states"});
        return report;
    }
    const std::size_t dim = states.front().values.size();
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& s = states[i];
        if (s.values.empty() || s.values.size() != dim) {
            report.errors.push_back({Violation::Kind::OutOfRange, i, 0, double(s.values.size()),
                                     fmt::format("state {} has dimension {}, expected {}", i, s.values.size(), dim)});
            continue;
        }
        for (std::size_t f = 0; f < dim; ++f) {
            if (!std::isfinite(s.values[f])) {
                report.errors.push_back({Violation::Kind::NotFinite, i, f, s.values[f],
                                         fmt::format("state {} feature {} is not finite", i, f)});
            }
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (states[j].values == s.values) {
                report.warnings.push_back({Violation::Kind::DuplicateState, j, i, 0.0,
                                           fmt::format("states {} and {} are identical", j, i)});
            }
        }
    }
    return report;
}

void require_valid(const AccessibilityMatrix& a) {
    auto report = validate_matrix(a);
    if (!report.ok()) {
        throw InvariantError("invalid accessibility matrix: " + report.summary());
    }
}

}  // namespace kaccess
