#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kaccess {

inline constexpr double kDefaultFloor = 1e-8;

struct StateVector {
    std::size_t id = 0;
    std::vector<double> values;
};

/// Minimal transition time in seconds, or Unreachable.
class TimeCost {
public:
    static TimeCost unreachable() { return TimeCost{}; }
    static TimeCost of(double seconds);

    bool reachable() const noexcept { return seconds_.has_value(); }
    /// Only valid when reachable().
    double seconds() const { return seconds_.value(); }

    bool operator==(const TimeCost&) const = default;

private:
    TimeCost() = default;
    std::optional<double> seconds_;
};

/// exp(-t) clamped below at `floor`; Unreachable maps to `floor`.
double access_from_time(const TimeCost& t, double floor = kDefaultFloor);

/// Dense row-major n x n directed accessibility matrix. entries(i, j) is the
/// accessibility from sample i to sample j. No symmetry is assumed.
///
/// The container itself does not enforce the value invariants so that
/// malformed data can be inspected with validate_matrix(); every matrix
/// produced by this library passes validation.
class AccessibilityMatrix {
public:
    AccessibilityMatrix() = default;
    /// Identity-diagonal matrix with every off-diagonal entry at `floor`.
    explicit AccessibilityMatrix(std::size_t n, double floor = kDefaultFloor);
    AccessibilityMatrix(std::size_t n, std::vector<double> entries, double floor = kDefaultFloor);

    std::size_t size() const noexcept { return n_; }
    double floor() const noexcept { return floor_; }

    double operator()(std::size_t from, std::size_t to) const { return entries_[from * n_ + to]; }
    double& operator()(std::size_t from, std::size_t to) { return entries_[from * n_ + to]; }

    std::span<const double> row(std::size_t from) const {
        return {entries_.data() + from * n_, n_};
    }
    std::span<const double> entries() const noexcept { return entries_; }

    bool operator==(const AccessibilityMatrix&) const = default;

private:
    std::size_t n_ = 0;
    double floor_ = kDefaultFloor;
    std::vector<double> entries_;
};

struct Violation {
    enum class Kind { NotFinite, OutOfRange, DiagonalNotOne, BadFloor, Empty, DuplicateState };
    Kind kind;
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> errors;
    /// Off-diagonal entries equal to 1 (zero transition time) suggest duplicate
    /// states. They are allowed, but clustering may fail on them.
    std::vector<Violation> warnings;

    bool ok() const noexcept { return errors.empty(); }
    std::string summary() const;
};

ValidationReport validate_matrix(const AccessibilityMatrix& a);

/// Checks feature finiteness, equal dimensions and exact duplicates.
ValidationReport validate_states(std::span<const StateVector> states);

/// Throws InvariantError listing the violations when validation fails.
void require_valid(const AccessibilityMatrix& a);

}  // namespace kaccess
