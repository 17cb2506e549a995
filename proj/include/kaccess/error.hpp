#pragma once

#include <stdexcept>
#include <string>

namespace kaccess {

// Error categories map one-to-one onto CLI exit codes (see cli.hpp).

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a cluster loses all of its members, which only happens when
/// two samples have off-diagonal accessibility 1 (duplicate states).
class DegenerateClusterError : public InvariantError {
public:
    DegenerateClusterError(std::string what, std::size_t centroid, std::size_t other)
        : InvariantError(std::move(what)), centroid_(centroid), other_(other) {}

    std::size_t centroid() const noexcept { return centroid_; }
    std::size_t other() const noexcept { return other_; }

private:
    std::size_t centroid_;
    std::size_t other_;
};

class MissingInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kaccess
