#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccdr {

/// Input shapes disagree (rows/columns/node counts).
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A matrix that must be symmetric positive definite is not.
class NotPositiveDefinite : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A data column has zero variance and cannot be normalized.
class DegenerateColumn : public std::domain_error {
public:
    DegenerateColumn(const std::string& what, std::size_t column)
        : std::domain_error(what), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// A directed graph that must be acyclic contains a cycle.
/// `cycle()` lists the nodes of one cycle in edge order (0-based).
class CycleError : public std::runtime_error {
public:
    CycleError(const std::string& what, std::vector<std::size_t> cycle)
        : std::runtime_error(what), cycle_(std::move(cycle)) {}

    const std::vector<std::size_t>& cycle() const noexcept { return cycle_; }

private:
    std::vector<std::size_t> cycle_;
};

} // namespace ccdr
