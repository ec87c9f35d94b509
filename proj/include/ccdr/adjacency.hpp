#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ccdr {

using Index = std::size_t;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct ParentEntry {
    Index parent;
    double value;

    bool operator==(const ParentEntry&) const = default;
};

/// Sparse weighted adjacency stored column-major: for every child node the
/// list of its parents, sorted by parent index. Entry (i, j) is the weight of
/// the edge i -> j. Zero weights are never stored.
class SparseAdjacency {
public:
    SparseAdjacency() = default;
    explicit SparseAdjacency(Index p) : columns_(p) {}

    /// Builds from a dense matrix; entries with |w| <= drop_below are skipped.
    static SparseAdjacency from_dense(const Matrix& weights, double drop_below = 0.0);

    Index size() const noexcept { return columns_.size(); }
    Index edge_count() const noexcept { return edges_; }

    double get(Index parent, Index child) const;
    bool contains(Index parent, Index child) const { return get(parent, child) != 0.0; }

    /// Sets the weight of parent -> child. A value of exactly 0 removes the edge.
    void set(Index parent, Index child, double value);

    std::span<const ParentEntry> parents(Index child) const { return columns_[child]; }

    Matrix to_dense() const;

    template <class F>
    void for_each_edge(F&& f) const
    {
        for (Index j = 0; j < columns_.size(); ++j)
            for (const auto& e : columns_[j])
                f(e.parent, j, e.value);
    }

    bool operator==(const SparseAdjacency&) const = default;

private:
    std::vector<std::vector<ParentEntry>> columns_;
    Index edges_ = 0;
};

} // namespace ccdr
