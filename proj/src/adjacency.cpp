#include <ccdr/adjacency.hpp>
#include <ccdr/errors.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace ccdr {

namespace {

template <class Column>
auto find_parent(Column& column, Index parent)
{
    return std::lower_bound(column.begin(), column.end(), parent,
                            [](const ParentEntry& e, Index idx) { return e.parent < idx; });
}

} // namespace

SparseAdjacency SparseAdjacency::from_dense(const Matrix& weights, double drop_below)
{
    if (weights.rows() != weights.cols())
        throw DimensionMismatch("adjacency matrix must be square");
    const auto p = static_cast<Index>(weights.rows());
    SparseAdjacency adj(p);
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < p; ++i) {
            const double w = weights(i, j);
            if (w != 0.0 && std::abs(w) > drop_below)
                adj.set(i, j, w);
        }
    }
    return adj;
}

double SparseAdjacency::get(Index parent, Index child) const
{
    const auto& column = columns_.at(child);
    auto it = find_parent(column, parent);
    return (it != column.end() && it->parent == parent) ? it->value : 0.0;
}

void SparseAdjacency::set(Index parent, Index child, double value)
{
    if (parent >= columns_.size() || child >= columns_.size())
        throw DimensionMismatch("edge index out of range");
    if (parent == child && value != 0.0)
        throw std::invalid_argument("self-loop on node " + std::to_string(child));

    auto& column = columns_[child];
    auto it = find_parent(column, parent);
    const bool present = it != column.end() && it->parent == parent;
    if (value == 0.0) {
        if (present) {
            column.erase(it);
            --edges_;
        }
    } else if (present) {
        it->value = value;
    } else {
        column.insert(it, ParentEntry{parent, value});
        ++edges_;
    }
}

Matrix SparseAdjacency::to_dense() const
{
    const auto p = static_cast<Eigen::Index>(columns_.size());
    Matrix dense = Matrix::Zero(p, p);
    for_each_edge([&](Index i, Index j, double w) {
        dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
    });
    return dense;
}

} // namespace ccdr
