#pragma once

#include <ccdr/adjacency.hpp>

#include <cstdint>
#include <set>
#include <vector>

namespace ccdr {

/// Unweighted directed graph over nodes 0..p-1, stored as outgoing-neighbor
/// sets. Self-loops are rejected; cycles are allowed (acyclicity is a
/// property checked by the operations below, not by the type).
class DirectedGraph {
public:
    explicit DirectedGraph(Index p = 0) : out_(p) {}
    static DirectedGraph from_adjacency(const SparseAdjacency& adj);

    Index size() const noexcept { return out_.size(); }
    void add_edge(Index from, Index to);
    void remove_edge(Index from, Index to);
    bool has_edge(Index from, Index to) const { return out_.at(from).count(to) != 0; }
    const std::set<Index>& children(Index node) const { return out_.at(node); }
    Index edge_count() const;

private:
    std::vector<std::set<Index>> out_;
};

/// Ordering in which every edge points forward. Throws CycleError naming one
/// cycle when the graph is not acyclic.
std::vector<Index> topological_sort(const DirectedGraph& g);

bool is_acyclic(const DirectedGraph& g);
bool is_acyclic(const SparseAdjacency& adj);

/// True iff adding `from -> to` to the acyclic graph `g` creates a directed
/// cycle, i.e. iff `to` already reaches `from`. Fresh depth-first search.
bool induces_cycle(const DirectedGraph& g, Index from, Index to);

/// Reachability queries over a SparseAdjacency, walking parent lists.
/// Keeps its scratch buffers between calls so repeated queries from the
/// solver do not allocate.
class AncestorSearch {
public:
    explicit AncestorSearch(Index p = 0) : stamp_(p, 0) {}

    /// True iff `ancestor` has a directed path to `node` in `adj`.
    bool reaches(const SparseAdjacency& adj, Index ancestor, Index node);

    /// Same contract as induces_cycle: adding from -> to closes a cycle.
    bool induces_cycle(const SparseAdjacency& adj, Index from, Index to)
    {
        return reaches(adj, to, from);
    }

private:
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<Index> stack_;
};

/// A bijection of {0..p-1}. `at(i)` is pi(i); permuting a matrix A gives
/// (P_pi A)(i, j) = A(pi(i), pi(j)).
class Permutation {
public:
    explicit Permutation(std::vector<Index> pi);
    static Permutation identity(Index p);
    /// From 1-based notation, e.g. {3, 2, 1}.
    static Permutation from_one_based(const std::vector<Index>& pi);

    Index size() const noexcept { return pi_.size(); }
    Index at(Index i) const { return pi_.at(i); }
    const std::vector<Index>& values() const noexcept { return pi_; }
    Permutation inverse() const;

    /// Symmetric row/column permutation P_pi A.
    Matrix apply(const Matrix& a) const;
    Vector apply(const Vector& v) const;

    bool operator==(const Permutation&) const = default;

private:
    std::vector<Index> pi_;
};

} // namespace ccdr
