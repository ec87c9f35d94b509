#include <ccdr/errors.hpp>
#include <ccdr/graph.hpp>

#include <algorithm>
#include <numeric>
#include <string>

namespace ccdr {

DirectedGraph DirectedGraph::from_adjacency(const SparseAdjacency& adj)
{
    DirectedGraph g(adj.size());
    adj.for_each_edge([&](Index i, Index j, double) { g.add_edge(i, j); });
    return g;
}

void DirectedGraph::add_edge(Index from, Index to)
{
    if (from >= out_.size() || to >= out_.size())
        throw DimensionMismatch("edge index out of range");
    if (from == to)
        throw std::invalid_argument("self-loop on node " + std::to_string(from));
    out_[from].insert(to);
}

void DirectedGraph::remove_edge(Index from, Index to)
{
    out_.at(from).erase(to);
}

Index DirectedGraph::edge_count() const
{
    Index total = 0;
    for (const auto& s : out_)
        total += s.size();
    return total;
}

std::vector<Index> topological_sort(const DirectedGraph& g)
{
    // Iterative DFS with white/grey/black coloring; a grey->grey edge is a
    // back edge and the grey stack holds the cycle.
    enum class Color : unsigned char { white, grey, black };
    const Index p = g.size();
    std::vector<Color> color(p, Color::white);
    std::vector<Index> finished;
    finished.reserve(p);

    struct Frame {
        Index node;
        std::set<Index>::const_iterator next;
    };
    std::vector<Frame> stack;

    for (Index root = 0; root < p; ++root) {
        if (color[root] != Color::white)
            continue;
        color[root] = Color::grey;
        stack.push_back({root, g.children(root).begin()});
        while (!stack.empty()) {
            auto& top = stack.back();
            if (top.next == g.children(top.node).end()) {
                color[top.node] = Color::black;
                finished.push_back(top.node);
                stack.pop_back();
                continue;
            }
            const Index child = *top.next++;
            if (color[child] == Color::grey) {
                std::vector<Index> cycle;
                auto it = std::find_if(stack.begin(), stack.end(),
                                       [&](const Frame& f) { return f.node == child; });
                for (; it != stack.end(); ++it)
                    cycle.push_back(it->node);
                std::string msg = "graph contains a cycle:";
                for (Index v : cycle)
                    msg += " " + std::to_string(v + 1);
                throw CycleError(msg, std::move(cycle));
            }
            if (color[child] == Color::white) {
                color[child] = Color::grey;
                stack.push_back({child, g.children(child).begin()});
            }
        }
    }
    std::reverse(finished.begin(), finished.end());
    return finished;
}

bool is_acyclic(const DirectedGraph& g)
{
    try {
        topological_sort(g);
        return true;
    } catch (const CycleError&) {
        return false;
    }
}

bool is_acyclic(const SparseAdjacency& adj)
{
    return is_acyclic(DirectedGraph::from_adjacency(adj));
}

bool induces_cycle(const DirectedGraph& g, Index from, Index to)
{
    if (from == to)
        throw std::invalid_argument("induces_cycle: endpoints must differ");
    if (from >= g.size() || to >= g.size())
        throw DimensionMismatch("node index out of range");

    std::vector<bool> seen(g.size(), false);
    std::vector<Index> stack{to};
    seen[to] = true;
    while (!stack.empty()) {
        const Index v = stack.back();
        stack.pop_back();
        if (v == from)
            return true;
        for (Index c : g.children(v)) {
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
        }
    }
    return false;
}

bool AncestorSearch::reaches(const SparseAdjacency& adj, Index ancestor, Index node)
{
    if (ancestor == node)
        return true;
    if (stamp_.size() != adj.size()) {
        stamp_.assign(adj.size(), 0);
        epoch_ = 0;
    }
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    // Walk upwards from `node` through parent lists looking for `ancestor`.
    stack_.clear();
    stack_.push_back(node);
    stamp_[node] = epoch_;
    while (!stack_.empty()) {
        const Index v = stack_.back();
        stack_.pop_back();
        for (const auto& e : adj.parents(v)) {
            if (e.parent == ancestor)
                return true;
            if (stamp_[e.parent] != epoch_) {
                stamp_[e.parent] = epoch_;
                stack_.push_back(e.parent);
            }
        }
    }
    return false;
}

Permutation::Permutation(std::vector<Index> pi) : pi_(std::move(pi))
{
    std::vector<bool> seen(pi_.size(), false);
    for (Index v : pi_) {
        if (v >= pi_.size() || seen[v])
            throw std::invalid_argument("permutation is not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(Index p)
{
    std::vector<Index> pi(p);
    std::iota(pi.begin(), pi.end(), Index{0});
    return Permutation(std::move(pi));
}

Permutation Permutation::from_one_based(const std::vector<Index>& pi)
{
    std::vector<Index> zero_based;
    zero_based.reserve(pi.size());
    for (Index v : pi) {
        if (v == 0)
            throw std::invalid_argument("one-based permutation contains 0");
        zero_based.push_back(v - 1);
    }
    return Permutation(std::move(zero_based));
}

Permutation Permutation::inverse() const
{
    std::vector<Index> inv(pi_.size());
    for (Index i = 0; i < pi_.size(); ++i)
        inv[pi_[i]] = i;
    return Permutation(std::move(inv));
}

Matrix Permutation::apply(const Matrix& a) const
{
    const auto p = static_cast<Eigen::Index>(pi_.size());
    if (a.rows() != p || a.cols() != p)
        throw DimensionMismatch("permutation size does not match matrix");
    Matrix out(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            out(i, j) = a(static_cast<Eigen::Index>(pi_[i]), static_cast<Eigen::Index>(pi_[j]));
    return out;
}

Vector Permutation::apply(const Vector& v) const
{
    const auto p = static_cast<Eigen::Index>(pi_.size());
    if (v.size() != p)
        throw DimensionMismatch("permutation size does not match vector");
    Vector out(p);
    for (Eigen::Index i = 0; i < p; ++i)
        out(i) = v(static_cast<Eigen::Index>(pi_[i]));
    return out;
}

} // namespace ccdr
