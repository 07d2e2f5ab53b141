// graph.hpp - immutable simple undirected graph, node sets and E(S, T)
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairpart/errors.hpp"

namespace fairpart {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Compressed adjacency. Neighbor lists are sorted and duplicate free; the
// graph never changes after construction.
class Graph {
public:
    Graph() = default;

    // Builds a simple graph on nodes 0..n-1. Repeated edges (in either
    // orientation) are collapsed and counted in *duplicates when given.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                            std::size_t* duplicates = nullptr) {
        std::vector<std::vector<NodeId>> lists(n);
        for (const auto& [u, v] : edges) {
            if (u >= n || v >= n)
                throw DomainError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") references a node >= n=" + std::to_string(n));
            if (u == v) throw DomainError("self-loop at node " + std::to_string(u));
            lists[u].push_back(v);
            lists[v].push_back(u);
        }
        Graph g;
        g.offsets_.assign(n + 1, 0);
        std::size_t dup = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto& l = lists[i];
            std::sort(l.begin(), l.end());
            const auto before = l.size();
            l.erase(std::unique(l.begin(), l.end()), l.end());
            dup += before - l.size();
            g.offsets_[i + 1] = g.offsets_[i] + l.size();
            g.max_degree_ = std::max(g.max_degree_, l.size());
        }
        g.targets_.reserve(g.offsets_[n]);
        for (auto& l : lists) g.targets_.insert(g.targets_.end(), l.begin(), l.end());
        // each duplicate undirected edge was removed from both endpoint lists
        if (duplicates) *duplicates = dup / 2;
        return g;
    }

    std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }
    std::size_t max_degree() const noexcept { return max_degree_; }

    std::size_t degree(NodeId i) const {
        check_node(i);
        return offsets_[i + 1] - offsets_[i];
    }

    std::span<const NodeId> neighbors(NodeId i) const {
        check_node(i);
        return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

    bool adjacent(NodeId a, NodeId b) const {
        const auto nb = neighbors(a);
        return std::binary_search(nb.begin(), nb.end(), b);
    }

    // Each undirected edge once, as (u, v) with u < v, in ascending order.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count());
        for (NodeId u = 0; u < size(); ++u)
            for (NodeId v : neighbors(u))
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    void check_node(NodeId i) const {
        if (i >= size())
            throw std::out_of_range("node " + std::to_string(i) + " out of range (n=" +
                                    std::to_string(size()) + ")");
    }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::size_t max_degree_ = 0;
};

// A subset of 0..universe-1. Members are kept sorted; membership is O(1).
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t universe) : mask_(universe, 0) {}
    NodeSet(std::size_t universe, std::span<const NodeId> ids) : mask_(universe, 0) {
        for (NodeId id : ids) {
            check(id);
            mask_[id] = 1;
        }
        rebuild();
    }
    NodeSet(std::size_t universe, std::initializer_list<NodeId> ids)
        : NodeSet(universe, std::span<const NodeId>(ids.begin(), ids.size())) {}

    static NodeSet all(std::size_t universe) {
        NodeSet s(universe);
        s.mask_.assign(universe, 1);
        s.rebuild();
        return s;
    }

    void insert(NodeId id) {
        check(id);
        if (mask_[id]) return;
        mask_[id] = 1;
        members_.insert(std::upper_bound(members_.begin(), members_.end(), id), id);
    }

    bool contains(NodeId id) const noexcept { return id < mask_.size() && mask_[id]; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    std::size_t universe() const noexcept { return mask_.size(); }
    std::span<const NodeId> members() const noexcept { return members_; }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    friend bool operator==(const NodeSet& a, const NodeSet& b) { return a.members_ == b.members_; }

private:
    void check(NodeId id) const {
        if (id >= mask_.size())
            throw std::out_of_range("node " + std::to_string(id) + " outside universe of size " +
                                    std::to_string(mask_.size()));
    }

    void rebuild() {
        members_.clear();
        for (NodeId i = 0; i < mask_.size(); ++i)
            if (mask_[i]) members_.push_back(i);
    }

    std::vector<char> mask_;
    std::vector<NodeId> members_;
};

inline NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
    NodeSet out(a.universe());
    for (NodeId i : a)
        if (b.contains(i)) out.insert(i);
    return out;
}

inline NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
    NodeSet out(a.universe());
    for (NodeId i : a)
        if (!b.contains(i)) out.insert(i);
    return out;
}

// E(i, T): number of neighbors of i inside T.
inline std::size_t edges_to(const Graph& g, NodeId i, const NodeSet& t) {
    std::size_t count = 0;
    for (NodeId j : g.neighbors(i)) count += t.contains(j);
    return count;
}

// E(S, T) = sum over i in S of E(i, T). An edge with both ends in S and T
// is counted once from each end.
inline std::size_t edges_between(const Graph& g, const NodeSet& s, const NodeSet& t) {
    if (s.universe() != g.size() || t.universe() != g.size())
        throw DomainError("node set universe does not match graph size");
    std::size_t count = 0;
    for (NodeId i : s) count += edges_to(g, i, t);
    return count;
}

// Nodes at graph distance 1..depth from i, excluding i. depth is 1 or 2.
inline NodeSet neighbors_within_distance(const Graph& g, NodeId i, int depth) {
    if (depth != 1 && depth != 2) throw DomainError("distance must be 1 or 2");
    NodeSet out(g.size());
    for (NodeId j : g.neighbors(i)) {
        out.insert(j);
        if (depth == 2)
            for (NodeId w : g.neighbors(j))
                if (w != i) out.insert(w);
    }
    return out;
}

}  // namespace fairpart
