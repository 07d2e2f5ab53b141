// partition.hpp - k-partitions, balance intervals and node utilities
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairpart/errors.hpp"
#include "fairpart/graph.hpp"

namespace fairpart {

using PartId = std::uint32_t;

// Assignment of every node to one of k parts. Immutable once built.
class Partition {
public:
    Partition() = default;

    // Requires k >= 1, every id < k and n >= k (n == 0 is accepted as the
    // degenerate empty partition).
    Partition(std::size_t k, std::vector<PartId> assignment)
        : k_(k), assignment_(std::move(assignment)), sizes_(k, 0) {
        if (k_ == 0) throw DomainError("partition needs k >= 1");
        if (!assignment_.empty() && assignment_.size() < k_)
            throw DomainError("partition needs n >= k (n=" + std::to_string(assignment_.size()) +
                              ", k=" + std::to_string(k_) + ")");
        for (std::size_t i = 0; i < assignment_.size(); ++i) {
            if (assignment_[i] >= k_)
                throw DomainError("node " + std::to_string(i) + " assigned to part " +
                                  std::to_string(assignment_[i]) + " >= k");
            ++sizes_[assignment_[i]];
        }
    }

    // Parts given as node lists; every node 0..n-1 must appear exactly once.
    static Partition from_parts(std::size_t n, const std::vector<std::vector<NodeId>>& parts) {
        std::vector<PartId> assign(n, 0);
        std::vector<char> seen(n, 0);
        for (PartId j = 0; j < parts.size(); ++j)
            for (NodeId i : parts[j]) {
                if (i >= n || seen[i]) throw DomainError("parts do not partition 0..n-1");
                seen[i] = 1;
                assign[i] = j;
            }
        for (char s : seen)
            if (!s) throw DomainError("parts do not cover every node");
        return Partition(parts.size(), std::move(assign));
    }

    std::size_t k() const noexcept { return k_; }
    std::size_t n() const noexcept { return assignment_.size(); }
    PartId part_of(NodeId i) const { return assignment_.at(i); }
    std::span<const PartId> assignment() const noexcept { return assignment_; }
    std::span<const std::size_t> part_sizes() const noexcept { return sizes_; }

    NodeSet part(PartId j) const {
        NodeSet s(n());
        for (NodeId i = 0; i < n(); ++i)
            if (assignment_[i] == j) s.insert(i);
        return s;
    }

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.k_ == b.k_ && a.assignment_ == b.assignment_;
    }

private:
    std::size_t k_ = 1;
    std::vector<PartId> assignment_;
    std::vector<std::size_t> sizes_ = std::vector<std::size_t>(1, 0);
};

// Allowed part sizes [floor((1-eps) n/k), ceil((1+eps) n/k)].
struct BalanceSpec {
    double eps = 0.0;
    std::size_t lower = 0;
    std::size_t upper = 0;

    static BalanceSpec make(std::size_t n, std::size_t k, double eps) {
        if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("eps must lie in [0, 1]");
        if (k == 0) throw DomainError("k must be positive");
        // 1e-9 keeps products such as 0.8 * 10 / 2 from rounding to the wrong side
        const double share = static_cast<double>(n) / static_cast<double>(k);
        BalanceSpec spec;
        spec.eps = eps;
        spec.lower = static_cast<std::size_t>(std::floor((1.0 - eps) * share + 1e-9));
        spec.upper = static_cast<std::size_t>(std::ceil((1.0 + eps) * share - 1e-9));
        return spec;
    }

    bool admits(std::size_t size) const noexcept { return size >= lower && size <= upper; }
};

inline bool is_eps_balanced(const Partition& x, const BalanceSpec& spec) {
    for (std::size_t s : x.part_sizes())
        if (!spec.admits(s)) return false;
    return true;
}

inline bool is_balanced(const Partition& x) {
    return is_eps_balanced(x, BalanceSpec::make(x.n(), x.k(), 0.0));
}

// u_i(S) = E(i, S)
inline std::size_t utility_for_set(const Graph& g, NodeId i, const NodeSet& s) {
    return edges_to(g, i, s);
}

// u_i(X): neighbors of i sharing its part.
inline std::size_t utility(const Graph& g, const Partition& x, NodeId i) {
    const PartId own = x.part_of(i);
    std::size_t count = 0;
    for (NodeId j : g.neighbors(i)) count += x.part_of(j) == own;
    return count;
}

// u_i(X_j) for every part j.
inline std::vector<std::size_t> part_utilities(const Graph& g, const Partition& x, NodeId i) {
    std::vector<std::size_t> out(x.k(), 0);
    for (NodeId j : g.neighbors(i)) ++out[x.part_of(j)];
    return out;
}

}  // namespace fairpart
