// mincut2.hpp - balanced bipartitions: cut values, swap local search, exact
// minimum balanced cut and the (2 + eps, 0)-core dispatcher.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fairpart/audit.hpp"
#include "fairpart/errors.hpp"
#include "fairpart/graph.hpp"
#include "fairpart/partition.hpp"
#include "fairpart/random.hpp"

namespace fairpart {

// Core factors that the min-cut partitions are known to achieve, n >= 7.
struct CoreFactors {
    static constexpr double phi = std::numbers::phi;

    // exact minimum balanced cut: phi (n-2)/(n-6)
    static double exact_factor(std::size_t n) {
        require(n);
        return phi * static_cast<double>(n - 2) / static_cast<double>(n - 6);
    }

    // any swap-local balanced cut: (2n-4)/(n-6)
    static double local_factor(std::size_t n) {
        require(n);
        return static_cast<double>(2 * n - 4) / static_cast<double>(n - 6);
    }

    // local_factor(n) <= 2 + eps exactly when n >= 8/eps + 6
    static double brute_cutoff(double eps) {
        if (!(eps > 0.0)) throw DomainError("eps must be positive");
        return 8.0 / eps + 6.0;
    }

private:
    static void require(std::size_t n) {
        if (n < 7) throw DomainError("core factors are defined for n >= 7");
    }
};

struct CutReport {
    std::size_t cut_value = 0;
    bool locally_minimal = false;
    std::size_t swaps_performed = 0;
};

struct CutResult {
    Partition partition;
    CutReport report;
};

namespace detail {

inline void require_bipartition(const Graph& g, const Partition& x) {
    if (x.k() != 2) throw DomainError("expected a 2-part partition");
    if (x.n() != g.size()) throw DomainError("partition size does not match graph");
}

}  // namespace detail

// E(X_1, X_2)
inline std::size_t cut_value(const Graph& g, const Partition& x) {
    detail::require_bipartition(g, x);
    std::size_t cut = 0;
    for (NodeId i = 0; i < g.size(); ++i)
        if (x.part_of(i) == 0)
            for (NodeId j : g.neighbors(i)) cut += x.part_of(j) == 1;
    return cut;
}

// Change in cut value if i (part 0) and j (part 1) trade places:
// E(i,X1) + E(j,X2) - E(i,X2) - E(j,X1) + 2 E(i,j).
inline long swap_delta(const Graph& g, const Partition& x, NodeId i, NodeId j) {
    long delta = 0;
    for (NodeId w : g.neighbors(i)) delta += x.part_of(w) == x.part_of(i) ? 1 : -1;
    for (NodeId w : g.neighbors(j)) delta += x.part_of(w) == x.part_of(j) ? 1 : -1;
    return delta + (g.adjacent(i, j) ? 2 : 0);
}

// Exhaustive scan: no cross pair swap strictly lowers the cut.
inline bool is_swap_local_min(const Graph& g, const Partition& x) {
    detail::require_bipartition(g, x);
    for (NodeId i = 0; i < g.size(); ++i) {
        if (x.part_of(i) != 0) continue;
        for (NodeId j = 0; j < g.size(); ++j)
            if (x.part_of(j) == 1 && swap_delta(g, x, i, j) < 0) return false;
    }
    return true;
}

// Balanced bipartition with a shuffled node order: first floor(n/2) go to part 0.
inline Partition random_balanced_bipartition(std::size_t n, Rng& rng) {
    if (n < 2) throw DomainError("bipartition needs n >= 2");
    std::vector<NodeId> order(n);
    for (NodeId i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(std::span<NodeId>(order));
    std::vector<PartId> assign(n, 1);
    for (std::size_t r = 0; r < n / 2; ++r) assign[order[r]] = 0;
    return Partition(2, std::move(assign));
}

enum class SwapRule { best_improvement, first_improvement };

// Swap local search. Each applied swap strictly lowers an integer cut, so the
// loop ends after at most |E| swaps.
inline CutResult local_min_cut(const Graph& g, std::uint64_t seed,
                               const std::optional<Partition>& init = std::nullopt,
                               SwapRule rule = SwapRule::best_improvement) {
    const std::size_t n = g.size();
    if (n < 2) throw DomainError("local_min_cut needs n >= 2");
    Rng rng(seed);
    Partition start = init ? *init : random_balanced_bipartition(n, rng);
    detail::require_bipartition(g, start);
    if (!is_balanced(start)) throw DomainError("initial partition must be balanced");

    std::vector<PartId> side(start.assignment().begin(), start.assignment().end());
    // gain[v] = E(v, other side) - E(v, own side)
    std::vector<long> gain(n, 0);
    for (NodeId v = 0; v < n; ++v)
        for (NodeId w : g.neighbors(v)) gain[v] += side[w] == side[v] ? -1 : 1;

    auto move = [&](NodeId v) {
        for (NodeId w : g.neighbors(v)) gain[w] += side[w] == side[v] ? 2 : -2;
        side[v] ^= 1;
        gain[v] = -gain[v];
    };

    CutReport report;
    while (true) {
        long best = 0;
        NodeId bi = 0, bj = 0;
        bool found = false;
        for (NodeId i = 0; i < n && !(found && rule == SwapRule::first_improvement); ++i) {
            if (side[i] != 0) continue;
            for (NodeId j = 0; j < n; ++j) {
                if (side[j] != 1) continue;
                const long delta = -gain[i] - gain[j] + (g.adjacent(i, j) ? 2 : 0);
                if (delta < best) {
                    best = delta;
                    bi = i;
                    bj = j;
                    found = true;
                    if (rule == SwapRule::first_improvement) break;
                }
            }
        }
        if (!found) break;
        move(bi);
        move(bj);
        ++report.swaps_performed;
    }
    Partition out(2, std::move(side));
    report.cut_value = cut_value(g, out);
    report.locally_minimal = is_swap_local_min(g, out);
    if (!report.locally_minimal) throw InvariantViolation("local search stopped at a non-local minimum");
    return {std::move(out), report};
}

inline constexpr std::size_t kExactCutMaxNodes = 26;

namespace detail {

using Mask = std::uint32_t;

inline std::vector<Mask> adjacency_masks(const Graph& g) {
    std::vector<Mask> adj(g.size(), 0);
    for (NodeId i = 0; i < g.size(); ++i)
        for (NodeId j : g.neighbors(i)) adj[i] |= Mask{1} << j;
    return adj;
}

inline std::size_t mask_cut(const std::vector<Mask>& adj, Mask side, Mask all) {
    std::size_t cut = 0;
    for (Mask rest = side; rest; rest &= rest - 1) {
        const int i = std::countr_zero(rest);
        cut += static_cast<std::size_t>(std::popcount(adj[i] & (all & ~side)));
    }
    return cut;
}

// Calls visit(mask) for every balanced side containing node 0, each unordered
// bipartition exactly once. Sizes are floor(n/2) and, for odd n, ceil(n/2).
template <class Visit>
void for_each_balanced_side(std::size_t n, Visit&& visit) {
    std::vector<std::size_t> sizes{n / 2};
    if (n % 2 == 1) sizes.push_back(n / 2 + 1);
    for (std::size_t size : sizes) {
        // node 0 plus size-1 of nodes 1..n-1, by Gosper's hack over n-1 bits
        const std::size_t r = size - 1;
        if (r == 0) {
            visit(Mask{1});
            continue;
        }
        Mask c = (Mask{1} << r) - 1;
        const Mask limit = Mask{1} << (n - 1);
        while (c < limit) {
            visit((c << 1) | Mask{1});
            const Mask low = c & (~c + 1);
            const Mask ripple = c + low;
            c = (((ripple ^ c) >> 2) / low) | ripple;
        }
    }
}

inline std::vector<NodeId> mask_members(Mask m) {
    std::vector<NodeId> out;
    for (; m; m &= m - 1) out.push_back(static_cast<NodeId>(std::countr_zero(m)));
    return out;
}

inline Partition partition_from_side(std::size_t n, Mask side) {
    std::vector<PartId> assign(n, 1);
    for (NodeId i = 0; i < n; ++i)
        if (side >> i & 1) assign[i] = 0;
    return Partition(2, std::move(assign));
}

}  // namespace detail

// Global minimum balanced cut by enumeration (n <= 26). Part 0 is the side
// holding node 0; among optimal cuts the lexicographically smallest part 0 wins.
inline CutResult exact_min_balanced_cut(const Graph& g) {
    const std::size_t n = g.size();
    if (n < 2) throw DomainError("exact_min_balanced_cut needs n >= 2");
    if (n > kExactCutMaxNodes)
        throw Refusal("exact minimum balanced cut is limited to n <= " +
                      std::to_string(kExactCutMaxNodes) + " (n=" + std::to_string(n) + ")");
    const auto adj = detail::adjacency_masks(g);
    const detail::Mask all = (detail::Mask{1} << n) - 1;
    std::size_t best_cut = static_cast<std::size_t>(-1);
    detail::Mask best = 0;
    detail::for_each_balanced_side(n, [&](detail::Mask side) {
        const std::size_t cut = detail::mask_cut(adj, side, all);
        if (cut < best_cut) {
            best_cut = cut;
            best = side;
        } else if (cut == best_cut) {
            const auto a = detail::mask_members(side), b = detail::mask_members(best);
            if (std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) best = side;
        }
    });
    CutResult result{detail::partition_from_side(n, best), {}};
    result.report.cut_value = best_cut;
    result.report.locally_minimal = is_swap_local_min(g, result.partition);
    return result;
}

enum class CoreProvenance { small_one_core, brute_force_two_core, local_search };

inline const char* to_string(CoreProvenance p) {
    switch (p) {
        case CoreProvenance::small_one_core: return "small-exhaustive-(1,0)-core";
        case CoreProvenance::brute_force_two_core: return "brute-force-(2,0)-core";
        case CoreProvenance::local_search: return "local-search";
    }
    return "?";
}

struct TwoCoreResult {
    Partition partition;
    CoreProvenance provenance = CoreProvenance::local_search;
    double guaranteed_alpha = 0.0;  // the partition is in the (guaranteed_alpha, 0)-core
};

namespace detail {

// First balanced bipartition, by ascending cut value and then enumeration
// order, that admits no (alpha, 0)-blocking set of size floor/ceil(n/2).
inline std::optional<Partition> first_core_bipartition(const Graph& g, double alpha) {
    const std::size_t n = g.size();
    const auto adj = adjacency_masks(g);
    const Mask all = (Mask{1} << n) - 1;
    std::vector<std::size_t> histogram(g.edge_count() + 1, 0);
    for_each_balanced_side(n, [&](Mask side) { ++histogram[mask_cut(adj, side, all)]; });
    const auto query = CoreQuery::balanced(alpha, 0.0, n, 2);
    for (std::size_t level = 0; level < histogram.size(); ++level) {
        if (histogram[level] == 0) continue;
        std::optional<Partition> hit;
        for_each_balanced_side(n, [&](Mask side) {
            if (hit || mask_cut(adj, side, all) != level) return;
            auto x = partition_from_side(n, side);
            if (!find_blocking_exact(g, x, query)) hit = std::move(x);
        });
        if (hit) return hit;
    }
    return std::nullopt;
}

}  // namespace detail

// Balanced bipartition in the (2 + eps, 0)-core.
//   n <= 6:               exhaustive search for a (1, 0)-core partition;
//   7 <= n <= 8/eps + 6:  exhaustive search for a (2, 0)-core partition;
//   larger n:             swap local search, ((2n-4)/(n-6), 0)-core.
// The middle branch refuses beyond 26 nodes. A search that comes back empty
// contradicts known existence results and raises InvariantViolation.
inline TwoCoreResult two_core_partition(const Graph& g, double eps, std::uint64_t seed = 0) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const std::size_t n = g.size();
    if (n < 2) throw DomainError("two_core_partition needs n >= 2");
    if (n <= 6) {
        auto x = detail::first_core_bipartition(g, 1.0);
        if (!x) throw InvariantViolation("no balanced (1,0)-core partition found for n <= 6");
        return {std::move(*x), CoreProvenance::small_one_core, 1.0};
    }
    if (static_cast<double>(n) <= CoreFactors::brute_cutoff(eps)) {
        if (n > kExactCutMaxNodes)
            throw Refusal("n=" + std::to_string(n) + " needs brute force for eps=" + std::to_string(eps) +
                          " (n <= 8/eps + 6) but exhaustive search is limited to n <= " +
                          std::to_string(kExactCutMaxNodes));
        auto x = detail::first_core_bipartition(g, 2.0);
        if (!x)
            throw InvariantViolation("no balanced (2,0)-core partition exists for this graph: "
                                     "this contradicts the known existence result");
        return {std::move(*x), CoreProvenance::brute_force_two_core, 2.0};
    }
    auto local = local_min_cut(g, seed);
    return {std::move(local.partition), CoreProvenance::local_search, CoreFactors::local_factor(n)};
}

// max{E(X1∩S, X1), E(X2∩S, X2)} >= (n-6)/(n-2) E(X1∩S, X2∩S) for a swap-local
// bipartition X and |S| >= floor(n/2).
inline bool check_one_swap_lemma(const Graph& g, const Partition& x, const NodeSet& s) {
    detail::require_bipartition(g, x);
    const std::size_t n = g.size();
    if (n < 7) throw DomainError("one-swap inequality needs n >= 7");
    if (s.universe() != n || s.size() < n / 2) throw DomainError("S must hold at least floor(n/2) nodes");
    if (!is_balanced(x)) throw DomainError("partition must be balanced");
    if (!is_swap_local_min(g, x)) throw DomainError("partition must be swap-locally minimal");
    const NodeSet x1 = x.part(0), x2 = x.part(1);
    const NodeSet s1 = set_intersection(x1, s), s2 = set_intersection(x2, s);
    const double lhs = static_cast<double>(std::max(edges_between(g, s1, x1), edges_between(g, s2, x2)));
    const double rhs = static_cast<double>(n - 6) / static_cast<double>(n - 2) *
                       static_cast<double>(edges_between(g, s1, s2));
    return lhs >= rhs - kTolerance;
}

}  // namespace fairpart
