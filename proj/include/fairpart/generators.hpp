// generators.hpp - deterministic test-instance families
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairpart/errors.hpp"
#include "fairpart/graph.hpp"
#include "fairpart/random.hpp"

namespace fairpart::gen {

inline Graph complete(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

inline Graph path(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
    return Graph::from_edges(n, edges);
}

inline Graph cycle(std::size_t n) {
    if (n < 3) throw DomainError("cycle needs at least 3 nodes");
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) edges.emplace_back(u, static_cast<NodeId>((u + 1) % n));
    return Graph::from_edges(n, edges);
}

// rows x cols lattice, node id r*cols + c.
inline Graph grid(std::size_t rows, std::size_t cols) {
    std::vector<Edge> edges;
    auto id = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    return Graph::from_edges(rows * cols, edges);
}

// count disjoint cliques of the given size; clique c holds ids c*size .. c*size+size-1.
inline Graph cliques(std::size_t count, std::size_t size) {
    std::vector<Edge> edges;
    for (std::size_t c = 0; c < count; ++c) {
        const auto base = static_cast<NodeId>(c * size);
        for (NodeId u = 0; u < size; ++u)
            for (NodeId v = u + 1; v < size; ++v) edges.emplace_back(base + u, base + v);
    }
    return Graph::from_edges(count * size, edges);
}

inline Graph gnp(std::size_t n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("gnp requires p in [0, 1]");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

// Random d-regular graph by the pairing model. Points are matched one random
// suitable pair at a time (no loop, no repeated edge); when no suitable pair
// remains the whole pairing restarts.
inline Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                            int max_restarts = 1000) {
    if (d >= n && !(n == 0 && d == 0)) throw DomainError("regular requires d < n");
    if ((n * d) % 2 != 0) throw DomainError("regular requires d*n even");
    Rng rng(seed);
    for (int attempt = 0; attempt < max_restarts; ++attempt) {
        std::vector<NodeId> points;
        points.reserve(n * d);
        for (NodeId u = 0; u < n; ++u)
            for (std::size_t r = 0; r < d; ++r) points.push_back(u);
        std::vector<std::vector<NodeId>> adj(n);
        auto linked = [&](NodeId a, NodeId b) {
            for (NodeId x : adj[a])
                if (x == b) return true;
            return false;
        };
        auto take = [&](std::size_t a, std::size_t b) {
            const NodeId u = points[a], v = points[b];
            adj[u].push_back(v);
            adj[v].push_back(u);
            if (a < b) std::swap(a, b);
            points[a] = points.back();
            points.pop_back();
            points[b] = points.back();
            points.pop_back();
        };
        bool stuck = false;
        while (!points.empty() && !stuck) {
            bool paired = false;
            for (int tries = 0; tries < 64 && !paired; ++tries) {
                const auto a = static_cast<std::size_t>(rng.below(points.size()));
                const auto b = static_cast<std::size_t>(rng.below(points.size()));
                if (a == b) continue;
                if (points[a] == points[b] || linked(points[a], points[b])) continue;
                take(a, b);
                paired = true;
            }
            if (paired) continue;
            std::vector<std::pair<std::size_t, std::size_t>> suitable;
            for (std::size_t a = 0; a < points.size(); ++a)
                for (std::size_t b = a + 1; b < points.size(); ++b)
                    if (points[a] != points[b] && !linked(points[a], points[b]))
                        suitable.emplace_back(a, b);
            if (suitable.empty()) {
                stuck = true;
            } else {
                const auto& [a, b] = suitable[rng.below(suitable.size())];
                take(a, b);
            }
        }
        if (stuck) continue;
        std::vector<Edge> edges;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v : adj[u])
                if (u < v) edges.emplace_back(u, v);
        return Graph::from_edges(n, edges);
    }
    throw DomainError("could not build a simple " + std::to_string(d) + "-regular graph on " +
                      std::to_string(n) + " nodes");
}

namespace detail {

inline std::size_t as_count(double v, std::string_view what) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9)
        throw DomainError(std::string(what) + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

inline void expect_params(std::string_view model, std::span<const double> params,
                          std::size_t count, std::string_view usage) {
    if (params.size() != count)
        throw DomainError(std::string(model) + " expects " + std::string(usage));
}

}  // namespace detail

// Dispatches on a model name:
//   complete(n) cycle(n) path(n) grid(rows, cols) regular(n, d) gnp(n, p) cliques(count, size)
// Only regular and gnp consume the seed.
inline Graph generate(std::string_view model, std::span<const double> params, std::uint64_t seed) {
    using detail::as_count;
    using detail::expect_params;
    if (model == "complete") {
        expect_params(model, params, 1, "(n)");
        return complete(as_count(params[0], "n"));
    }
    if (model == "cycle") {
        expect_params(model, params, 1, "(n)");
        return cycle(as_count(params[0], "n"));
    }
    if (model == "path") {
        expect_params(model, params, 1, "(n)");
        return path(as_count(params[0], "n"));
    }
    if (model == "grid") {
        expect_params(model, params, 2, "(rows, cols)");
        return grid(as_count(params[0], "rows"), as_count(params[1], "cols"));
    }
    if (model == "regular") {
        expect_params(model, params, 2, "(n, d)");
        return random_regular(as_count(params[0], "n"), as_count(params[1], "d"), seed);
    }
    if (model == "gnp") {
        expect_params(model, params, 2, "(n, p)");
        return gnp(as_count(params[0], "n"), params[1], seed);
    }
    if (model == "cliques") {
        expect_params(model, params, 2, "(count, size)");
        return cliques(as_count(params[0], "count"), as_count(params[1], "size"));
    }
    throw DomainError("unknown graph model '" + std::string(model) + "'");
}

}  // namespace fairpart::gen
