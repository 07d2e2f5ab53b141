// graph_io.hpp - edge-list reading and writing
//
// Format: one "u v" pair of non-negative integers per line. Blank lines and
// lines starting with '#' are skipped. Node ids are remapped to 0..n-1 in
// order of first appearance. A leading "# nodes: N" comment pre-registers ids
// 0..N-1 so that isolated nodes survive a write/read cycle.
#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fairpart/errors.hpp"
#include "fairpart/graph.hpp"

namespace fairpart {

struct LoadedGraph {
    Graph graph;
    std::size_t duplicate_edges = 0;
    // original_ids[new_id] is the id as written in the file
    std::vector<std::uint64_t> original_ids;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto start = s.find_first_not_of(" \t\r\n", pos);
        if (start == std::string_view::npos) break;
        auto stop = s.find_first_of(" \t\r\n", start);
        if (stop == std::string_view::npos) stop = s.size();
        out.push_back(s.substr(start, stop - start));
        pos = stop;
    }
    return out;
}

inline bool parse_u64(std::string_view tok, std::uint64_t& out) {
    if (tok.empty()) return false;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace detail

inline LoadedGraph load_edge_list(std::istream& in) {
    LoadedGraph result;
    std::unordered_map<std::uint64_t, NodeId> remap;
    std::vector<Edge> edges;
    auto intern = [&](std::uint64_t id) {
        auto [it, fresh] = remap.try_emplace(id, static_cast<NodeId>(result.original_ids.size()));
        if (fresh) result.original_ids.push_back(id);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    bool seen_edge = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            constexpr std::string_view directive = "nodes:";
            const auto rest = detail::trim(body.substr(1));
            if (!seen_edge && result.original_ids.empty() && rest.starts_with(directive)) {
                std::uint64_t count = 0;
                if (!detail::parse_u64(detail::trim(rest.substr(directive.size())), count))
                    throw ParseError(lineno, "malformed node-count comment");
                for (std::uint64_t id = 0; id < count; ++id) intern(id);
            }
            continue;
        }
        const auto tokens = detail::split_ws(body);
        if (tokens.size() != 2)
            throw ParseError(lineno, "expected two node ids, got " + std::to_string(tokens.size()) +
                                         " tokens");
        std::uint64_t u = 0, v = 0;
        if (!detail::parse_u64(tokens[0], u) || !detail::parse_u64(tokens[1], v))
            throw ParseError(lineno, "node ids must be non-negative integers");
        if (u == v) throw ParseError(lineno, "self-loop on node " + std::to_string(u));
        seen_edge = true;
        const NodeId a = intern(u);
        const NodeId b = intern(v);
        edges.emplace_back(a, b);
    }
    result.graph = Graph::from_edges(result.original_ids.size(), edges, &result.duplicate_edges);
    return result;
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
    out << "# nodes: " << g.size() << "\n";
    out << "# edges: " << g.edge_count() << "\n";
    for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace fairpart
