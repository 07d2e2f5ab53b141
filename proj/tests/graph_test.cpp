#include <sstream>

#include <gtest/gtest.h>

#include "fairpart/generators.hpp"
#include "fairpart/graph.hpp"
#include "fairpart/graph_io.hpp"
#include "fairpart/random.hpp"

using namespace fairpart;

namespace {

LoadedGraph load(const std::string& text) {
    std::istringstream in(text);
    return load_edge_list(in);
}

NodeSet random_set(std::size_t n, Rng& rng) {
    NodeSet s(n);
    for (NodeId i = 0; i < n; ++i)
        if (rng.bernoulli(0.4)) s.insert(i);
    return s;
}

void expect_well_formed(const Graph& g) {
    std::size_t total = 0, max_deg = 0;
    for (NodeId i = 0; i < g.size(); ++i) {
        const auto nb = g.neighbors(i);
        total += nb.size();
        max_deg = std::max(max_deg, nb.size());
        for (std::size_t t = 0; t < nb.size(); ++t) {
            EXPECT_NE(nb[t], i);
            if (t > 0) {
                EXPECT_LT(nb[t - 1], nb[t]);
            }
            EXPECT_TRUE(g.adjacent(nb[t], i));
        }
    }
    EXPECT_EQ(g.max_degree(), max_deg);
    EXPECT_EQ(g.edge_count() * 2, total);
}

}  // namespace

TEST(EdgeList, PathFromText) {
    const auto r = load("0 1\n1 2");
    EXPECT_EQ(r.graph.size(), 3u);
    EXPECT_EQ(r.graph.max_degree(), 2u);
    EXPECT_EQ(r.graph.edge_count(), 2u);
    EXPECT_EQ(r.duplicate_edges, 0u);
}

TEST(EdgeList, DuplicateEdgesCollapse) {
    const auto r = load("0 1\n0 1");
    EXPECT_EQ(r.graph.edge_count(), 1u);
    EXPECT_EQ(r.duplicate_edges, 1u);
    EXPECT_EQ(load("0 1\n1 0\n0 1").duplicate_edges, 2u);
}

TEST(EdgeList, SelfLoopRejectedWithLine) {
    try {
        load("3 3");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
    try {
        load("# header\n\n0 1\n2 2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(EdgeList, BadTokensRejected) {
    EXPECT_THROW(load("0 x"), ParseError);
    EXPECT_THROW(load("0 -1"), ParseError);
    EXPECT_THROW(load("0 1 2"), ParseError);
    EXPECT_THROW(load("7"), ParseError);
    try {
        load("0 1\n1 2.5\n");
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(EdgeList, RemapsInFirstAppearanceOrder) {
    const auto r = load("# comment\n10 20\n\n20 5\n");
    ASSERT_EQ(r.original_ids, (std::vector<std::uint64_t>{10, 20, 5}));
    EXPECT_TRUE(r.graph.adjacent(0, 1));
    EXPECT_TRUE(r.graph.adjacent(1, 2));
    EXPECT_FALSE(r.graph.adjacent(0, 2));
}

TEST(EdgeList, WriteReadKeepsIsolatedNodes) {
    const Graph g = Graph::from_edges(5, std::vector<Edge>{{0, 3}});
    std::ostringstream out;
    write_edge_list(g, out);
    const auto r = load(out.str());
    EXPECT_EQ(r.graph, g);
    EXPECT_EQ(r.graph.size(), 5u);
}

TEST(Generators, Examples) {
    const auto k6 = gen::complete(6);
    EXPECT_EQ(k6.edge_count(), 15u);
    EXPECT_EQ(k6.max_degree(), 5u);

    const auto c8 = gen::cycle(8);
    EXPECT_EQ(c8.edge_count(), 8u);
    for (NodeId i = 0; i < 8; ++i) EXPECT_EQ(c8.degree(i), 2u);

    const auto two = gen::cliques(2, 4);
    EXPECT_EQ(two.size(), 8u);
    EXPECT_EQ(two.edge_count(), 12u);
    EXPECT_FALSE(two.adjacent(3, 4));

    const auto grid = gen::grid(3, 4);
    EXPECT_EQ(grid.edge_count(), 3u * 3 + 2u * 4);
    EXPECT_EQ(grid.max_degree(), 4u);
}

TEST(Generators, RegularGraphsAreSimpleAndRegular) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = gen::random_regular(200, 8, seed);
        expect_well_formed(g);
        for (NodeId i = 0; i < g.size(); ++i) EXPECT_EQ(g.degree(i), 8u);
    }
    const auto matching = gen::random_regular(20, 1, 3);
    EXPECT_EQ(matching.edge_count(), 10u);
}

TEST(Generators, InfeasibleParametersRejected) {
    EXPECT_THROW(gen::random_regular(5, 3, 0), DomainError);  // odd d*n
    EXPECT_THROW(gen::random_regular(4, 4, 0), DomainError);  // d >= n
    EXPECT_THROW(gen::gnp(10, 1.5, 0), DomainError);
    EXPECT_THROW(gen::cycle(2), DomainError);
    const double bad[] = {3.5};
    EXPECT_THROW(gen::generate("complete", bad, 0), DomainError);
    EXPECT_THROW(gen::generate("petersen", {}, 0), DomainError);
}

TEST(Generators, Reproducible) {
    const double gnp_params[] = {60, 0.3};
    EXPECT_EQ(gen::generate("gnp", gnp_params, 42), gen::generate("gnp", gnp_params, 42));
    EXPECT_NE(gen::generate("gnp", gnp_params, 42), gen::generate("gnp", gnp_params, 43));
    const double reg_params[] = {100, 6};
    EXPECT_EQ(gen::generate("regular", reg_params, 9), gen::generate("regular", reg_params, 9));
}

TEST(Graph, Degree) {
    const auto k4 = gen::complete(4);
    for (NodeId i = 0; i < 4; ++i) EXPECT_EQ(k4.degree(i), 3u);
    EXPECT_EQ(gen::path(3).degree(1), 2u);
    const auto isolated = Graph::from_edges(3, std::vector<Edge>{{0, 1}});
    EXPECT_EQ(isolated.degree(2), 0u);
    EXPECT_THROW(k4.degree(4), std::out_of_range);
}

TEST(Graph, EdgesBetweenExamples) {
    const auto k4 = gen::complete(4);
    EXPECT_EQ(edges_between(k4, NodeSet(4, {0, 1}), NodeSet(4, {2, 3})), 4u);
    EXPECT_EQ(edges_between(k4, NodeSet(4, {0, 1}), NodeSet(4, {0, 1})), 2u);
    const auto p3 = gen::path(3);
    EXPECT_EQ(edges_between(p3, NodeSet(3, {0, 2}), NodeSet(3, {1})), 2u);
}

TEST(Graph, EdgesBetweenProperties) {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = gen::gnp(30, 0.2, rng.next());
        const NodeSet s = random_set(30, rng), t = random_set(30, rng);
        EXPECT_EQ(edges_between(g, s, t), edges_between(g, t, s));
        EXPECT_EQ(edges_between(g, s, s) % 2, 0u);
        // the parts of any partition split each node's degree
        std::vector<NodeSet> parts(3, NodeSet(30));
        for (NodeId i = 0; i < 30; ++i) parts[rng.below(3)].insert(i);
        for (NodeId i = 0; i < 30; ++i) {
            std::size_t sum = 0;
            for (const auto& p : parts) sum += edges_between(g, NodeSet(30, {i}), p);
            EXPECT_EQ(sum, g.degree(i));
        }
    }
}

TEST(Graph, NeighborsWithinDistance) {
    EXPECT_EQ(neighbors_within_distance(gen::cycle(8), 0, 2), NodeSet(8, {1, 2, 6, 7}));
    const auto star = Graph::from_edges(5, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    EXPECT_EQ(neighbors_within_distance(star, 0, 1), NodeSet(5, {1, 2, 3, 4}));
    EXPECT_EQ(neighbors_within_distance(star, 1, 2), NodeSet(5, {0, 2, 3, 4}));
    const auto isolated = Graph::from_edges(3, std::vector<Edge>{{0, 1}});
    EXPECT_TRUE(neighbors_within_distance(isolated, 2, 2).empty());
    EXPECT_THROW(neighbors_within_distance(star, 0, 3), DomainError);
}

TEST(Graph, RandomGraphsAreWellFormed) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) expect_well_formed(gen::gnp(40, 0.3, seed));
}

TEST(NodeSet, RejectsOutOfRange) {
    EXPECT_THROW(NodeSet(3, {0, 3}), std::out_of_range);
    const NodeSet s(5, {4, 1, 1, 3});
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(std::vector<NodeId>(s.begin(), s.end()), (std::vector<NodeId>{1, 3, 4}));
}
