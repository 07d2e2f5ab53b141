#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "fairpart/generators.hpp"
#include "fairpart/lll.hpp"

using namespace fairpart;

TEST(Events, EmptyGraphBalanced) {
    const auto g = Graph::from_edges(6, std::vector<Edge>{});
    const auto s = evaluate_events(g, Partition(2, {0, 1, 0, 1, 0, 1}), 2, 0.5);
    EXPECT_FALSE(s.global_bad);
    EXPECT_TRUE(s.bad_nodes.empty());
}

TEST(Events, UnbalancedIsGlobalBad) {
    const auto g = gen::cycle(10);
    EXPECT_TRUE(evaluate_events(g, Partition(2, std::vector<PartId>(10, 0)), 2, 0.1).global_bad);
}

TEST(Events, MaxDegreeOneNeverHasNodeEvents) {
    const auto g = gen::random_regular(20, 1, 5);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        std::vector<PartId> assign(20);
        for (auto& a : assign) a = static_cast<PartId>(rng.below(2));
        if (std::count(assign.begin(), assign.end(), 0u) == 0) continue;
        EXPECT_TRUE(evaluate_events(g, Partition(2, assign), 2, 0.5).bad_nodes.empty());
    }
}

TEST(Events, HubOutsideWindow) {
    std::vector<Edge> edges;
    for (NodeId leaf = 1; leaf <= 300; ++leaf) edges.emplace_back(0, leaf);
    const auto g = Graph::from_edges(301, edges);
    std::vector<PartId> assign(301, 0);
    assign[0] = 1;
    const auto s = evaluate_events(g, Partition(2, assign), 2, 1.0);
    EXPECT_FALSE(s.global_bad);
    EXPECT_EQ(s.bad_nodes, std::vector<NodeId>{0});
}

TEST(Weights, Assignment) {
    const auto w = LLLWeights::make(4, 8, 0.35);
    EXPECT_NEAR(w.x_node, 1.0 / (4.0 * 64 / (0.35 * 0.35) + 1), 1e-15);
    EXPECT_GT(w.x_node, 0.0);
    EXPECT_LT(w.x_node, 1.0);
    EXPECT_DOUBLE_EQ(w.x_global, 0.5);
    EXPECT_NEAR(w.expected_resamplings(2000), 1.95703125, 1e-9);
    EXPECT_EQ(default_round_budget(2000, 4, 8, 0.35), 2958u);
}

TEST(MoserTardos, RefusesEpsBelowThreshold) {
    const auto g = gen::gnp(100, 0.1, 1);
    EXPECT_THROW(moser_tardos(g, 4, 0.1, 0), Refusal);
    EXPECT_THROW(moser_tardos(g, 4, 0.0, 0), DomainError);
}

TEST(MoserTardos, EmptyGraphOnlyGlobalRounds) {
    // n = 12, k = 3 sits below the existence threshold (min_eps = 3.14), so
    // the guard is lifted explicitly.
    const auto g = Graph::from_edges(12, std::vector<Edge>{});
    MoserTardosOptions opt;
    opt.allow_below_min_eps = true;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = moser_tardos(g, 3, 0.5, seed, opt);
        ASSERT_TRUE(r.success);
        EXPECT_TRUE(is_eps_balanced(r.partition, BalanceSpec::make(12, 3, 0.5)));
        for (const auto& round : r.trace.rounds) EXPECT_EQ(round.kind, EventKind::global);
    }
}

TEST(MoserTardos, PerfectMatchingNoNodeEvents) {
    const auto g = gen::random_regular(20, 1, 2);
    MoserTardosOptions opt;
    opt.allow_below_min_eps = true;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = moser_tardos(g, 2, 0.5, seed, opt);
        ASSERT_TRUE(r.success);
        EXPECT_TRUE(check_desirability(g, r.partition, Regime::eps, 0.5).satisfied);
        for (const auto& round : r.trace.rounds) EXPECT_EQ(round.kind, EventKind::global);
    }
}

TEST(MoserTardos, NodeEventResamplesClosedNeighborhood) {
    const auto g = gen::gnp(300, 0.9, 17);
    MoserTardosOptions opt;
    opt.initial = Partition(2, std::vector<PartId>(300, 0));
    opt.verify_incremental = true;
    const auto r = moser_tardos(g, 2, 1.0, 5, opt);
    ASSERT_TRUE(r.success);
    ASSERT_GE(r.trace.total_rounds, 1u);
    EXPECT_EQ(r.trace.total_rounds, r.trace.rounds.size());
    const auto& first = r.trace.rounds.front();
    ASSERT_EQ(first.kind, EventKind::node);
    EXPECT_EQ(first.node, 0u);  // every node starts bad; lowest id goes first
    auto expected = neighbors_within_distance(g, 0, 1);
    expected.insert(0);
    EXPECT_EQ(first.resampled, std::vector<NodeId>(expected.begin(), expected.end()));
    for (const auto& round : r.trace.rounds) {
        if (round.kind != EventKind::node) continue;
        auto closed = neighbors_within_distance(g, round.node, 1);
        closed.insert(round.node);
        EXPECT_EQ(round.resampled, std::vector<NodeId>(closed.begin(), closed.end()));
    }
    EXPECT_TRUE(check_desirability(g, r.partition, Regime::eps, 1.0).satisfied);
}

TEST(MoserTardos, IncrementalBookkeepingMatchesRescan) {
    // A lopsided warm start on a dense graph forces both kinds of events.
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = gen::gnp(300, 0.9, 100 + seed);
        std::vector<PartId> assign(300, 0);
        for (NodeId i = 0; i < 10; ++i) assign[i] = 1;
        MoserTardosOptions opt;
        opt.initial = Partition(2, assign);
        opt.verify_incremental = true;
        const auto r = moser_tardos(g, 2, 1.0, seed, opt);
        ASSERT_TRUE(r.success);
        EXPECT_TRUE(check_desirability(g, r.partition, Regime::eps, 1.0).satisfied);
    }
}

TEST(MoserTardos, Deterministic) {
    const auto g = gen::random_regular(400, 6, 1);
    const auto a = moser_tardos(g, 2, 0.5, 77);
    const auto b = moser_tardos(g, 2, 0.5, 77);
    EXPECT_EQ(a.partition, b.partition);
    EXPECT_EQ(a.trace.total_rounds, b.trace.total_rounds);
    EXPECT_EQ(trace_to_json(a.trace), trace_to_json(b.trace));
}

TEST(MoserTardos, BudgetExhaustionReported) {
    // eps = 0.01 leaves part sizes 9..11 for n = 40, k = 4; one round is rarely enough
    const auto g = Graph::from_edges(40, std::vector<Edge>{});
    MoserTardosOptions opt;
    opt.allow_below_min_eps = true;
    opt.round_budget = 1;
    bool saw_failure = false;
    for (std::uint64_t seed = 0; seed < 50 && !saw_failure; ++seed) {
        const auto r = moser_tardos(g, 4, 0.01, seed, opt);
        if (r.success) continue;
        saw_failure = true;
        EXPECT_EQ(r.trace.total_rounds, 1u);
        EXPECT_EQ(r.trace.rounds.size(), 1u);
        EXPECT_TRUE(evaluate_events(g, r.partition, 4, 0.01).global_bad);
    }
    EXPECT_TRUE(saw_failure);
}

TEST(MoserTardos, RegularGraphsTerminateQuickly) {
    double total = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = gen::random_regular(2000, 8, seed);
        const auto r = moser_tardos(g, 4, 0.35, seed);
        ASSERT_TRUE(r.success);
        EXPECT_TRUE(check_desirability(g, r.partition, Regime::eps, 0.35).satisfied);
        total += static_cast<double>(r.trace.total_rounds);
    }
    EXPECT_LE(total / 20, 10 * 1.95703125);
}

TEST(Trace, JsonShape) {
    ResampleTrace t;
    t.rounds.push_back({EventKind::global, 0, {}});
    t.rounds.push_back({EventKind::node, 4, {1, 4, 9}});
    t.total_rounds = 2;
    const auto doc = trace_to_json(t);
    EXPECT_EQ(doc["total_rounds"], 2);
    EXPECT_EQ(doc["rounds"][0]["event"], "global");
    EXPECT_EQ(doc["rounds"][1]["node"], 4);
    EXPECT_EQ(doc["rounds"][1]["resampled"], nlohmann::json({1, 4, 9}));
}
