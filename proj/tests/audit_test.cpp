#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "fairpart/audit.hpp"
#include "fairpart/generators.hpp"
#include "oracles.hpp"

using namespace fairpart;

namespace {

// Clique A = {0..3}, clique B = {4..7}; each part takes two nodes of each.
Partition mixed_two_k4() { return Partition(2, {0, 0, 1, 1, 0, 0, 1, 1}); }
Partition aligned_two_k4() { return Partition(2, {0, 0, 0, 0, 1, 1, 1, 1}); }

Partition random_partition(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<PartId> assign(n);
    for (NodeId i = 0; i < n; ++i) assign[i] = static_cast<PartId>(i % k);
    rng.shuffle(std::span<PartId>(assign));
    return Partition(k, assign);
}

}  // namespace

TEST(Envy, CompleteBipartiteSides) {
    std::vector<Edge> edges;
    for (NodeId a = 0; a < 3; ++a)
        for (NodeId b = 3; b < 6; ++b) edges.emplace_back(a, b);
    const auto g = Graph::from_edges(6, edges);
    const auto r = envy_audit(g, Partition(2, {0, 0, 0, 1, 1, 1}));
    EXPECT_EQ(r.max_envy, 3u);
    EXPECT_EQ(r.argmax, 0u);
}

TEST(Envy, FourCycleAlternating) {
    EXPECT_EQ(envy_audit(gen::cycle(4), Partition(2, {0, 1, 0, 1})).max_envy, 2u);
}

TEST(Envy, K4Balanced) {
    const auto r = envy_audit(gen::complete(4), Partition(2, {0, 1, 1, 0}));
    EXPECT_EQ(r.max_envy, 1u);
    EXPECT_EQ(r.per_node_envy, (std::vector<std::size_t>{1, 1, 1, 1}));
}

TEST(Envy, MatchesOracle) {
    Rng rng(91);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4 + rng.below(9);
        const std::size_t k = 2 + rng.below(3);
        const auto g = gen::gnp(n, 0.5, rng.next());
        const auto x = random_partition(n, k, rng);
        const auto expected = oracle::envy(n, g.edges(), x.assignment(), k);
        const auto r = envy_audit(g, x);
        for (NodeId i = 0; i < n; ++i)
            EXPECT_EQ(static_cast<long>(r.per_node_envy[i]), expected[i]);
    }
}

TEST(CoreQuery, Sizes) {
    EXPECT_EQ(CoreQuery::balanced(1, 0, 8, 2).sizes, (std::vector<std::size_t>{4}));
    EXPECT_EQ(CoreQuery::balanced(1, 0, 9, 2).sizes, (std::vector<std::size_t>{4, 5}));
    EXPECT_EQ(CoreQuery::eps_balanced(1, 0, 12, 3, 0.5).sizes,
              (std::vector<std::size_t>{2, 3, 4, 5, 6}));
    EXPECT_EQ(CoreQuery::with_sizes(1, 0, {5, 2, 5}).sizes, (std::vector<std::size_t>{2, 5}));
    EXPECT_THROW(CoreQuery::with_sizes(-1, 0, {2}), DomainError);
}

TEST(Strictness, IntegralAndFractional) {
    EXPECT_FALSE(strictly_exceeds(3, 3.0, 0.0, 1));
    EXPECT_TRUE(strictly_exceeds(4, 3.0, 0.0, 1));
    EXPECT_FALSE(strictly_exceeds(3, 1.5, 0.0, 2));
    EXPECT_TRUE(strictly_exceeds(4, 1.5, 0.0, 2));
}

TEST(Certificate, CliqueBlocksMixedPartition) {
    const auto g = gen::cliques(2, 4);
    const auto x = mixed_two_k4();
    const NodeSet clique(8, {0, 1, 2, 3});
    const auto ok = verify_certificate(g, x, CoreQuery::with_sizes(2, 0, {4}), clique);
    EXPECT_TRUE(ok.valid);
    EXPECT_EQ(ok.slacks, (std::vector<double>{1, 1, 1, 1}));
    EXPECT_FALSE(verify_certificate(g, x, CoreQuery::with_sizes(3, 0, {4}), clique).valid);
    const auto wrong_size = verify_certificate(g, x, CoreQuery::with_sizes(2, 0, {3}), clique);
    EXPECT_FALSE(wrong_size.valid);
    EXPECT_FALSE(wrong_size.size_ok);
}

TEST(ExactSearch, FindsClique) {
    const auto g = gen::cliques(2, 4);
    const auto c = find_blocking_exact(g, mixed_two_k4(), CoreQuery::with_sizes(2, 0, {4}));
    ASSERT_TRUE(c);
    EXPECT_EQ(c->coalition, NodeSet(8, {0, 1, 2, 3}));
}

TEST(ExactSearch, AlignedCliquesInOneZeroCore) {
    const auto g = gen::cliques(2, 4);
    EXPECT_FALSE(find_blocking_exact(g, aligned_two_k4(), CoreQuery::balanced(1, 0, 8, 2)));
}

TEST(ExactSearch, FourCycleNone) {
    EXPECT_FALSE(find_blocking_exact(gen::cycle(4), Partition(2, {0, 0, 1, 1}),
                                     CoreQuery::with_sizes(1, 0, {2})));
}

TEST(ExactSearch, AlphaAtLeastNNone) {
    const auto g = gen::gnp(12, 0.6, 4);
    Rng rng(4);
    const auto x = random_partition(12, 3, rng);
    EXPECT_FALSE(find_blocking_exact(g, x, CoreQuery::eps_balanced(12, 0, 12, 3, 1.0)));
}

TEST(ExactSearch, RefusesLargeSpace) {
    const auto g = gen::complete(40);
    std::vector<PartId> assign(40);
    for (NodeId i = 0; i < 40; ++i) assign[i] = i % 2;
    const auto q = CoreQuery::with_sizes(0.5, 0, {20});
    EXPECT_GT(exact_search_work(g, Partition(2, assign), q), kExactSearchLimit);
    EXPECT_THROW(find_blocking_exact(g, Partition(2, assign), q), Refusal);
}

TEST(ExactSearch, MatchesOracle) {
    Rng rng(2024);
    int found = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 4 + rng.below(9);
        const std::size_t k = 2 + rng.below(3);
        const auto g = gen::gnp(n, 0.3 + 0.4 * rng.uniform01(), rng.next());
        const auto x = random_partition(n, k, rng);
        const double alpha = 0.5 * static_cast<double>(1 + rng.below(6));
        const double beta = static_cast<double>(rng.below(3));
        const auto q = CoreQuery::balanced(alpha, beta, n, k);
        const auto expected =
            oracle::smallest_blocking_set(n, g.edges(), x.assignment(), alpha, beta, q.sizes);
        const auto got = find_blocking_exact(g, x, q);
        ASSERT_EQ(got.has_value(), expected.has_value()) << "trial " << trial;
        if (!got) continue;
        ++found;
        EXPECT_TRUE(std::ranges::equal(got->coalition.members(), *expected));
        EXPECT_TRUE(verify_certificate(g, x, q, got->coalition).valid);
    }
    EXPECT_GT(found, 10);
}

TEST(Greedy, FindsCliqueCoalition) {
    const auto g = gen::cliques(2, 4);
    GreedyOptions opt;
    opt.restarts = 8;
    const auto c = find_blocking_greedy(g, mixed_two_k4(), CoreQuery::with_sizes(2, 0, {4}), opt);
    ASSERT_TRUE(c);
    EXPECT_TRUE(c->coalition == NodeSet(8, {0, 1, 2, 3}) || c->coalition == NodeSet(8, {4, 5, 6, 7}));
}

TEST(Greedy, ZeroRestarts) {
    GreedyOptions opt;
    opt.restarts = 0;
    EXPECT_FALSE(find_blocking_greedy(gen::cliques(2, 4), mixed_two_k4(),
                                      CoreQuery::with_sizes(2, 0, {4}), opt));
}

TEST(Greedy, SoundAgainstExact) {
    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 6 + rng.below(9);
        const std::size_t k = 2 + rng.below(2);
        const auto g = gen::gnp(n, 0.5, rng.next());
        const auto x = random_partition(n, k, rng);
        const auto q = CoreQuery::balanced(0.5 * static_cast<double>(1 + rng.below(4)),
                                           static_cast<double>(rng.below(2)), n, k);
        GreedyOptions opt;
        opt.seed = rng.next();
        const auto greedy = find_blocking_greedy(g, x, q, opt);
        const auto exact = find_blocking_exact(g, x, q);
        if (greedy) {
            EXPECT_TRUE(exact.has_value());
            EXPECT_TRUE(verify_certificate(g, x, q, greedy->coalition).valid);
        }
    }
}

TEST(Attack, AutomaticPicksExactWhenSmall) {
    const auto out = attack(gen::cliques(2, 4), mixed_two_k4(), CoreQuery::with_sizes(2, 0, {4}),
                            AttackMode::automatic);
    EXPECT_EQ(out.method, "exact");
    EXPECT_EQ(out.verdict, AttackVerdict::blocked);
    ASSERT_TRUE(out.certificate);
    const auto doc = certificate_to_json(*out.certificate);
    EXPECT_EQ(doc["coalition"], nlohmann::json({0, 1, 2, 3}));
}

TEST(Attack, ExactModeReportsRefusal) {
    const auto g = gen::complete(40);
    std::vector<PartId> assign(40);
    for (NodeId i = 0; i < 40; ++i) assign[i] = i % 2;
    const auto out = attack(g, Partition(2, assign), CoreQuery::with_sizes(0.5, 0, {20}),
                            AttackMode::exact);
    EXPECT_EQ(out.verdict, AttackVerdict::refused);
    EXPECT_FALSE(out.note.empty());
}

TEST(Attack, DesirablePartitionsResistBalancedCoreQuery) {
    // every node is below the degree threshold at this size, so any balanced
    // partition is desirable and must sit in the core
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 8 + rng.below(5);
        const auto g = gen::gnp(n, 0.5, rng.next());
        const auto x = random_partition(n, 2, rng);
        ASSERT_TRUE(check_desirability(g, x, Regime::balanced, 0.0).satisfied);
        const auto b = guarantee_bundle(Regime::balanced, g.max_degree(), 2, n, 0.0);
        EXPECT_FALSE(find_blocking_exact(g, x, CoreQuery::balanced(b.core_alpha, b.core_beta, n, 2)));
        EXPECT_LE(static_cast<double>(envy_audit(g, x).max_envy), b.ef_radius);
    }
}
