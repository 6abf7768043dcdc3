#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "mto/access.hpp"
#include "mto/errors.hpp"
#include "mto/generators.hpp"

using namespace mto;

TEST(QueryLedger, RepeatQueryChargedOnce) {
    auto g = barbell(11);
    QueryLedger ledger(g);
    ledger.query(4);
    ledger.query(4);
    EXPECT_EQ(ledger.unique_count(), 1u);
    ledger.query(5);
    EXPECT_EQ(ledger.unique_count(), 2u);
    EXPECT_TRUE(ledger.is_cached(4));
    EXPECT_EQ(ledger.cached(6), nullptr);
}

TEST(QueryLedger, BridgeNodeHasElevenNeighbours) {
    auto g = barbell(11);
    QueryLedger ledger(g);
    const auto& view = ledger.query(barbell_bridge(11).lo);
    EXPECT_EQ(view.neighbors.size(), 11u);
    EXPECT_EQ(view.attribute("degree"), 11.0);
}

TEST(QueryLedger, UnknownNodeRejected) {
    auto g = barbell(3);
    QueryLedger ledger(g);
    EXPECT_THROW(ledger.query(6), NodeNotFound);
    EXPECT_EQ(ledger.unique_count(), 0u);
}

TEST(QueryLedger, BudgetExhaustion) {
    auto g = barbell(3);
    QueryLedger ledger(g, AccessOptions{true, 2});
    ledger.query(0);
    ledger.query(1);
    ledger.query(0);
    EXPECT_THROW(ledger.query(2), BudgetExhausted);
    EXPECT_EQ(ledger.unique_count(), 2u);
}

TEST(QueryLedger, AttributesAttached) {
    auto g = barbell(3);
    AttributeTable table{{2, {{"age", 31.0}}}};
    QueryLedger ledger(g, {}, &table);
    EXPECT_EQ(ledger.query(2).attribute("age"), 31.0);
    EXPECT_FALSE(ledger.query(1).attribute("age").has_value());
}

TEST(QueryLedger, ConcurrentQueriesCountEachNodeOnce) {
    auto g = barbell(11);
    QueryLedger ledger(g);
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t) {
        pool.emplace_back([&] {
            for (int rep = 0; rep < 50; ++rep)
                for (NodeId v = 0; v < 22; ++v) ledger.query(v);
        });
    }
    for (auto& t : pool) t.join();
    EXPECT_EQ(ledger.unique_count(), 22u);
}

TEST(QueryLedger, StateLine) {
    auto g = barbell(3);
    QueryLedger ledger(g);
    ledger.query(1);
    std::ostringstream out;
    ledger.write_state(out);
    EXPECT_EQ(out.str(), "unique_queries=1\n");
}

TEST(RandomNode, SingleNodeGraph) {
    auto g = Graph::from_edges(1, std::vector<std::pair<NodeId, NodeId>>{});
    QueryLedger ledger(g);
    Rng rng(1);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(ledger.random_node(rng), 0u);
}

TEST(RandomNode, UniformOverBarbell) {
    auto g = barbell(11);
    QueryLedger ledger(g);
    Rng rng(2024);
    std::vector<int> counts(22, 0);
    for (int i = 0; i < 22000; ++i) ++counts[ledger.random_node(rng)];
    const double sigma = std::sqrt(22000.0 * (1.0 / 22) * (21.0 / 22));
    double chi2 = 0.0;
    for (int c : counts) {
        EXPECT_LT(std::abs(c - 1000.0), 5 * sigma);
        chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
    }
    // 21 degrees of freedom; 99.9% quantile is about 46.8.
    EXPECT_LT(chi2, 46.8);
    EXPECT_EQ(ledger.unique_count(), 0u);
}

TEST(RandomNode, HiddenIdSpace) {
    auto g = barbell(3);
    QueryLedger ledger(g, AccessOptions{false, std::nullopt});
    Rng rng(1);
    EXPECT_THROW(ledger.random_node(rng), CapabilityUnavailable);
}

TEST(EdgeList, ReciprocalModeKeepsMutualPairsOnly) {
    std::istringstream in("a b\nb a\na c\n");
    auto g = load_edgelist(in, EdgeListMode::ReciprocalDirected);
    EXPECT_EQ(g.node_count(), 2u);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(g.label(0), "a");
    EXPECT_EQ(g.label(1), "b");
}

TEST(EdgeList, UndirectedModeMergesDirections) {
    std::istringstream in("# comment\n1 2\n2 1\n\n2 3\n3 3\n");
    auto g = load_edgelist(in, EdgeListMode::Undirected);
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_EQ(g.edge_count(), 2u);
}

TEST(EdgeList, LineOrderDoesNotMatter) {
    std::istringstream a("10 2\n2 7\n7 10\n7 30\n");
    std::istringstream b("7 30\n7 10\n2 7\n10 2\n");
    auto ga = load_edgelist(a, EdgeListMode::Undirected);
    auto gb = load_edgelist(b, EdgeListMode::Undirected);
    EXPECT_EQ(ga.edges(), gb.edges());
    // Numeric ordering: 2 < 7 < 10 < 30.
    EXPECT_EQ(ga.label(0), "2");
    EXPECT_EQ(ga.label(2), "10");
}

TEST(EdgeList, MalformedLineReportsLineNumber) {
    std::istringstream in("1 2\n# fine\nx y z\n");
    try {
        load_edgelist(in, EdgeListMode::Undirected);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(EdgeList, NoEdgesIsEmptyGraph) {
    std::istringstream in("# nothing\n");
    EXPECT_THROW(load_edgelist(in, EdgeListMode::Undirected), EmptyGraph);
    std::istringstream one_way("1 2\n");
    EXPECT_THROW(load_edgelist(one_way, EdgeListMode::ReciprocalDirected), EmptyGraph);
}

TEST(Attributes, MatchedByLabel) {
    std::istringstream edges("100 200\n200 300\n");
    auto g = load_edgelist(edges, EdgeListMode::Undirected);
    std::istringstream attrs("200 age 40\n300 age 22.5\n");
    auto table = load_attributes(attrs, g);
    EXPECT_EQ(table.at(1).at("age"), 40.0);
    EXPECT_EQ(table.at(2).at("age"), 22.5);
    std::istringstream bad("999 age 1\n");
    EXPECT_THROW(load_attributes(bad, g), NodeNotFound);
}
