#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mto/errors.hpp"
#include "mto/generators.hpp"
#include "mto/samplers.hpp"
#include "mto/spectral.hpp"
#include "oracles.hpp"

using namespace mto;

namespace {

using Edges = std::vector<std::pair<NodeId, NodeId>>;

Graph complete(std::size_t n) {
    Edges e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

Graph cycle(std::size_t n) {
    Edges e;
    for (NodeId i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, e);
}

Graph random_connected(std::size_t n, double p, std::uint64_t seed) {
    Rng rng(seed);
    while (true) {
        Edges e;
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = i + 1; j < n; ++j)
                if (uniform01(rng) < p) e.emplace_back(i, j);
        auto g = Graph::from_edges(n, e);
        if (g.is_connected()) return g;
    }
}

} // namespace

TEST(Conductance, BarbellElevenIsOneOverFiftySix) {
    auto cut = conductance_exact(barbell(11));
    EXPECT_EQ(cut.cut_edges, 1u);
    EXPECT_EQ(cut.denominator, 56u);
    EXPECT_NEAR(cut.phi, 1.0 / 56.0, 1e-15);
    EXPECT_EQ(cut.s_side.size(), 11u);
}

TEST(Conductance, CompleteGraphs) {
    auto k4 = conductance_exact(complete(4));
    EXPECT_EQ(k4.cut_edges * 5, k4.denominator * 4);
    auto k2 = conductance_exact(complete(2));
    EXPECT_DOUBLE_EQ(k2.phi, 1.0);
}

TEST(Conductance, AgreesWithSubsetOracle) {
    for (std::uint64_t s = 0; s < 25; ++s) {
        auto g = random_connected(5 + s % 6, 0.45, derive_seed(3, s));
        auto got = conductance_exact(g);
        auto want = oracle::conductance(g);
        EXPECT_EQ(got.cut_edges * want.den, want.num * got.denominator) << "seed " << s;
    }
    for (std::size_t m = 3; m <= 7; ++m) {
        auto want = oracle::conductance(barbell(m));
        auto got = conductance_exact(barbell(m));
        EXPECT_EQ(got.cut_edges * want.den, want.num * got.denominator) << "m " << m;
    }
}

TEST(Conductance, Errors) {
    EXPECT_THROW(conductance_exact(Graph::from_edges(3, Edges{{0, 1}})), Disconnected);
    EXPECT_THROW(conductance_exact(cycle(25)), TooLarge);
    EXPECT_THROW(conductance_exact(Graph::from_edges(1, Edges{})), DomainError);
}

TEST(CrossCutting, BarbellBridgeOnly) {
    auto g = barbell(11);
    auto bridge = barbell_bridge(11);
    EXPECT_TRUE(cross_cutting_oracle(g, bridge));
    EXPECT_FALSE(cross_cutting_oracle(g, EdgeKey::of(0, 1)));
    EXPECT_FALSE(cross_cutting_oracle(g, EdgeKey::of(12, 20)));
    EXPECT_EQ(cross_cutting_edges(g), (std::set<EdgeKey>{bridge}));
    EXPECT_THROW(cross_cutting_oracle(g, EdgeKey::of(0, 12)), EdgeAbsent);
}

TEST(CrossCutting, SingleEdge) {
    EXPECT_TRUE(cross_cutting_oracle(complete(2), EdgeKey::of(0, 1)));
}

TEST(CrossCutting, AgreesWithSubsetOracle) {
    for (std::uint64_t s = 0; s < 15; ++s) {
        auto g = random_connected(6 + s % 4, 0.5, derive_seed(8, s));
        EXPECT_EQ(cross_cutting_edges(g), oracle::cross_cutting(g)) << "seed " << s;
    }
    EXPECT_EQ(cross_cutting_edges(cycle(6)), oracle::cross_cutting(cycle(6)));
}

TEST(RpdDelta, IdentityAtTimeZero) {
    EXPECT_DOUBLE_EQ(rpd_delta(barbell(5), 0), 1.0);
    EXPECT_DOUBLE_EQ(rpd_delta(complete(4), 0), 1.0);
}

TEST(RpdDelta, CompleteGraphOneStep) {
    EXPECT_NEAR(rpd_delta(complete(4), 1), 1.0 / 3.0, 1e-12);
}

TEST(RpdDelta, MatchesMatrixPowerOracle) {
    for (auto g : {barbell(4), barbell(6), cycle(7), random_connected(9, 0.4, 5)}) {
        auto want = oracle::rpd_series(g, 60);
        auto got = rpd_delta_series(g, 60);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t t = 0; t < want.size(); ++t) {
            EXPECT_NEAR(got[t], want[t], 1e-9 * std::max(1.0, want[t])) << "t " << t;
        }
    }
}

TEST(RpdDelta, BarbellBelowUpperBound) {
    for (std::size_t m : {4u, 5u, 6u}) {
        auto g = barbell(m);
        auto cut = conductance_exact(g);
        const double c = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.min_degree());
        auto series = rpd_delta_series(g, 200);
        for (std::size_t t = 0; t < series.size(); ++t) {
            EXPECT_LE(series[t], delta_bounds(cut.phi, c, t).second + 1e-9) << "m " << m << " t " << t;
        }
    }
}

TEST(RpdDelta, ComputeBudget) {
    EXPECT_THROW(rpd_delta_series(cycle(2000), 1000000), ComputeBudget);
}

TEST(Slem, CompleteGraphIsOneThird) {
    auto r = slem_mixing_time(complete(4));
    EXPECT_NEAR(r.slem, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(r.mixing_time_estimate, 1.0 / std::log(3.0), 1e-9);
}

TEST(Slem, EvenCycleIsBipartite) {
    auto r = slem_mixing_time(cycle(4));
    EXPECT_NEAR(r.slem, 1.0, 1e-12);
    EXPECT_TRUE(std::isinf(r.mixing_time_estimate));
}

TEST(Slem, OddCycleClosedForm) {
    // Eigenvalues cos(2 pi k / n); the largest modulus below 1 is |cos(pi (n-1)/n)|.
    auto r = slem_mixing_time(cycle(7));
    EXPECT_NEAR(r.slem, std::cos(std::numbers::pi / 7.0), 1e-12);
}

TEST(Slem, SeriesAttached) {
    auto r = slem_mixing_time(barbell(4), 5);
    ASSERT_EQ(r.delta_series.size(), 5u);
    EXPECT_EQ(r.delta_series[0].first, 0u);
    EXPECT_DOUBLE_EQ(r.delta_series[0].second, 1.0);
}

TEST(Slem, RewiredBarbellMixesFaster) {
    auto g = barbell(11);
    QueryLedger access(g);
    SamplerConfig cfg;
    cfg.scheme = Scheme::MtoBoth;
    auto walk = run_to_coverage(cfg, access, 21, 1000000);
    auto star = walk.overlay.materialize(g);
    EXPECT_LT(slem_mixing_time(star).slem, slem_mixing_time(g).slem);
}

TEST(MixingBound, PublishedCoefficients) {
    const std::pair<double, double> cases[] = {
        {0.010, 46050.5}, {0.012, 31979.1}, {0.018, 14212.3}, {0.053, 1638.3}, {0.105, 416.6}};
    for (auto [phi, want] : cases) {
        auto b = mixing_bound(phi, 111, 10, 0.01);
        EXPECT_LT(std::abs(b.coefficient_per_log10 - want) / want, 1e-3) << phi;
    }
}

TEST(MixingBound, BarbellConstantAndBound) {
    auto b = mixing_bound(1.0 / 56.0, 111, 10, 0.01);
    EXPECT_NEAR(b.c, 22.2, 1e-12);
    // Independent form: smallest t with c (1 - phi^2/2)^t <= eps.
    const double rate = -std::log(1.0 - 0.5 / (56.0 * 56.0));
    EXPECT_NEAR(b.t_bound, std::log(22.2 / 0.01) / rate, 1e-6);
    EXPECT_NEAR(b.t_bound, b.coefficient_per_log10 * std::log10(22.2 / 0.01), 1e-6);
}

TEST(MixingBound, Errors) {
    EXPECT_THROW(mixing_bound(0.0, 10, 2, 0.1), DomainError);
    EXPECT_THROW(mixing_bound(1.0, 10, 2, 0.1), DomainError);
    EXPECT_THROW(mixing_bound(0.5, 10, 2, 0.0), DomainError);
}

TEST(DeltaBounds, Values) {
    auto [lo, hi] = delta_bounds(0.25, 4.0, 3);
    EXPECT_NEAR(lo, 0.125, 1e-15);
    EXPECT_NEAR(hi, 4.0 * std::pow(1 - 0.03125, 3), 1e-12);
}
