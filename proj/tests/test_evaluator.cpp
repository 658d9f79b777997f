#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tollbooth/evaluator.hpp"

using namespace toll;
using namespace toll::testing;

namespace {
Prices ints(std::initializer_list<long> v) {
    Prices p;
    for (long x : v) p.push_back(Rational(x));
    return p;
}
}  // namespace

TEST(Distance, Examples) {
    CactusGraph t = triangle();
    EXPECT_EQ(distance(t, ints({0, 0, 0}), 0, 1), 0);
    EXPECT_EQ(distance(t, ints({5, 0, 0}), 0, 1), 0);
    CactusGraph p = path_graph(3);
    EXPECT_EQ(distance(p, ints({1, 2, 4}), 0, 3), 7);
}

TEST(Allocate, TriangleExamples) {
    CactusGraph t = triangle();
    auto a = allocate(t, ints({5, 6, 6}), {{0, 1, Rational(5)}});
    ASSERT_TRUE(a.purchases[0].bought);
    EXPECT_EQ(a.purchases[0].paid, 5);
    EXPECT_EQ(a.purchases[0].path, std::vector<int>{0});
    auto b = allocate(t, ints({5, 6, 6}), {{0, 1, Rational(4)}});
    EXPECT_FALSE(b.purchases[0].bought);
    EXPECT_EQ(b.total_revenue, 0);
}

TEST(Allocate, SharedEdgeSoldToBoth) {
    CactusGraph p = path_graph(2);
    auto a = allocate(p, ints({3, 0}), {{0, 1, Rational(3)}, {0, 2, Rational(4)}});
    EXPECT_EQ(a.total_revenue, 6);
}

TEST(Allocate, TrivialBuyersRecordedAsEmptyPurchase) {
    CactusGraph p = path_graph(2);
    auto a = allocate(p, ints({3, 1}), {{1, 1, Rational(3)}, {0, 2, Rational(0)}});
    EXPECT_TRUE(a.purchases[0].bought);
    EXPECT_TRUE(a.purchases[1].bought);
    EXPECT_TRUE(a.purchases[1].path.empty());
    EXPECT_EQ(a.total_revenue, 0);
}

TEST(Allocate, LexicographicTieBreakWithZeroDetours) {
    // square 0-1-2-3-0: both arcs cost 2 from 0 to 2; the smaller edge sequence wins
    CactusGraph sq = cycle_graph(4);
    auto a = allocate(sq, ints({1, 1, 1, 1}), {{0, 2, Rational(5)}});
    EXPECT_EQ(a.purchases[0].path, (std::vector<int>{0, 1}));
    // zero-price dead end: edge 0 is tight towards 1 but the cheap route is the other arc
    auto b = allocate(sq, ints({0, 7, 0, 0}), {{0, 2, Rational(5)}});
    EXPECT_EQ(b.purchases[0].path, (std::vector<int>{3, 2}));
}

TEST(RevenueRestricted, SubsetsAdd) {
    CactusInstance inst = random_instance(5, 10, 5, 8);
    Prices p(inst.graph.edge_count(), Rational(1));
    std::vector<int> all, even, odd;
    for (int i = 0; i < static_cast<int>(inst.buyers.size()); ++i) {
        all.push_back(i);
        (i % 2 ? odd : even).push_back(i);
    }
    EXPECT_EQ(revenue_restricted(inst.graph, p, inst.buyers, all), allocate(inst.graph, p, inst.buyers).total_revenue);
    EXPECT_EQ(revenue_restricted(inst.graph, p, inst.buyers, {}), 0);
    EXPECT_EQ(revenue_restricted(inst.graph, p, inst.buyers, even) + revenue_restricted(inst.graph, p, inst.buyers, odd),
              revenue(inst.graph, p, inst.buyers));
}

// Envy-freeness, tie independence and monotonicity by exhaustive path enumeration.
TEST(Allocate, EnvyFreeByEnumeration) {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        CactusInstance inst = random_instance(seed, 12, 5, 8);
        const auto& g = inst.graph;
        Prices p(g.edge_count());
        for (auto& x : p) x = make_rational(std::uniform_int_distribution<long>(0, 8)(rng), 2);
        auto a = allocate(g, p, inst.buyers);
        Rational total = 0;
        for (std::size_t i = 0; i < inst.buyers.size(); ++i) {
            const Buyer& b = inst.buyers[i];
            auto paths = simple_paths(g, b.s, b.t);
            Rational cheapest = path_cost(p, paths.front());
            for (const auto& path : paths) cheapest = std::min(cheapest, path_cost(p, path));
            const Purchase& pu = a.purchases[i];
            if (pu.bought) {
                EXPECT_EQ(path_cost(p, pu.path), pu.paid);
                EXPECT_EQ(pu.paid, cheapest);
                EXPECT_LE(pu.paid, b.budget);
                // the recorded path is the lexicographic minimum among cheapest ones
                std::vector<int> best;
                for (const auto& path : paths)
                    if (path_cost(p, path) == cheapest && (best.empty() || path < best)) best = path;
                EXPECT_EQ(pu.path, best);
            } else {
                EXPECT_GT(cheapest, b.budget);
            }
            total += pu.paid;
        }
        EXPECT_EQ(total, a.total_revenue);
        // raising one price never lowers any distance
        int e = static_cast<int>(seed % g.edge_count());
        Prices raised = p;
        raised[e] += 1;
        for (const auto& b : inst.buyers) EXPECT_LE(distance(g, p, b.s, b.t), distance(g, raised, b.s, b.t));
    }
}
