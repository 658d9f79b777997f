#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"
#include "tollbooth/engine.hpp"
#include "tollbooth/evaluator.hpp"
#include "tollbooth/oracle.hpp"

using namespace toll;
using namespace toll::testing;

TEST(Engine, SingleEdgeEarnsTheBudget) {
    CactusInstance inst{path_graph(1), {{0, 1, make_rational(5)}}};
    Solution sol = solve(inst);
    EXPECT_EQ(sol.revenue, 5);
    ASSERT_EQ(sol.prices.size(), 1u);
    EXPECT_EQ(sol.prices[0], 5);
}

TEST(Engine, NoBuyers) {
    CactusInstance inst{cycle_graph(4), {}};
    Solution sol = solve(inst);
    EXPECT_EQ(sol.revenue, 0);
    EXPECT_EQ(sol.winning_level, 1);
    EXPECT_EQ(sol.subproblem, Subproblem::Skeleton);
    EXPECT_TRUE(sol.diagnostics.empty());
    for (const auto& p : sol.prices) EXPECT_EQ(p, 0);
}

// Segment lengths come from {3 * 3 / 2^t}, so the best affordable length is 9/4, not 3.
TEST(Engine, TriangleOneBuyer) {
    CactusInstance inst{triangle(), {{0, 1, make_rational(3)}}};
    Solution sol = solve(inst);
    Rational oracle = oracle_grid(inst, default_grid(inst));
    EXPECT_EQ(oracle, 3);
    EXPECT_EQ(sol.revenue, make_rational(9, 4));
    EXPECT_GE(sol.revenue * 2052 * sol.levels, oracle);
}

TEST(Engine, ReturnsBestCandidateAndItsRevenueIsReal) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        CactusInstance inst = random_instance(seed, 10, 5, 8);
        Solution sol = solve(inst);
        EXPECT_EQ(revenue(inst.graph, sol.prices, inst.buyers), sol.revenue) << seed;
        Rational best = 0;
        bool winner_found = false;
        for (const auto& diag : sol.diagnostics) {
            EXPECT_TRUE(diag.valid) << seed;
            EXPECT_EQ(diag.nonskeleton_revenue.has_value(), diag.level < sol.levels) << seed;
            for (const auto* candidate : {&diag.skeleton_revenue, &diag.nonskeleton_revenue})
                if (*candidate) best = std::max(best, **candidate);
            if (diag.level == sol.winning_level) {
                winner_found = true;
                const auto& chosen = sol.subproblem == Subproblem::Skeleton ? diag.skeleton_revenue
                                                                            : diag.nonskeleton_revenue;
                ASSERT_TRUE(chosen.has_value());
                EXPECT_EQ(*chosen, sol.revenue);
            }
        }
        EXPECT_EQ(best, sol.revenue) << seed;
        if (!sol.diagnostics.empty()) EXPECT_TRUE(winner_found) << seed;
    }
}

TEST(Engine, DeterministicAcrossRunsAndThreadCounts) {
    for (std::uint64_t seed = 20; seed <= 23; ++seed) {
        CactusInstance inst = random_instance(seed, 10, 5, 8);
        Solution first = solve(inst);
        Solution again = solve(inst);
        EngineOptions parallel;
        parallel.threads = 3;
        Solution threaded = solve(inst, parallel);
        for (const Solution* other : {&again, &threaded}) {
            EXPECT_EQ(other->prices, first.prices) << seed;
            EXPECT_EQ(other->revenue, first.revenue) << seed;
            EXPECT_EQ(other->winning_level, first.winning_level) << seed;
            EXPECT_EQ(other->subproblem, first.subproblem) << seed;
        }
    }
}

TEST(Engine, GuaranteeAgainstGridOracle) {
    for (std::uint64_t seed = 40; seed <= 49; ++seed) {
        CactusInstance inst = random_instance(seed, 8, 4, 6);
        Solution sol = solve(inst);
        Rational oracle = oracle_grid(inst, default_grid(inst));
        EXPECT_GE(sol.revenue * 2052 * sol.levels, oracle) << seed;
    }
}
