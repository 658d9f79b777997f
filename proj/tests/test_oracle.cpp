#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tollbooth/evaluator.hpp"
#include "tollbooth/oracle.hpp"
#include "tollbooth/rooted.hpp"

using namespace toll;
using namespace toll::testing;

namespace {

std::vector<Rational> ints(std::initializer_list<long> v) {
    std::vector<Rational> out;
    for (long x : v) out.push_back(Rational(x));
    return out;
}

CactusInstance as_instance(const RootedInstance& r) {
    CactusInstance inst{r.graph, {}};
    for (const auto& [dest, budget] : r.demands) inst.buyers.push_back({r.root, dest, budget});
    return inst;
}

// Price candidates for the rooted oracle: nonnegative depth differences plus a blocking price.
GridSpec difference_grid(const RootedInstance& r) {
    auto depths = candidate_depths(r).per_vertex.front();
    std::vector<Rational> values;
    for (const auto& a : depths)
        for (const auto& b : depths)
            if (a >= b) values.push_back(a - b);
    values.push_back(depths.back() + 1);
    return uniform_grid(r.graph.edge_count(), values);
}

}  // namespace

TEST(OracleRooted, Examples) {
    EXPECT_EQ(oracle_rooted({triangle(), 0, {{1, Rational(1)}, {1, Rational(3)}}, {}}), 3);
    EXPECT_EQ(oracle_rooted({path_graph(2), 0, {{1, Rational(3)}, {2, Rational(4)}}, {}}), 7);
    EXPECT_EQ(oracle_rooted({path_graph(2), 0, {}, {}}), 0);
}

TEST(OracleGrid, Examples) {
    CactusInstance tri{triangle(), {{0, 1, Rational(5)}}};
    EXPECT_EQ(oracle_grid(tri, uniform_grid(3, ints({0, 5, 6}))), 5);
    EXPECT_EQ(oracle_grid_bruteforce(tri, uniform_grid(3, ints({0, 5, 6}))), 5);
    EXPECT_EQ(oracle_grid(tri, uniform_grid(3, ints({0}))), 0);
    EXPECT_EQ(oracle_grid(tri, uniform_grid(3, ints({0, 5, 6})), {0, 1, 2}), 0);
}

TEST(OracleGrid, GuardTrips) {
    CactusInstance inst = random_instance(4, 12, 5, 8);
    EXPECT_THROW(oracle_grid_bruteforce(inst, default_grid(inst), {}, 10), TooLarge);
    OracleLimits tiny;
    tiny.max_work = 3;
    CactusInstance tri{triangle(), {{0, 1, Rational(5)}, {1, 2, Rational(3)}}};
    EXPECT_THROW(oracle_grid(tri, default_grid(tri), {}, tiny), TooLarge);
}

TEST(OracleGrid, DynamicProgramMatchesOdometer) {
    std::mt19937_64 rng(17);
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        CactusInstance inst = random_instance(seed, 7, 4, 6);
        std::vector<Rational> values{Rational(0)};
        int count = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int i = 0; i < count; ++i) values.push_back(make_rational(std::uniform_int_distribution<long>(1, 12)(rng), 2));
        GridSpec grid = uniform_grid(inst.graph.edge_count(), values);
        std::vector<int> zero;
        if (seed % 4 == 0) zero.push_back(0);
        EXPECT_EQ(oracle_grid(inst, grid, zero), oracle_grid_bruteforce(inst, grid, zero, 50'000'000)) << seed;
    }
}

TEST(OracleGrid, RefinementNeverDecreases) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        CactusInstance inst = random_instance(seed, 10, 5, 8);
        EXPECT_LE(oracle_grid(inst, budget_grid(inst)), oracle_grid(inst, default_grid(inst)));
    }
}

TEST(OracleRooted, MatchesSolverAndGridOracle) {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        RootedInstance r = random_rooted(seed, 7, 4, 6);
        Rational exact = oracle_rooted(r);
        EXPECT_EQ(solve_rooted(r).revenue, exact) << seed;
        if (r.graph.edge_count() <= 6) EXPECT_EQ(oracle_grid(as_instance(r), difference_grid(r)), exact) << seed;
        // spot check: random prices never beat the oracle
        Prices p(r.graph.edge_count());
        for (auto& x : p) x = Rational(std::uniform_int_distribution<long>(0, 7)(rng));
        EXPECT_LE(eval_rooted(r, p), exact);
    }
}
