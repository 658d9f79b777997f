#include <gtest/gtest.h>

#include "support.hpp"
#include "tollbooth/engine.hpp"
#include "tollbooth/evaluator.hpp"
#include "tollbooth/generator.hpp"
#include "tollbooth/io.hpp"

using namespace toll;
using namespace toll::testing;

TEST(InstanceFile, ParsesIntegerAndRationalBudgets) {
    CactusInstance inst = load_instance(
        R"({"vertices": 3, "edges": [[0,1],[1,2],[2,0]],
            "buyers": [{"s":0,"t":1,"budget":4}, {"s":1,"t":2,"budget":"6/4"}]})");
    EXPECT_EQ(inst.graph.edge_count(), 3);
    ASSERT_EQ(inst.buyers.size(), 2u);
    EXPECT_EQ(inst.buyers[0].budget, 4);
    EXPECT_EQ(inst.buyers[1].budget, make_rational(3, 2));
}

TEST(InstanceFile, RoundTrip) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        CactusInstance inst = generate_instance({12, 5, 9, 0.5, seed});
        inst.buyers.push_back({0, 1, make_rational(7, 3)});
        std::string text = write_instance(inst);
        CactusInstance back = load_instance(text);
        EXPECT_EQ(back.graph.vertex_count, inst.graph.vertex_count);
        EXPECT_EQ(back.graph.edges, inst.graph.edges);
        ASSERT_EQ(back.buyers.size(), inst.buyers.size());
        for (std::size_t i = 0; i < inst.buyers.size(); ++i) {
            EXPECT_EQ(back.buyers[i].s, inst.buyers[i].s);
            EXPECT_EQ(back.buyers[i].t, inst.buyers[i].t);
            EXPECT_EQ(back.buyers[i].budget, inst.buyers[i].budget);
        }
        EXPECT_EQ(write_instance(back), text);
    }
}

TEST(InstanceFile, Errors) {
    EXPECT_THROW(parse_instance("{bad"), ParseError);
    EXPECT_THROW(parse_instance(R"({"edges": []})"), ParseError);
    EXPECT_THROW(parse_instance(R"({"vertices": 2, "edges": [[0]]})"), ParseError);
    EXPECT_THROW(parse_instance(R"({"vertices": 2, "edges": [[0,1]], "buyers": [{"s":0,"t":1,"budget":1.5}]})"),
                 ParseError);
    EXPECT_THROW(parse_instance(R"({"vertices": 2, "edges": [[0,1]], "buyers": [{"s":0,"t":1,"budget":"x"}]})"),
                 ParseError);
    EXPECT_THROW(load_instance(R"({"vertices": 4, "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]})"),
                 std::invalid_argument);
    EXPECT_THROW(load_instance(R"({"vertices": 2, "edges": [[0,1]], "buyers": [{"s":0,"t":5,"budget":1}]})"),
                 std::invalid_argument);
}

TEST(SolutionFile, RoundTripAndReevaluation) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        CactusInstance inst = random_instance(seed, 9, 5, 8);
        Solution sol = solve(inst);
        std::string text = write_solution(inst, sol);
        SolutionRecord rec = parse_solution(text);
        EXPECT_EQ(rec.prices, sol.prices);
        EXPECT_EQ(rec.revenue, sol.revenue);
        EXPECT_EQ(rec.level, sol.winning_level);
        EXPECT_EQ(rec.subproblem, subproblem_name(sol.subproblem));
        EXPECT_EQ(revenue(inst.graph, rec.prices, inst.buyers), rec.revenue);

        Allocation alloc = allocate(inst.graph, sol.prices, inst.buyers);
        ASSERT_EQ(rec.allocation.size(), alloc.purchases.size());
        Rational paid = 0;
        for (std::size_t i = 0; i < alloc.purchases.size(); ++i) {
            EXPECT_EQ(rec.allocation[i].bought, alloc.purchases[i].bought);
            EXPECT_EQ(rec.allocation[i].path, alloc.purchases[i].path);
            if (rec.allocation[i].bought) paid += rec.allocation[i].paid;
        }
        EXPECT_EQ(paid, rec.revenue);
    }
}

TEST(SolutionFile, RationalsInLowestTerms) {
    CactusInstance inst{path_graph(1), {{0, 1, make_rational(10, 4)}}};
    Solution sol = solve(inst);
    std::string text = write_solution(inst, sol);
    EXPECT_NE(text.find("\"5/2\""), std::string::npos);
    EXPECT_EQ(text.find("10/4"), std::string::npos);
}

TEST(Inspect, ListsEveryLevel) {
    CactusInstance inst = random_instance(3, 12, 4, 5);
    std::string text = inspect_json(inst);
    EXPECT_NE(text.find("\"levels\""), std::string::npos);
    EXPECT_NE(text.find("\"skeleton_edges\""), std::string::npos);
}
