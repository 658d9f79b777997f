#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "tollbooth/cactus.hpp"

using namespace toll;
using namespace toll::testing;

namespace {

CactusErrorKind error_of(int n, const std::vector<Edge>& edges) {
    auto r = validate_cactus(n, edges);
    EXPECT_TRUE(std::holds_alternative<CactusError>(r));
    return std::get<CactusError>(r).kind;
}

}  // namespace

TEST(ValidateCactus, TriangleIsOneCycle) {
    auto r = validate_cactus(3, {{0, 1}, {1, 2}, {2, 0}});
    ASSERT_TRUE(std::holds_alternative<CactusGraph>(r));
    BCTree t = build_bc_tree(std::get<CactusGraph>(r));
    int cycles = 0;
    for (const auto& c : t.components) cycles += c.kind == ComponentKind::Cycle;
    EXPECT_EQ(cycles, 1);
}

TEST(ValidateCactus, RejectsK4) {
    EXPECT_EQ(error_of(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), CactusErrorKind::NotCactus);
}

TEST(ValidateCactus, TrianglesSharingVertexOrEdge) {
    EXPECT_TRUE(std::holds_alternative<CactusGraph>(
        validate_cactus(5, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}})));
    EXPECT_EQ(error_of(4, {{0, 1}, {1, 2}, {2, 0}, {1, 3}, {3, 0}}), CactusErrorKind::NotCactus);
}

TEST(ValidateCactus, StructuralErrors) {
    EXPECT_EQ(error_of(3, {{0, 1}, {1, 1}}), CactusErrorKind::SelfLoop);
    EXPECT_EQ(error_of(3, {{0, 1}, {1, 2}, {2, 1}}), CactusErrorKind::ParallelEdge);
    EXPECT_EQ(error_of(4, {{0, 1}, {2, 3}}), CactusErrorKind::Disconnected);
    EXPECT_EQ(error_of(2, {{0, 5}}), CactusErrorKind::VertexOutOfRange);
    auto r = validate_cactus(3, {{0, 1}, {1, 2}, {2, 1}});
    EXPECT_EQ(std::get<CactusError>(r).edge, 2);
}

TEST(BCTree, PathRootedAtZero) {
    BCTree t = build_bc_tree(path_graph(2), 0);
    ASSERT_EQ(t.components.size(), 3u);
    EXPECT_EQ(t.components[0].kind, ComponentKind::Root);
    int b01 = t.component_of_edge[0], b12 = t.component_of_edge[1];
    EXPECT_EQ(t.components[b01].parent, 0);
    EXPECT_EQ(t.components[b12].parent, b01);
    EXPECT_TRUE(t.associated_pairs.empty());
}

TEST(BCTree, TriangleAssociatedPair) {
    BCTree t = build_bc_tree(triangle(), 0);
    ASSERT_EQ(t.components.size(), 2u);
    EXPECT_EQ(t.components[1].kind, ComponentKind::Cycle);
    EXPECT_EQ(t.components[1].top, 0);
    EXPECT_EQ(t.components[1].parent, 0);
    ASSERT_EQ(t.associated_pairs.size(), 1u);
    EXPECT_EQ(t.associated_pairs[0], Edge(0, 2));
}

TEST(BCTree, TwoTrianglesAtRoot) {
    CactusGraph g = make_cactus(5, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}});
    BCTree t = build_bc_tree(g, 0);
    ASSERT_EQ(t.components.size(), 3u);
    EXPECT_EQ(t.components[1].parent, 0);
    EXPECT_EQ(t.components[2].parent, 0);
    EXPECT_EQ(t.components[0].children, (std::vector<int>{1, 2}));
    EXPECT_EQ(t.components[1].edges.front(), 0);
}

TEST(SubtreeGraph, Examples) {
    BCTree p = build_bc_tree(path_graph(2), 0);
    EXPECT_EQ(subtree_graph(p, 0).edges, (std::vector<int>{0, 1}));
    auto leaf = subtree_graph(p, p.component_of_edge[1]);
    EXPECT_EQ(leaf.edges, (std::vector<int>{1}));
    EXPECT_EQ(leaf.vertices, (std::vector<int>{1, 2}));

    CactusGraph g = make_cactus(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
    BCTree t = build_bc_tree(g, 0);
    EXPECT_EQ(subtree_graph(t, t.component_of_edge[0]).edges, (std::vector<int>{0, 1, 2, 3}));
}

TEST(BCTree, InvariantsOnRandomCacti) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        CactusInstance inst = random_instance(seed, 30, 1, 5);
        const CactusGraph& g = inst.graph;
        int root = static_cast<int>(seed % g.vertex_count);
        BCTree t = build_bc_tree(g, root);
        std::vector<int> seen(g.edge_count(), 0);
        std::vector<int> in_pair(g.edge_count(), 0);
        for (int c = 0; c < static_cast<int>(t.components.size()); ++c) {
            const auto& comp = t.components[c];
            for (int e : comp.edges) ++seen[e];
            if (comp.kind == ComponentKind::Root) continue;
            int expected_parent = comp.top == root ? t.root_component : t.main_component[comp.top];
            EXPECT_EQ(comp.parent, expected_parent);
            if (comp.kind == ComponentKind::Cycle) {
                std::vector<int> at_top;
                for (int e : comp.edges)
                    if (g.edges[e].first == comp.top || g.edges[e].second == comp.top) at_top.push_back(e);
                ASSERT_EQ(at_top.size(), 2u);
                EXPECT_EQ(t.partner[at_top[0]], at_top[1]);
            }
        }
        for (auto [a, b] : t.associated_pairs) {
            ++in_pair[a];
            ++in_pair[b];
        }
        for (int e = 0; e < g.edge_count(); ++e) {
            EXPECT_EQ(seen[e], 1);
            EXPECT_LE(in_pair[e], 1);
        }
        // each non-root vertex is non-top in exactly one component
        for (int v = 0; v < g.vertex_count; ++v) {
            int count = 0;
            for (const auto& comp : t.components)
                for (int x : comp.vertices)
                    if (x == v && comp.top != v) ++count;
            EXPECT_EQ(count, v == root ? 0 : 1);
        }
        // siblings: edge-disjoint subtree graphs sharing only the common top
        for (const auto& comp : t.components)
            for (std::size_t i = 0; i < comp.children.size(); ++i)
                for (std::size_t j = i + 1; j < comp.children.size(); ++j) {
                    auto a = subtree_graph(t, comp.children[i]);
                    auto b = subtree_graph(t, comp.children[j]);
                    std::vector<int> shared;
                    std::set_intersection(a.vertices.begin(), a.vertices.end(), b.vertices.begin(),
                                          b.vertices.end(), std::back_inserter(shared));
                    std::vector<int> shared_edges;
                    std::set_intersection(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
                                          std::back_inserter(shared_edges));
                    EXPECT_TRUE(shared_edges.empty());
                    if (t.components[comp.children[i]].top == t.components[comp.children[j]].top) {
                        EXPECT_EQ(shared, std::vector<int>{t.components[comp.children[i]].top});
                    }
                }
    }
}

// Random small graphs (cactus or not) against exhaustive simple-cycle reasoning:
// an edge (u,v) lies on >= 2 simple cycles iff >= 2 simple u-v paths avoid it.
TEST(ValidateCactus, AgreesWithPathEnumeration) {
    std::mt19937_64 rng(99);
    int accepted = 0, rejected = 0;
    for (int iter = 0; iter < 400; ++iter) {
        int n = std::uniform_int_distribution<int>(2, 7)(rng);
        std::set<Edge> chosen;
        for (int v = 1; v < n; ++v) {
            int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
            chosen.insert({u, v});
        }
        int extra = std::uniform_int_distribution<int>(0, 4)(rng);
        for (int i = 0; i < extra && static_cast<int>(chosen.size()) < 12; ++i) {
            int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
            int b = std::uniform_int_distribution<int>(0, n - 1)(rng);
            if (a != b) chosen.insert({std::min(a, b), std::max(a, b)});
        }
        std::vector<Edge> edges(chosen.begin(), chosen.end());
        bool cactus = true;
        for (int e = 0; e < static_cast<int>(edges.size()); ++e)
            if (count_simple_paths_raw(n, edges, edges[e].first, edges[e].second, e) >= 2) cactus = false;
        auto r = validate_cactus(n, edges);
        EXPECT_EQ(std::holds_alternative<CactusGraph>(r), cactus);
        if (!cactus) {
            const auto& err = std::get<CactusError>(r);
            EXPECT_EQ(err.kind, CactusErrorKind::NotCactus);
            EXPECT_GE(count_simple_paths_raw(n, edges, edges[err.edge].first, edges[err.edge].second, err.edge), 2);
        }
        (cactus ? accepted : rejected)++;
    }
    EXPECT_GT(accepted, 20);
    EXPECT_GT(rejected, 20);
}
