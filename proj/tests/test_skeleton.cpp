#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "support.hpp"
#include "tollbooth/decomposition.hpp"
#include "tollbooth/skeleton.hpp"

using namespace toll;
using namespace toll::testing;

TEST(BuildSkeleton, SingleBorderGivesEmptySkeleton) {
    CactusGraph g = path_graph(2);
    BCTree t = build_bc_tree(g);
    auto d = two_levels(g, {1}, {{0}, {1}});
    auto sk = build_skeleton(g, t, d, 1);
    EXPECT_TRUE(sk.skeleton_edges.empty());
    ASSERT_EQ(sk.components.size(), 2u);
    for (const auto& c : sk.components) EXPECT_EQ(c.anchor, 1);
    EXPECT_EQ(sk.repr, (std::vector<int>{1, 1, 1}));
}

TEST(BuildSkeleton, PathBetweenBorders) {
    CactusGraph g = path_graph(3);
    BCTree t = build_bc_tree(g);
    auto d = two_levels(g, {0, 3}, {{0}, {1, 2}});
    auto sk = build_skeleton(g, t, d, 1);
    EXPECT_EQ(sk.skeleton_edges, (std::vector<int>{0, 1, 2}));
    EXPECT_TRUE(sk.components.empty());
    auto segs = compress_segments(g, d, sk);
    ASSERT_EQ(segs.segments.size(), 1u);
    EXPECT_EQ(segs.segments[0].l, 0);
    EXPECT_EQ(segs.segments[0].r, 3);
    EXPECT_FALSE(segs.segments[0].cyclic);
    EXPECT_EQ(segs.segments[0].path_vertices, (std::vector<int>{0, 1, 2, 3}));
}

TEST(BuildSkeleton, TriangleWithPendant) {
    CactusGraph g = make_cactus(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
    BCTree t = build_bc_tree(g);
    auto d = two_levels(g, {0, 3}, {{0, 1, 2}, {3}});
    auto sk = build_skeleton(g, t, d, 1);
    EXPECT_EQ(sk.skeleton_edges, (std::vector<int>{0, 1, 2, 3}));
    EXPECT_EQ(sk.skeleton_edges, edges_on_paths(g, {0, 3}));
}

TEST(BuildSkeleton, PendantAwayFromBordersIsNotSkeleton) {
    // square 0-1-2-3 with pendant 1-4; borders 0 and 2
    CactusGraph g = make_cactus(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 4}});
    BCTree t = build_bc_tree(g);
    auto d = two_levels(g, {0, 2}, {{0, 3}, {1, 2, 4}});
    auto sk = build_skeleton(g, t, d, 1);
    EXPECT_EQ(sk.skeleton_edges, (std::vector<int>{0, 1, 2, 3}));
    ASSERT_EQ(sk.components.size(), 1u);
    EXPECT_EQ(sk.components[0].edges, (std::vector<int>{4}));
    EXPECT_EQ(sk.components[0].anchor, 1);
    EXPECT_EQ(sk.repr[4], 1);
    auto segs = compress_segments(g, d, sk);
    ASSERT_EQ(segs.segments.size(), 1u);
    EXPECT_TRUE(segs.segments[0].cyclic);
}

TEST(CompressSegments, SquareWithTwoOppositeBorders) {
    CactusGraph g = cycle_graph(4);
    BCTree t = build_bc_tree(g);
    auto d = two_levels(g, {0, 2}, {{0, 1}, {2, 3}});
    auto sk = build_skeleton(g, t, d, 1);
    auto segs = compress_segments(g, d, sk);
    ASSERT_EQ(segs.segments.size(), 1u);
    EXPECT_TRUE(segs.segments[0].cyclic);
    EXPECT_EQ(segs.segments[0].l, 0);
    EXPECT_EQ(segs.segments[0].r, 2);
}

TEST(CompressSegments, SquareWithThreeBorders) {
    CactusGraph g = cycle_graph(4);
    BCTree t = build_bc_tree(g);
    auto d = two_levels(g, {0, 1, 2}, {{0}, {1}, {2, 3}});
    auto sk = build_skeleton(g, t, d, 1);
    auto segs = compress_segments(g, d, sk);
    ASSERT_EQ(segs.segments.size(), 3u);
    for (const auto& s : segs.segments) EXPECT_FALSE(s.cyclic);
    EXPECT_EQ(segs.segments[2].edges, (std::vector<int>{2, 3}));
}

TEST(FragmentSkeleton, WholeSkeletonHasNoOuterExtensions) {
    CactusGraph g = cycle_graph(4);
    BCTree t = build_bc_tree(g);
    auto d = two_levels(g, {0, 1, 2}, {{0}, {1}, {2, 3}});
    auto sk = build_skeleton(g, t, d, 1);
    auto segs = compress_segments(g, d, sk);
    auto fs = fragment_skeleton(g, t, d, sk, segs, 0);
    EXPECT_EQ(fs.inner_segments.size(), 3u);
    EXPECT_TRUE(fs.outer_extensions.empty());
}

TEST(FragmentSkeleton, SplitCycleGivesEachSideTheOtherArc) {
    CactusGraph g = cycle_graph(4);
    BCTree t = build_bc_tree(g);
    Decomposition d;
    d.levels.push_back(make_level(g, {all_edges(g)}, {0, 2}, {-1}));
    d.levels.push_back(make_level(g, {{0, 1}, {2, 3}}, {0, 1, 2, 3}, {0, 0}));
    d.levels.push_back(make_level(g, {{0}, {1}, {2}, {3}}, {0, 1, 2, 3}, {0, 0, 1, 1}));
    auto sk = build_skeleton(g, t, d, 2);
    auto segs = compress_segments(g, d, sk);
    ASSERT_EQ(segs.segments.size(), 4u);
    auto a = fragment_skeleton(g, t, d, sk, segs, 0);
    auto b = fragment_skeleton(g, t, d, sk, segs, 1);
    EXPECT_EQ(a.inner_segments, (std::vector<int>{0, 1}));
    ASSERT_EQ(a.outer_extensions.size(), 1u);
    EXPECT_EQ(a.outer_extensions[0].u, 0);
    EXPECT_EQ(a.outer_extensions[0].v, 2);
    EXPECT_EQ(a.outer_extensions[0].segments, (std::vector<int>{3, 2}));
    ASSERT_EQ(b.outer_extensions.size(), 1u);
    EXPECT_EQ(b.outer_extensions[0].segments, (std::vector<int>{0, 1}));
}

// Enumeration checks on small random cacti with their real decompositions.
TEST(SkeletonProperties, MatchEnumerationOnSmallInstances) {
    int checked_levels = 0;
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        CactusInstance inst = random_instance(seed, 12, 5, 8);
        const auto& g = inst.graph;
        BCTree t = build_bc_tree(g);
        auto d = build_decomposition(g, t);
        auto levels = assign_buyers(d, g, inst.buyers);
        for (int j = 1; j <= d.L(); ++j) {
            ++checked_levels;
            auto sk = build_skeleton(g, t, d, j);
            const auto& borders = d.level(j).border_vertices;
            ASSERT_EQ(sk.skeleton_edges, edges_on_paths(g, borders)) << "seed " << seed << " level " << j;
            std::vector<int> skv;
            for (int v = 0; v < g.vertex_count; ++v)
                if (sk.is_skeleton_vertex[v]) skv.push_back(v);
            for (int e : edges_on_paths(g, skv)) EXPECT_TRUE(sk.is_skeleton_edge[e]) << seed;
            for (const auto& c : sk.components) {
                int on = 0;
                for (int v : vertices_of(g, c.edges)) on += sk.is_skeleton_vertex[v];
                EXPECT_EQ(on, sk.skeleton_edges.empty() ? 0 : 1);
            }
            // every s-t path visits s, repr(s), repr(t), t in this order
            for (int i : levels.buyers_at_level[j - 1]) {
                const auto& b = inst.buyers[i];
                for (const auto& p : simple_paths(g, b.s, b.t)) {
                    std::vector<int> walk{b.s};
                    for (int e : p) walk.push_back(g.other_end(e, walk.back()));
                    auto at = [&](int v) { return std::find(walk.begin(), walk.end(), v) - walk.begin(); };
                    EXPECT_LE(at(sk.repr[b.s]), at(sk.repr[b.t])) << seed;
                    EXPECT_LT(at(sk.repr[b.t]), static_cast<long>(walk.size())) << seed;
                }
            }
            if (sk.skeleton_edges.empty()) continue;
            auto segs = compress_segments(g, d, sk);
            std::vector<int> uses(g.edge_count(), 0);
            std::vector<std::set<int>> owners(g.vertex_count);
            for (int s = 0; s < static_cast<int>(segs.segments.size()); ++s) {
                for (int e : segs.segments[s].edges) {
                    ++uses[e];
                    owners[g.edges[e].first].insert(s);
                    owners[g.edges[e].second].insert(s);
                }
            }
            for (int e = 0; e < g.edge_count(); ++e) EXPECT_EQ(uses[e], sk.is_skeleton_edge[e] ? 1 : 0);
            for (int v = 0; v < g.vertex_count; ++v)
                if (owners[v].size() > 1)
                    for (int s : owners[v]) EXPECT_TRUE(segs.segments[s].l == v || segs.segments[s].r == v) << seed;
            for (int v : borders) {
                bool endpoint = false;
                for (const auto& s : segs.segments) endpoint |= s.l == v || s.r == v;
                EXPECT_TRUE(endpoint) << seed;
            }
            // inner segments and outer extensions partition the fragment skeleton
            for (int f = 0; f < static_cast<int>(d.level(j).fragments.size()); ++f) {
                auto fs = fragment_skeleton(g, t, d, sk, segs, f);
                std::vector<int> fv;
                for (int v : vertices_of(g, d.level(j).fragments[f]))
                    if (sk.is_skeleton_vertex[v]) fv.push_back(v);
                auto expected = edges_on_paths(g, fv);
                std::vector<int> got;
                for (int s : fs.inner_segments) {
                    for (int e : segs.segments[s].edges) {
                        EXPECT_EQ(d.level(j).fragment_of_edge[e], f);
                        got.push_back(e);
                    }
                }
                for (const auto& o : fs.outer_extensions)
                    for (int s : o.segments)
                        for (int e : segs.segments[s].edges) {
                            EXPECT_NE(d.level(j).fragment_of_edge[e], f);
                            got.push_back(e);
                        }
                std::sort(got.begin(), got.end());
                EXPECT_TRUE(std::adjacent_find(got.begin(), got.end()) == got.end()) << seed;
                EXPECT_EQ(got, expected) << "seed " << seed << " level " << j << " fragment " << f;
            }
        }
    }
    EXPECT_GT(checked_levels, 150);
}

// The segment count per fragment is O(k) without a stated constant; the observed worst case
// on this corpus is 13 segments at k = 3, so 8k leaves headroom.
TEST(SkeletonProperties, SegmentsPerFragmentLinearInK) {
    double worst = 0;
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        GeneratorParams p;
        p.edges = static_cast<int>(20 + (seed * 37) % 181);
        p.buyers = 0;
        p.cycle_prob = (seed % 5) / 4.0;
        p.seed = seed;
        CactusInstance inst = generate_instance(p);
        BCTree t = build_bc_tree(inst.graph);
        auto d = build_decomposition(inst.graph, t);
        for (int j = 1; j <= d.L(); ++j) {
            auto sk = build_skeleton(inst.graph, t, d, j);
            if (sk.skeleton_edges.empty()) continue;
            auto segs = compress_segments(inst.graph, d, sk);
            for (int f = 0; f < static_cast<int>(d.level(j).fragments.size()); ++f) {
                auto fs = fragment_skeleton(inst.graph, t, d, sk, segs, f);
                int count = static_cast<int>(fs.inner_segments.size() + fs.outer_extensions.size());
                EXPECT_LE(count, 8 * d.k) << "seed " << seed;
                worst = std::max(worst, static_cast<double>(count) / d.k);
            }
        }
    }
    RecordProperty("worst_segments_per_k", std::to_string(worst));
    std::printf("worst (inner + outer) / k = %.3f\n", worst);
}
