#pragma once

#include <string>
#include <vector>

#include "tollbooth/cactus.hpp"

namespace toll {

struct Level {
    std::vector<std::vector<int>> fragments;  // sorted edge-ids, ordered by smallest edge-id within a parent
    std::vector<int> fragment_of_edge;
    std::vector<int> border_vertices;  // sorted; vertices in >= 2 fragments of the next level (all at the last)
    std::vector<int> parent_fragment;  // index into the previous level, -1 at level 1
};

struct SplitRecord {
    int level = 0;       // 1-based level of the split fragment
    int fragment = 0;
    int parent_edges = 0;
    int children = 0;
    int shared_vertices = 0;  // vertices in > 1 child
    int k_used = 0;           // balance parameter that produced >= 2 phase-one parts
    int border_splits = 0;    // phase-one subparts that went through the pivot split
};

struct Decomposition {
    int k = 2;
    std::vector<Level> levels;  // levels[j-1] is D_j
    std::vector<SplitRecord> splits;

    int L() const { return static_cast<int>(levels.size()); }
    const Level& level(int j) const { return levels[j - 1]; }
};

struct BuyerLevels {
    std::vector<int> level_of_buyer;     // 1-based; 0 for buyers with s == t
    std::vector<int> fragment_of_buyer;  // lowest-indexed fragment at that level containing s and t
    std::vector<std::vector<int>> buyers_at_level;  // index j-1
};

int balance_parameter(int edge_count);

// Unweighted distance from vertex 0.
std::vector<int> hop_distance(const CactusGraph& g);

// Vertex of the edge set closest to vertex 0 (smaller id on ties).
int topmost_vertex(const CactusGraph& g, const std::vector<int>& hops, const std::vector<int>& edges);

std::vector<std::vector<int>> split_reduce_edges(const CactusGraph& g, const BCTree& t,
                                                 const std::vector<int>& fragment, int k);

// Always splits around the pivot component.
std::vector<std::vector<int>> pivot_split(const CactusGraph& g, const BCTree& t,
                                          const std::vector<int>& subpart,
                                          const std::vector<int>& old_borders);

// Pivot split only when the subpart holds more than 18k old border vertices.
std::vector<std::vector<int>> split_reduce_border(const CactusGraph& g, const BCTree& t,
                                                  const std::vector<int>& subpart,
                                                  const std::vector<int>& old_borders, int k);

Decomposition build_decomposition(const CactusGraph& g, const BCTree& t);

BuyerLevels assign_buyers(const Decomposition& d, const CactusGraph& g, const std::vector<Buyer>& buyers);

// Number of vertices lying in more than one of `parts`.
int count_shared_vertices(const CactusGraph& g, const std::vector<std::vector<int>>& parts);

struct DecompositionCheck {
    std::vector<std::string> violations;
    int max_fragment_borders = 0;  // largest level-j border count of a level-j fragment
    int max_children = 0;
    bool ok() const { return violations.empty(); }
};

// Structural invariants: cover, connectivity, associated pairs, child counts and sizes,
// shared vertices per split, border counts, border monotonicity.
DecompositionCheck check_decomposition(const CactusGraph& g, const BCTree& t, const Decomposition& d);

}  // namespace toll
