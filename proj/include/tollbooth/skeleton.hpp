#pragma once

#include <vector>

#include "tollbooth/cactus.hpp"
#include "tollbooth/decomposition.hpp"

namespace toll {

struct NonSkeletonComponent {
    std::vector<int> edges;  // sorted
    int anchor = 0;          // its only skeleton vertex
    int fragment = 0;        // index into level j+1
};

struct SkeletonLevel {
    int level = 0;
    std::vector<int> border_vertices;        // sorted
    std::vector<int> skeleton_edges;         // sorted
    std::vector<char> is_skeleton_edge;      // per edge
    std::vector<char> is_skeleton_vertex;    // per vertex
    std::vector<NonSkeletonComponent> components;
    std::vector<int> component_of_edge;      // -1 on skeleton edges
    std::vector<int> repr;                   // per vertex
};

struct Segment {
    std::vector<int> edges;  // sorted
    int l = 0;               // l < r
    int r = 0;
    bool cyclic = false;
    int level = 0;
    int fragment = 0;        // the level-j fragment holding it
    // Acyclic segments only: the path from l to r.
    std::vector<int> path_vertices;
    std::vector<int> path_edges;
};

struct SegmentSet {
    std::vector<Segment> segments;  // ordered by smallest edge-id
    std::vector<int> segment_of_edge;  // -1 off the skeleton
};

struct OuterExtension {
    std::vector<int> segments;  // in path order from u to v
    int u = 0;                  // u < v
    int v = 0;
    int cycle = 0;              // block-tree component (rooted at vertex 0) of the split cycle
};

struct FragmentSkeleton {
    int fragment = 0;
    std::vector<int> inner_segments;  // indices into SegmentSet::segments
    std::vector<OuterExtension> outer_extensions;
};

// `t` must be rooted at vertex 0.
SkeletonLevel build_skeleton(const CactusGraph& g, const BCTree& t, const Decomposition& d, int j);

// Fixpoint of the two compression rules. Parallel edges are merged only inside one level-j
// fragment, so every segment lies in a single fragment.
SegmentSet compress_segments(const CactusGraph& g, const Decomposition& d, const SkeletonLevel& sk);

FragmentSkeleton fragment_skeleton(const CactusGraph& g, const BCTree& t, const Decomposition& d,
                                   const SkeletonLevel& sk, const SegmentSet& segs, int fragment);

}  // namespace toll
