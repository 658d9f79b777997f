#pragma once

#include <cstdint>
#include <vector>

#include "tollbooth/cactus.hpp"
#include "tollbooth/decomposition.hpp"
#include "tollbooth/generator.hpp"
#include "tollbooth/rooted.hpp"

namespace toll::testing {

CactusGraph triangle();
CactusGraph path_graph(int edges);
CactusGraph cycle_graph(int length);

// Every simple path from s to t as an edge-id list (exponential; small graphs only).
std::vector<std::vector<int>> simple_paths(const CactusGraph& g, int s, int t);

// Same, over a raw edge list that need not be a cactus, skipping one edge.
// Edges lying on some simple path between two vertices of `ends`.
std::vector<int> edges_on_paths(const CactusGraph& g, const std::vector<int>& ends);

int count_simple_paths_raw(int vertex_count, const std::vector<Edge>& edges, int s, int t, int skip_edge);

Rational path_cost(const Prices& prices, const std::vector<int>& path);

// Random rooted instance: cactus with <= max_edges edges, <= max_demands demands.
RootedInstance random_rooted(std::uint64_t seed, int max_edges, int max_demands, long max_budget);

CactusInstance random_instance(std::uint64_t seed, int max_edges, int max_buyers, long max_budget);

Level make_level(const CactusGraph& g, std::vector<std::vector<int>> fragments, std::vector<int> borders,
                 std::vector<int> parents);
std::vector<int> all_vertices(const CactusGraph& g);
std::vector<int> all_edges(const CactusGraph& g);

// Whole graph at level 1 with the given borders, the given fragments at level 2.
Decomposition two_levels(const CactusGraph& g, std::vector<int> borders, std::vector<std::vector<int>> second);

}  // namespace toll::testing
