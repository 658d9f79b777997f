#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "tollbooth/rational.hpp"

namespace toll {

using Edge = std::pair<int, int>;

struct CactusGraph {
    int vertex_count = 0;
    std::vector<Edge> edges;
    // adjacency[v] = list of (neighbor, edge-id), sorted by edge-id
    std::vector<std::vector<std::pair<int, int>>> adjacency;

    int edge_count() const { return static_cast<int>(edges.size()); }
    int other_end(int edge, int v) const {
        return edges[edge].first == v ? edges[edge].second : edges[edge].first;
    }
};

struct Buyer {
    int s = 0;
    int t = 0;
    Rational budget;
};

struct CactusInstance {
    CactusGraph graph;
    std::vector<Buyer> buyers;
};

using Prices = std::vector<Rational>;

enum class CactusErrorKind { VertexOutOfRange, SelfLoop, ParallelEdge, Disconnected, NotCactus };

struct CactusError {
    CactusErrorKind kind;
    int edge = -1;  // offending edge-id, -1 when not tied to an edge
    std::string message;
};

std::string kind_name(CactusErrorKind kind);

std::variant<CactusGraph, CactusError> validate_cactus(int vertex_count,
                                                       const std::vector<Edge>& edges);

// Throws std::invalid_argument carrying the report when invalid.
CactusGraph make_cactus(int vertex_count, const std::vector<Edge>& edges);

enum class ComponentKind { Root, Bridge, Cycle };

struct Component {
    ComponentKind kind = ComponentKind::Root;
    // Cycle: edges[i] joins vertices[i] and vertices[(i+1) % size], vertices[0] is the top.
    // Bridge: one edge, vertices = {top, lower}. Root: no edges, vertices = {root}.
    std::vector<int> edges;
    std::vector<int> vertices;
    int top = 0;
    int parent = -1;
    std::vector<int> children;  // ordered by smallest contained edge-id
};

struct BCTree {
    int root_vertex = 0;
    int root_component = 0;
    std::vector<Component> components;
    std::vector<int> main_component;          // per vertex; root_component for the root vertex
    std::vector<int> component_of_edge;       // per edge
    std::vector<std::vector<int>> hanging;    // per vertex: components whose top is that vertex
    std::vector<Edge> associated_pairs;       // (smaller id, larger id)
    std::vector<int> partner;                 // per edge: associated edge or -1
    std::vector<int> depth;                   // unweighted DFS-tree depth per vertex
};

BCTree build_bc_tree(const CactusGraph& g, int root = 0);

struct EdgeVertexSet {
    std::vector<int> edges;     // sorted
    std::vector<int> vertices;  // sorted
};

EdgeVertexSet subtree_graph(const BCTree& t, int component);

// Connected edge subset of a cactus relabelled as its own cactus.
struct SubCactus {
    CactusGraph graph;
    std::vector<int> global_vertex;  // local -> global
    std::vector<int> global_edge;    // local -> global
    std::unordered_map<int, int> local_vertex;
    std::unordered_map<int, int> local_edge;
};

// Edges must form a connected subgraph (an empty set yields a single vertex `anchor`).
SubCactus make_subcactus(const CactusGraph& g, const std::vector<int>& edges, int anchor = -1);

// Connected components of the subgraph formed by `edges`, each as a sorted edge list;
// ordered by smallest edge-id.
std::vector<std::vector<int>> edge_components(const CactusGraph& g, const std::vector<int>& edges);

// Vertices touched by an edge set, sorted.
std::vector<int> vertices_of(const CactusGraph& g, const std::vector<int>& edges);

}  // namespace toll
