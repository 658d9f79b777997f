#include "support.hpp"

#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace toll::testing {

CactusGraph triangle() { return make_cactus(3, {{0, 1}, {1, 2}, {2, 0}}); }

CactusGraph path_graph(int edges) {
    std::vector<Edge> list;
    for (int i = 0; i < edges; ++i) list.push_back({i, i + 1});
    return make_cactus(edges + 1, list);
}

CactusGraph cycle_graph(int length) {
    std::vector<Edge> list;
    for (int i = 0; i < length; ++i) list.push_back({i, (i + 1) % length});
    return make_cactus(length, list);
}

std::vector<std::vector<int>> simple_paths(const CactusGraph& g, int s, int t) {
    std::vector<std::vector<int>> out;
    std::vector<char> on(g.vertex_count, 0);
    std::vector<int> path;
    std::function<void(int)> go = [&](int u) {
        if (u == t) {
            out.push_back(path);
            return;
        }
        on[u] = 1;
        for (auto [w, e] : g.adjacency[u]) {
            if (on[w]) continue;
            path.push_back(e);
            go(w);
            path.pop_back();
        }
        on[u] = 0;
    };
    go(s);
    return out;
}

std::vector<int> edges_on_paths(const CactusGraph& g, const std::vector<int>& ends) {
    std::set<int> out;
    for (std::size_t a = 0; a < ends.size(); ++a)
        for (std::size_t b = a + 1; b < ends.size(); ++b)
            for (const auto& p : simple_paths(g, ends[a], ends[b])) out.insert(p.begin(), p.end());
    return {out.begin(), out.end()};
}

int count_simple_paths_raw(int vertex_count, const std::vector<Edge>& edges, int s, int t, int skip_edge) {
    std::vector<std::vector<std::pair<int, int>>> adj(vertex_count);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        if (e == skip_edge) continue;
        adj[edges[e].first].push_back({edges[e].second, e});
        adj[edges[e].second].push_back({edges[e].first, e});
    }
    std::vector<char> on(vertex_count, 0);
    int count = 0;
    std::function<void(int)> go = [&](int u) {
        if (u == t) {
            ++count;
            return;
        }
        on[u] = 1;
        for (auto [w, e] : adj[u])
            if (!on[w]) go(w);
        on[u] = 0;
    };
    go(s);
    return count;
}

Rational path_cost(const Prices& prices, const std::vector<int>& path) {
    Rational total = 0;
    for (int e : path) total += prices[e];
    return total;
}

RootedInstance random_rooted(std::uint64_t seed, int max_edges, int max_demands, long max_budget) {
    std::mt19937_64 rng(seed * 7919 + 17);
    auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    GeneratorParams p;
    p.edges = static_cast<int>(uniform(1, max_edges));
    p.buyers = 0;
    p.cycle_prob = 0.6;
    p.seed = seed;
    RootedInstance inst;
    inst.graph = generate_instance(p).graph;
    inst.root = static_cast<int>(uniform(0, inst.graph.vertex_count - 1));
    int demands = static_cast<int>(uniform(0, max_demands));
    for (int i = 0; i < demands; ++i)
        inst.demands.push_back({static_cast<int>(uniform(0, inst.graph.vertex_count - 1)),
                                Rational(uniform(1, max_budget))});
    return inst;
}

CactusInstance random_instance(std::uint64_t seed, int max_edges, int max_buyers, long max_budget) {
    std::mt19937_64 rng(seed * 104729 + 3);
    auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    GeneratorParams p;
    p.edges = static_cast<int>(uniform(1, max_edges));
    p.buyers = static_cast<int>(uniform(1, max_buyers));
    p.max_budget = max_budget;
    p.cycle_prob = 0.5;
    p.seed = seed;
    return generate_instance(p);
}

Level make_level(const CactusGraph& g, std::vector<std::vector<int>> fragments, std::vector<int> borders,
                 std::vector<int> parents) {
    Level lv;
    lv.fragments = std::move(fragments);
    lv.fragment_of_edge.assign(g.edge_count(), -1);
    for (int f = 0; f < static_cast<int>(lv.fragments.size()); ++f)
        for (int e : lv.fragments[f]) lv.fragment_of_edge[e] = f;
    lv.border_vertices = std::move(borders);
    lv.parent_fragment = std::move(parents);
    return lv;
}

std::vector<int> all_vertices(const CactusGraph& g) {
    std::vector<int> v(g.vertex_count);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<int> all_edges(const CactusGraph& g) {
    std::vector<int> e(g.edge_count());
    std::iota(e.begin(), e.end(), 0);
    return e;
}

Decomposition two_levels(const CactusGraph& g, std::vector<int> borders, std::vector<std::vector<int>> second) {
    Decomposition d;
    d.levels.push_back(make_level(g, {all_edges(g)}, std::move(borders), {-1}));
    std::vector<int> parents(second.size(), 0);
    d.levels.push_back(make_level(g, std::move(second), all_vertices(g), parents));
    return d;
}

}  // namespace toll::testing
