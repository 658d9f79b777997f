#include "tollbooth/evaluator.hpp"

#include <map>
#include <queue>

namespace toll {

std::vector<Rational> distances_from(const CactusGraph& g, const Prices& prices, int source) {
    std::vector<std::optional<Rational>> best(g.vertex_count);
    std::vector<char> done(g.vertex_count, 0);
    // Ordered set as a priority queue keeps everything exact.
    std::multimap<Rational, int> frontier;
    best[source] = Rational(0);
    frontier.emplace(Rational(0), source);
    while (!frontier.empty()) {
        auto it = frontier.begin();
        int u = it->second;
        frontier.erase(it);
        if (done[u]) continue;
        done[u] = 1;
        for (auto [w, e] : g.adjacency[u]) {
            if (done[w]) continue;
            Rational cand = *best[u] + prices[e];
            if (!best[w] || cand < *best[w]) {
                best[w] = cand;
                frontier.emplace(cand, w);
            }
        }
    }
    std::vector<Rational> out(g.vertex_count);
    for (int v = 0; v < g.vertex_count; ++v) out[v] = best[v] ? *best[v] : Rational(0);
    return out;
}

Rational distance(const CactusGraph& g, const Prices& prices, int u, int v) {
    return distances_from(g, prices, u)[v];
}

namespace {

// Block ids of edges: every simple s-t path stays inside the blocks met by any one s-t path.
std::vector<int> block_ids(const CactusGraph& g) {
    BCTree t = build_bc_tree(g, 0);
    return t.component_of_edge;
}

std::vector<char> route_edges(const CactusGraph& g, const std::vector<int>& block, int s, int t) {
    std::vector<int> via(g.vertex_count, -2);
    std::queue<int> q;
    q.push(s);
    via[s] = -1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [w, e] : g.adjacency[u])
            if (via[w] == -2) {
                via[w] = e;
                q.push(w);
            }
    }
    std::vector<char> blocks_on_route(g.edge_count() + 1, 0);
    for (int v = t; v != s; v = g.other_end(via[v], v)) blocks_on_route[block[via[v]]] = 1;
    std::vector<char> route(g.edge_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) route[e] = blocks_on_route[block[e]];
    return route;
}

std::vector<int> tight_path(const CactusGraph& g, const Prices& prices, const std::vector<int>& block,
                            int s, int t) {
    std::vector<Rational> to_t = distances_from(g, prices, t);
    std::vector<char> route = route_edges(g, block, s, t);
    std::vector<char> visited(g.vertex_count, 0);
    std::vector<int> path;
    // DFS in ascending edge-id order: the first complete path is the lexicographic minimum.
    std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
    visited[s] = 1;
    while (!stack.empty()) {
        auto& [u, idx] = stack.back();
        if (u == t) return path;
        if (idx == g.adjacency[u].size()) {
            visited[u] = 0;
            stack.pop_back();
            if (!path.empty()) path.pop_back();
            continue;
        }
        auto [w, e] = g.adjacency[u][idx++];
        if (!route[e] || visited[w] || to_t[u] != prices[e] + to_t[w]) continue;
        visited[w] = 1;
        path.push_back(e);
        stack.push_back({w, 0});
    }
    return path;
}

}  // namespace

std::vector<int> cheapest_path(const CactusGraph& g, const Prices& prices, int s, int t) {
    if (s == t) return {};
    return tight_path(g, prices, block_ids(g), s, t);
}

Allocation allocate(const CactusGraph& g, const Prices& prices, const std::vector<Buyer>& buyers) {
    Allocation a;
    a.total_revenue = 0;
    std::vector<int> block;
    std::map<int, std::vector<Rational>> cache;
    for (const Buyer& b : buyers) {
        Purchase p;
        p.paid = 0;
        if (b.s == b.t || b.budget == 0) {
            p.bought = true;
        } else {
            auto [it, fresh] = cache.try_emplace(b.s);
            if (fresh) it->second = distances_from(g, prices, b.s);
            const Rational& d = it->second[b.t];
            if (d <= b.budget) {
                if (block.empty()) block = block_ids(g);
                p.bought = true;
                p.paid = d;
                p.path = tight_path(g, prices, block, b.s, b.t);
            }
        }
        a.total_revenue += p.paid;
        a.purchases.push_back(std::move(p));
    }
    return a;
}

Rational revenue(const CactusGraph& g, const Prices& prices, const std::vector<Buyer>& buyers) {
    std::vector<int> all(buyers.size());
    for (std::size_t i = 0; i < buyers.size(); ++i) all[i] = static_cast<int>(i);
    return revenue_restricted(g, prices, buyers, all);
}

Rational revenue_restricted(const CactusGraph& g, const Prices& prices,
                            const std::vector<Buyer>& buyers, const std::vector<int>& subset) {
    Rational total = 0;
    std::map<int, std::vector<Rational>> cache;
    for (int i : subset) {
        const Buyer& b = buyers[i];
        if (b.s == b.t) continue;
        auto [it, fresh] = cache.try_emplace(b.s);
        if (fresh) it->second = distances_from(g, prices, b.s);
        const Rational& d = it->second[b.t];
        if (d <= b.budget) total += d;
    }
    return total;
}

}  // namespace toll
