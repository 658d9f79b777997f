#include "tollbooth/cactus.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace toll {

std::string kind_name(CactusErrorKind kind) {
    switch (kind) {
        case CactusErrorKind::VertexOutOfRange: return "VertexOutOfRange";
        case CactusErrorKind::SelfLoop: return "SelfLoop";
        case CactusErrorKind::ParallelEdge: return "ParallelEdge";
        case CactusErrorKind::Disconnected: return "Disconnected";
        case CactusErrorKind::NotCactus: return "NotCactus";
    }
    return "Unknown";
}

namespace {

struct DfsForest {
    std::vector<int> parent_edge;  // -1 at root / unvisited
    std::vector<int> depth;        // -1 when unvisited
    std::vector<int> order;        // preorder
};

DfsForest dfs(const CactusGraph& g, int root) {
    DfsForest f;
    f.parent_edge.assign(g.vertex_count, -1);
    f.depth.assign(g.vertex_count, -1);
    std::vector<std::size_t> next(g.vertex_count, 0);
    std::vector<int> stack{root};
    f.depth[root] = 0;
    f.order.push_back(root);
    while (!stack.empty()) {
        int u = stack.back();
        if (next[u] == g.adjacency[u].size()) {
            stack.pop_back();
            continue;
        }
        auto [w, e] = g.adjacency[u][next[u]++];
        if (f.depth[w] >= 0) continue;
        f.depth[w] = f.depth[u] + 1;
        f.parent_edge[w] = e;
        f.order.push_back(w);
        stack.push_back(w);
    }
    return f;
}

// For every non-tree edge (descendant u, ancestor w): tree path vertices from w down to u.
template <typename Visit>
bool for_each_cycle(const CactusGraph& g, const DfsForest& f, Visit&& visit) {
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [a, b] = g.edges[e];
        if (f.parent_edge[a] == e || f.parent_edge[b] == e) continue;
        int low = f.depth[a] > f.depth[b] ? a : b;
        int high = g.other_end(e, low);
        std::vector<int> path{low};
        int cur = low;
        while (cur != high) {
            cur = g.other_end(f.parent_edge[cur], cur);
            path.push_back(cur);
        }
        std::reverse(path.begin(), path.end());
        if (!visit(e, path)) return false;
    }
    return true;
}

}  // namespace

std::variant<CactusGraph, CactusError> validate_cactus(int vertex_count,
                                                       const std::vector<Edge>& edges) {
    if (vertex_count < 1)
        return CactusError{CactusErrorKind::VertexOutOfRange, -1, "graph has no vertices"};
    CactusGraph g;
    g.vertex_count = vertex_count;
    g.edges = edges;
    g.adjacency.assign(vertex_count, {});
    std::set<Edge> seen;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        auto [u, v] = edges[e];
        if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
            return CactusError{CactusErrorKind::VertexOutOfRange, e,
                               "edge " + std::to_string(e) + " has an endpoint out of range"};
        if (u == v)
            return CactusError{CactusErrorKind::SelfLoop, e,
                               "edge " + std::to_string(e) + " is a self-loop"};
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
            return CactusError{CactusErrorKind::ParallelEdge, e,
                               "edge " + std::to_string(e) + " duplicates an earlier edge"};
        g.adjacency[u].push_back({v, e});
        g.adjacency[v].push_back({u, e});
    }
    DfsForest f = dfs(g, 0);
    for (int v = 0; v < vertex_count; ++v)
        if (f.depth[v] < 0)
            return CactusError{CactusErrorKind::Disconnected, -1,
                               "vertex " + std::to_string(v) + " is unreachable from vertex 0"};
    std::vector<int> cycle_of(g.edge_count(), -1);
    CactusError failure{CactusErrorKind::NotCactus, -1, ""};
    bool ok = for_each_cycle(g, f, [&](int back_edge, const std::vector<int>& path) {
        cycle_of[back_edge] = back_edge;
        for (std::size_t i = 1; i < path.size(); ++i) {
            int e = f.parent_edge[path[i]];
            if (cycle_of[e] >= 0) {
                failure.edge = e;
                failure.message = "edge " + std::to_string(e) + " lies on two simple cycles";
                return false;
            }
            cycle_of[e] = back_edge;
        }
        return true;
    });
    if (!ok) return failure;
    return g;
}

CactusGraph make_cactus(int vertex_count, const std::vector<Edge>& edges) {
    auto result = validate_cactus(vertex_count, edges);
    if (auto* err = std::get_if<CactusError>(&result))
        throw std::invalid_argument(kind_name(err->kind) + ": " + err->message);
    return std::get<CactusGraph>(std::move(result));
}

BCTree build_bc_tree(const CactusGraph& g, int root) {
    DfsForest f = dfs(g, root);
    std::vector<Component> raw;
    std::vector<int> comp_of_edge(g.edge_count(), -1);

    for_each_cycle(g, f, [&](int back_edge, const std::vector<int>& path) {
        Component c;
        c.kind = ComponentKind::Cycle;
        c.vertices = path;
        c.top = path.front();
        for (std::size_t i = 1; i < path.size(); ++i) c.edges.push_back(f.parent_edge[path[i]]);
        c.edges.push_back(back_edge);
        for (int e : c.edges) comp_of_edge[e] = static_cast<int>(raw.size());
        raw.push_back(std::move(c));
        return true;
    });
    for (int v : f.order) {
        int e = f.parent_edge[v];
        if (e < 0 || comp_of_edge[e] >= 0) continue;
        Component c;
        c.kind = ComponentKind::Bridge;
        c.edges = {e};
        c.top = g.other_end(e, v);
        c.vertices = {c.top, v};
        comp_of_edge[e] = static_cast<int>(raw.size());
        raw.push_back(std::move(c));
    }

    // Link children before renumbering: raw index R = root component.
    const int raw_root = static_cast<int>(raw.size());
    {
        Component r;
        r.kind = ComponentKind::Root;
        r.vertices = {root};
        r.top = root;
        raw.push_back(std::move(r));
    }
    std::vector<int> raw_main(g.vertex_count, raw_root);
    for (int v = 0; v < g.vertex_count; ++v)
        if (v != root) raw_main[v] = comp_of_edge[f.parent_edge[v]];
    auto min_edge = [&](int c) {
        return raw[c].edges.empty() ? -1 : *std::min_element(raw[c].edges.begin(), raw[c].edges.end());
    };
    for (int c = 0; c < raw_root; ++c) {
        raw[c].parent = raw[c].top == root ? raw_root : raw_main[raw[c].top];
        raw[raw[c].parent].children.push_back(c);
    }
    for (auto& c : raw)
        std::sort(c.children.begin(), c.children.end(),
                  [&](int a, int b) { return min_edge(a) < min_edge(b); });

    // Preorder renumbering.
    std::vector<int> new_id(raw.size(), -1);
    std::vector<int> preorder;
    std::vector<int> stack{raw_root};
    while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        new_id[c] = static_cast<int>(preorder.size());
        preorder.push_back(c);
        for (auto it = raw[c].children.rbegin(); it != raw[c].children.rend(); ++it) stack.push_back(*it);
    }

    BCTree t;
    t.root_vertex = root;
    t.root_component = 0;
    for (int c : preorder) {
        Component comp = raw[c];
        comp.parent = comp.parent < 0 ? -1 : new_id[comp.parent];
        for (int& ch : comp.children) ch = new_id[ch];
        t.components.push_back(std::move(comp));
    }
    t.component_of_edge.resize(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) t.component_of_edge[e] = new_id[comp_of_edge[e]];
    t.main_component.resize(g.vertex_count);
    for (int v = 0; v < g.vertex_count; ++v) t.main_component[v] = new_id[raw_main[v]];
    t.hanging.assign(g.vertex_count, {});
    t.partner.assign(g.edge_count(), -1);
    for (int c = 0; c < static_cast<int>(t.components.size()); ++c) {
        const Component& comp = t.components[c];
        if (comp.kind == ComponentKind::Root) continue;
        t.hanging[comp.top].push_back(c);
        if (comp.kind == ComponentKind::Cycle) {
            int a = comp.edges.front(), b = comp.edges.back();
            t.associated_pairs.push_back({std::min(a, b), std::max(a, b)});
            t.partner[a] = b;
            t.partner[b] = a;
        }
    }
    std::sort(t.associated_pairs.begin(), t.associated_pairs.end());
    return t;
}

EdgeVertexSet subtree_graph(const BCTree& t, int component) {
    EdgeVertexSet out;
    std::vector<int> stack{component};
    std::set<int> verts;
    while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        const Component& comp = t.components[c];
        out.edges.insert(out.edges.end(), comp.edges.begin(), comp.edges.end());
        verts.insert(comp.vertices.begin(), comp.vertices.end());
        for (int ch : comp.children) stack.push_back(ch);
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.vertices.assign(verts.begin(), verts.end());
    return out;
}

SubCactus make_subcactus(const CactusGraph& g, const std::vector<int>& edges, int anchor) {
    SubCactus s;
    auto local = [&](int v) {
        auto [it, inserted] = s.local_vertex.emplace(v, static_cast<int>(s.global_vertex.size()));
        if (inserted) s.global_vertex.push_back(v);
        return it->second;
    };
    if (anchor >= 0) local(anchor);
    std::vector<int> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Edge> local_edges;
    for (int e : sorted) {
        int a = local(g.edges[e].first);
        int b = local(g.edges[e].second);
        s.local_edge[e] = static_cast<int>(s.global_edge.size());
        s.global_edge.push_back(e);
        local_edges.push_back({a, b});
    }
    s.graph = make_cactus(static_cast<int>(s.global_vertex.size()), local_edges);
    return s;
}

std::vector<std::vector<int>> edge_components(const CactusGraph& g, const std::vector<int>& edges) {
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int e : edges) {
        auto [a, b] = g.edges[e];
        if (!parent.count(a)) parent[a] = a;
        if (!parent.count(b)) parent[b] = b;
        int ra = find(a), rb = find(b);
        if (ra != rb) parent[ra] = rb;
    }
    std::map<int, std::vector<int>> groups;
    for (int e : edges) groups[find(g.edges[e].first)].push_back(e);
    std::vector<std::vector<int>> out;
    for (auto& [root, list] : groups) {
        std::sort(list.begin(), list.end());
        out.push_back(std::move(list));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

std::vector<int> vertices_of(const CactusGraph& g, const std::vector<int>& edges) {
    std::vector<int> out;
    for (int e : edges) {
        out.push_back(g.edges[e].first);
        out.push_back(g.edges[e].second);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace toll
