#include "tollbooth/skeleton.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace toll {

SkeletonLevel build_skeleton(const CactusGraph& g, const BCTree& t, const Decomposition& d, int j) {
    SkeletonLevel sk;
    sk.level = j;
    sk.border_vertices = d.level(j).border_vertices;
    std::vector<char> border(g.vertex_count, 0);
    for (int v : sk.border_vertices) border[v] = 1;
    const int total = static_cast<int>(sk.border_vertices.size());

    // Borders strictly below the top of each component's subtree graph.
    const int comps = static_cast<int>(t.components.size());
    std::vector<int> below(comps, 0);
    std::vector<int> hanging_below(g.vertex_count, 0);
    for (int c = comps - 1; c >= 1; --c) {
        const Component& comp = t.components[c];
        for (int x : comp.vertices) {
            if (x == comp.top) continue;
            int here = border[x];
            for (int h : t.hanging[x]) here += below[h];
            hanging_below[x] = here - border[x];
            below[c] += here;
        }
    }

    sk.is_skeleton_edge.assign(g.edge_count(), 0);
    for (int c = 1; c < comps; ++c) {
        const Component& comp = t.components[c];
        bool on = false;
        if (comp.kind == ComponentKind::Bridge) {
            on = below[c] > 0 && total - below[c] > 0;
        } else {
            int attached = total - below[c] > 0;
            for (int x : comp.vertices)
                if (x != comp.top && (border[x] || hanging_below[x] > 0)) ++attached;
            on = attached >= 2;
        }
        if (on)
            for (int e : comp.edges) sk.is_skeleton_edge[e] = 1;
    }
    sk.is_skeleton_vertex.assign(g.vertex_count, 0);
    for (int e = 0; e < g.edge_count(); ++e)
        if (sk.is_skeleton_edge[e]) {
            sk.skeleton_edges.push_back(e);
            sk.is_skeleton_vertex[g.edges[e].first] = 1;
            sk.is_skeleton_vertex[g.edges[e].second] = 1;
        }

    sk.repr.resize(g.vertex_count);
    for (int v = 0; v < g.vertex_count; ++v) sk.repr[v] = v;
    sk.component_of_edge.assign(g.edge_count(), -1);
    if (j >= d.L()) return sk;

    const bool empty = sk.skeleton_edges.empty();
    const auto& next = d.level(j + 1).fragments;
    for (int f = 0; f < static_cast<int>(next.size()); ++f) {
        std::vector<int> free_edges;
        for (int e : next[f])
            if (!sk.is_skeleton_edge[e]) free_edges.push_back(e);
        for (auto& edges : edge_components(g, free_edges)) {
            NonSkeletonComponent comp;
            comp.fragment = f;
            std::vector<int> anchors;
            for (int v : vertices_of(g, edges))
                if (empty ? border[v] : sk.is_skeleton_vertex[v]) anchors.push_back(v);
            if (anchors.size() != 1)
                throw std::logic_error("non-skeleton component without a unique skeleton vertex");
            comp.anchor = anchors[0];
            for (int v : vertices_of(g, edges))
                if (v != comp.anchor) sk.repr[v] = comp.anchor;
            for (int e : edges) sk.component_of_edge[e] = static_cast<int>(sk.components.size());
            comp.edges = std::move(edges);
            sk.components.push_back(std::move(comp));
        }
    }
    return sk;
}

namespace {

struct WorkEdge {
    int a = 0, b = 0;
    std::vector<int> edges;
    int fragment = 0;
    bool cyclic = false;
    bool alive = true;
};

}  // namespace

SegmentSet compress_segments(const CactusGraph& g, const Decomposition& d, const SkeletonLevel& sk) {
    const Level& lv = d.level(sk.level);
    std::vector<char> border(g.vertex_count, 0);
    for (int v : sk.border_vertices) border[v] = 1;
    std::vector<WorkEdge> work;
    for (int e : sk.skeleton_edges)
        work.push_back({g.edges[e].first, g.edges[e].second, {e}, lv.fragment_of_edge[e], false, true});

    bool changed = true;
    while (changed) {
        changed = false;
        // rule 2 first: parallel edges of one fragment
        std::map<std::tuple<int, int, int>, int> seen;
        for (int i = 0; i < static_cast<int>(work.size()); ++i) {
            if (!work[i].alive) continue;
            auto key = std::make_tuple(std::min(work[i].a, work[i].b), std::max(work[i].a, work[i].b), work[i].fragment);
            auto [it, fresh] = seen.emplace(key, i);
            if (fresh) continue;
            WorkEdge& keep = work[it->second];
            keep.edges.insert(keep.edges.end(), work[i].edges.begin(), work[i].edges.end());
            keep.cyclic = true;
            work[i].alive = false;
            changed = true;
        }
        if (changed) continue;
        std::vector<std::vector<int>> incident(g.vertex_count);
        for (int i = 0; i < static_cast<int>(work.size()); ++i)
            if (work[i].alive) {
                incident[work[i].a].push_back(i);
                incident[work[i].b].push_back(i);
            }
        for (int v = 0; v < g.vertex_count && !changed; ++v) {
            if (border[v] || incident[v].size() != 2) continue;
            WorkEdge& first = work[incident[v][0]];
            WorkEdge& second = work[incident[v][1]];
            int u = first.a == v ? first.b : first.a;
            int w = second.a == v ? second.b : second.a;
            if (u == w) continue;
            first.a = u;
            first.b = w;
            first.edges.insert(first.edges.end(), second.edges.begin(), second.edges.end());
            first.cyclic = first.cyclic || second.cyclic;
            second.alive = false;
            changed = true;
        }
    }

    SegmentSet out;
    for (auto& w : work) {
        if (!w.alive) continue;
        Segment s;
        s.edges = w.edges;
        std::sort(s.edges.begin(), s.edges.end());
        s.l = std::min(w.a, w.b);
        s.r = std::max(w.a, w.b);
        s.cyclic = w.cyclic;
        s.level = sk.level;
        s.fragment = w.fragment;
        if (!s.cyclic) {
            s.path_vertices.push_back(s.l);
            std::vector<char> used(s.edges.size(), 0);
            int at = s.l;
            while (at != s.r) {
                std::size_t i = 0;
                while (used[i] || (g.edges[s.edges[i]].first != at && g.edges[s.edges[i]].second != at)) ++i;
                used[i] = 1;
                s.path_edges.push_back(s.edges[i]);
                at = g.other_end(s.edges[i], at);
                s.path_vertices.push_back(at);
            }
        }
        out.segments.push_back(std::move(s));
    }
    std::sort(out.segments.begin(), out.segments.end(),
              [](const Segment& x, const Segment& y) { return x.edges.front() < y.edges.front(); });
    out.segment_of_edge.assign(g.edge_count(), -1);
    for (int i = 0; i < static_cast<int>(out.segments.size()); ++i)
        for (int e : out.segments[i].edges) out.segment_of_edge[e] = i;
    return out;
}

FragmentSkeleton fragment_skeleton([[maybe_unused]] const CactusGraph& g, const BCTree& t, const Decomposition& d,
                                   const SkeletonLevel& sk, const SegmentSet& segs, int fragment) {
    const Level& lv = d.level(sk.level);
    FragmentSkeleton fs;
    fs.fragment = fragment;
    for (int i = 0; i < static_cast<int>(segs.segments.size()); ++i)
        if (segs.segments[i].fragment == fragment) fs.inner_segments.push_back(i);

    for (int c = 0; c < static_cast<int>(t.components.size()); ++c) {
        const Component& comp = t.components[c];
        if (comp.kind != ComponentKind::Cycle) continue;
        const int len = static_cast<int>(comp.edges.size());
        bool mine = false, foreign = false, skeletal = true;
        for (int e : comp.edges) {
            (lv.fragment_of_edge[e] == fragment ? mine : foreign) = true;
            skeletal = skeletal && sk.is_skeleton_edge[e];
        }
        if (!mine || !foreign || !skeletal) continue;
        auto inside = [&](int i) { return lv.fragment_of_edge[comp.edges[((i % len) + len) % len]] == fragment; };
        int runs = 0, start = 0;
        for (int i = 0; i < len; ++i)
            if (!inside(i) && inside(i - 1)) {
                ++runs;
                start = i;
            }
        if (runs != 1) throw std::logic_error("fragment meets a split cycle in more than one arc");
        OuterExtension ext;
        ext.cycle = c;
        int i = start;
        for (; !inside(i); ++i) {
            int s = segs.segment_of_edge[comp.edges[i % len]];
            if (ext.segments.empty() || ext.segments.back() != s) ext.segments.push_back(s);
        }
        int from = comp.vertices[start % len], to = comp.vertices[i % len];
        if (from > to) {
            std::reverse(ext.segments.begin(), ext.segments.end());
            std::swap(from, to);
        }
        ext.u = from;
        ext.v = to;
        fs.outer_extensions.push_back(std::move(ext));
    }
    return fs;
}

}  // namespace toll
