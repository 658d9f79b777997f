#include "tollbooth/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace toll {

int balance_parameter(int edge_count) {
    if (edge_count <= 1) return 2;
    int k = static_cast<int>(std::ceil(std::sqrt(std::log2(static_cast<double>(edge_count))) - 1e-12));
    return std::max(2, k);
}

std::vector<int> hop_distance(const CactusGraph& g) {
    std::vector<int> dist(g.vertex_count, -1);
    std::queue<int> q;
    dist[0] = 0;
    q.push(0);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [w, e] : g.adjacency[u])
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                q.push(w);
            }
    }
    return dist;
}

int topmost_vertex(const CactusGraph& g, const std::vector<int>& hops, const std::vector<int>& edges) {
    int best = -1;
    for (int v : vertices_of(g, edges))
        if (best < 0 || hops[v] < hops[best]) best = v;
    return best;
}

int count_shared_vertices(const CactusGraph& g, const std::vector<std::vector<int>>& parts) {
    std::map<int, int> count;
    for (const auto& p : parts)
        for (int v : vertices_of(g, p)) ++count[v];
    int shared = 0;
    for (auto [v, c] : count) shared += c > 1;
    return shared;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

void sort_parts(std::vector<std::vector<int>>& parts) {
    for (auto& p : parts) std::sort(p.begin(), p.end());
    parts.erase(std::remove_if(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); }), parts.end());
    std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

int count_in(const std::vector<int>& vertices, const std::vector<char>& marked) {
    int n = 0;
    for (int v : vertices) n += marked[v];
    return n;
}

}  // namespace

std::vector<std::vector<int>> split_reduce_edges(const CactusGraph& g, const BCTree& t,
                                                 const std::vector<int>& fragment, int k) {
    const int total = static_cast<int>(fragment.size());
    if (total == 0) return {};
    const int threshold = (total + k - 1) / k;
    std::vector<char> in_fragment(g.edge_count(), 0);
    for (int e : fragment) in_fragment[e] = 1;

    // Step 1: drop the higher edge of every associated pair whose cycle lies inside the fragment.
    std::vector<char> erased(g.edge_count(), 0);
    for (const auto& comp : t.components) {
        if (comp.kind != ComponentKind::Cycle) continue;
        bool whole = std::all_of(comp.edges.begin(), comp.edges.end(), [&](int e) { return in_fragment[e]; });
        if (whole) erased[std::max(comp.edges.front(), comp.edges.back())] = 1;
    }
    std::vector<std::vector<std::pair<int, int>>> tree_adj(g.vertex_count);
    for (int e : fragment)
        if (!erased[e]) {
            tree_adj[g.edges[e].first].push_back({g.edges[e].second, e});
            tree_adj[g.edges[e].second].push_back({g.edges[e].first, e});
        }

    // Step 2: root at the topmost vertex; bottom-up greedy grouping.
    auto hops = hop_distance(g);
    int root = topmost_vertex(g, hops, fragment);
    std::vector<int> parent_edge(g.vertex_count, -1), depth(g.vertex_count, -1);
    std::vector<std::vector<int>> children(g.vertex_count);
    std::vector<int> order{root};
    depth[root] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        int u = order[i];
        for (auto [w, e] : tree_adj[u])
            if (depth[w] < 0) {
                depth[w] = depth[u] + 1;
                parent_edge[w] = e;
                children[u].push_back(w);
                order.push_back(w);
            }
        std::sort(children[u].begin(), children[u].end());
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return depth[a] != depth[b] ? depth[a] > depth[b] : a < b;
    });

    std::vector<std::vector<int>> parts;
    std::vector<char> closed, alive;
    std::vector<int> part_of(g.edge_count(), -1);
    std::vector<int> open_at(g.vertex_count, -1);
    auto merge = [&](int a, int b) {
        if (a == b) return a;
        for (int e : parts[b]) {
            part_of[e] = a;
            parts[a].push_back(e);
        }
        parts[b].clear();
        alive[b] = 0;
        return a;
    };
    auto tree_size = [&](int p) {
        int n = 0;
        for (int e : parts[p]) n += !erased[e];
        return n;
    };
    for (int v : order) {
        if (children[v].empty()) continue;
        for (int u : children[v]) {  // 2a
            int e = parent_edge[u];
            int p = open_at[u];
            if (p < 0) {
                p = static_cast<int>(parts.size());
                parts.push_back({});
                closed.push_back(0);
                alive.push_back(1);
            }
            parts[p].push_back(e);
            part_of[e] = p;
        }
        for (int u : children[v]) {  // 2b
            int e = parent_edge[u];
            int mate = t.partner[e];
            if (mate >= 0 && in_fragment[mate] && !erased[mate] && part_of[mate] >= 0 &&
                part_of[mate] != part_of[e] && (g.edges[mate].first == v || g.edges[mate].second == v))
                merge(std::min(part_of[e], part_of[mate]), std::max(part_of[e], part_of[mate]));
        }
        std::vector<int> opens;
        for (int u : children[v]) {
            int p = part_of[parent_edge[u]];
            if (std::find(opens.begin(), opens.end(), p) != opens.end()) continue;
            if (tree_size(p) >= threshold) closed[p] = 1;  // 2c
            else opens.push_back(p);
        }
        while (opens.size() >= 2) {  // 2d
            int a = merge(opens[0], opens[1]);
            opens.erase(opens.begin() + 1);
            if (tree_size(a) >= threshold) {
                closed[a] = 1;
                opens.erase(opens.begin());
            }
        }
        open_at[v] = opens.empty() ? -1 : opens[0];
    }
    // Step 3: reinsert erased edges next to their partner.
    for (int e : fragment)
        if (erased[e]) {
            int p = part_of[t.partner[e]];
            parts[p].push_back(e);
            part_of[e] = p;
        }
    // Pairs should never straddle; merge defensively if one does.
    for (auto [a, b] : t.associated_pairs)
        if (in_fragment[a] && in_fragment[b] && part_of[a] != part_of[b])
            merge(std::min(part_of[a], part_of[b]), std::max(part_of[a], part_of[b]));
    std::vector<std::vector<int>> out;
    for (std::size_t p = 0; p < parts.size(); ++p)
        if (alive[p]) out.push_back(parts[p]);
    sort_parts(out);
    return out;
}

namespace {

class PivotSplitter {
public:
    PivotSplitter(const CactusGraph& g, const BCTree& t, const std::vector<int>& subpart,
                  const std::vector<int>& old_borders)
        : g_(g), t_(t), subpart_(subpart), old_(g.vertex_count, 0) {
        for (int v : old_borders) old_[v] = 1;
        vertices_ = vertices_of(g, subpart);
        b_ = count_in(vertices_, old_);
    }

    std::vector<std::vector<int>> run() {
        auto hops = hop_distance(g_);
        int root = topmost_vertex(g_, hops, subpart_);
        SubCactus sub = make_subcactus(g_, subpart_);
        BCTree local = build_bc_tree(sub.graph, sub.local_vertex.at(root));

        // Pivot: a component whose subtree holds > floor(b/2) old borders and no child does.
        const int n = static_cast<int>(local.components.size());
        std::vector<int> count(n), size(n), min_edge(n);
        std::vector<char> qualifies(n);
        for (int c = 0; c < n; ++c) {
            auto sg = subtree_graph(local, c);
            int cnt = 0;
            for (int v : sg.vertices) cnt += old_[sub.global_vertex[v]];
            count[c] = cnt;
            size[c] = static_cast<int>(sg.edges.size());
            min_edge[c] = sg.edges.empty() ? -1 : sub.global_edge[sg.edges.front()];
            qualifies[c] = cnt > b_ / 2;
        }
        int pivot = -1;
        for (int c = 0; c < n; ++c) {
            if (!qualifies[c]) continue;
            bool minimal = std::none_of(local.components[c].children.begin(), local.components[c].children.end(),
                                        [&](int ch) { return qualifies[ch]; });
            if (!minimal) continue;
            if (pivot < 0 || size[c] < size[pivot] || (size[c] == size[pivot] && min_edge[c] < min_edge[pivot]))
                pivot = c;
        }
        if (pivot < 0) return {subpart_};
        const Component& comp = local.components[pivot];
        if (comp.kind == ComponentKind::Root) return split_at_vertex(root);
        if (comp.kind == ComponentKind::Bridge) return split_at_vertex(sub.global_vertex[comp.vertices[1]]);

        std::vector<int> cycle_vertices, cycle_edges;
        for (int v : comp.vertices) cycle_vertices.push_back(sub.global_vertex[v]);
        for (int e : comp.edges) cycle_edges.push_back(sub.global_edge[e]);
        return split_at_cycle(cycle_vertices, cycle_edges);
    }

private:
    // Single-edge case around `v`: components of the subpart minus v, pair repair, merging.
    std::vector<std::vector<int>> split_at_vertex(int v) {
        std::map<int, int> index;
        for (int x : vertices_) index.emplace(x, static_cast<int>(index.size()));
        UnionFind uf(static_cast<int>(index.size()));
        for (int e : subpart_) {
            auto [a, c] = g_.edges[e];
            if (a != v && c != v) uf.unite(index[a], index[c]);
        }
        std::map<int, std::vector<int>> groups;
        for (int e : subpart_) {
            auto [a, c] = g_.edges[e];
            groups[uf.find(index[a == v ? c : a])].push_back(e);
        }
        std::vector<std::vector<int>> parts;
        for (auto& [key, list] : groups) parts.push_back(list);
        sort_parts(parts);

        auto part_of = [&](int e) {
            for (std::size_t i = 0; i < parts.size(); ++i)
                if (std::find(parts[i].begin(), parts[i].end(), e) != parts[i].end()) return static_cast<int>(i);
            return -1;
        };
        const int half_up = (b_ + 1) / 2;
        for (int e : subpart_) {
            int mate = t_.partner[e];
            if (mate < e) continue;
            int pe = part_of(e), pm = part_of(mate);
            if (pm < 0 || pe == pm) continue;
            std::vector<int> both = parts[pe];
            both.insert(both.end(), parts[pm].begin(), parts[pm].end());
            if (count_in(vertices_of(g_, both), old_) <= half_up + 1) {
                parts[pe] = both;
                parts[pm].clear();
            } else {
                parts[pm].erase(std::find(parts[pm].begin(), parts[pm].end(), mate));
                parts[pe].push_back(mate);
            }
            sort_parts(parts);
        }
        merge_small(parts, half_up + 4, half_up + 2);
        return parts;
    }

    // Merge the first connected pair whose union stays within both border limits, repeatedly.
    void merge_small(std::vector<std::vector<int>>& parts, int level_limit, int old_limit) {
        bool merged = true;
        while (merged && parts.size() > 1) {
            merged = false;
            std::vector<std::vector<int>> verts;
            for (const auto& p : parts) verts.push_back(vertices_of(g_, p));
            for (std::size_t i = 0; i < parts.size() && !merged; ++i)
                for (std::size_t j = i + 1; j < parts.size() && !merged; ++j) {
                    std::vector<int> uni;
                    std::set_union(verts[i].begin(), verts[i].end(), verts[j].begin(), verts[j].end(),
                                   std::back_inserter(uni));
                    if (uni.size() == verts[i].size() + verts[j].size()) continue;  // disjoint
                    int old_count = 0, level_count = 0;
                    for (int x : uni) {
                        bool shared = false;
                        for (std::size_t q = 0; q < parts.size(); ++q)
                            if (q != i && q != j && std::binary_search(verts[q].begin(), verts[q].end(), x))
                                shared = true;
                        old_count += old_[x];
                        level_count += old_[x] || shared;
                    }
                    if (level_count <= level_limit && old_count <= old_limit) {
                        parts[i].insert(parts[i].end(), parts[j].begin(), parts[j].end());
                        parts.erase(parts.begin() + static_cast<long>(j));
                        sort_parts(parts);
                        merged = true;
                    }
                }
        }
    }

    std::vector<std::vector<int>> split_at_cycle(const std::vector<int>& cycle_vertices,
                                                 const std::vector<int>& cycle_edges) {
        std::vector<char> on_cycle(g_.edge_count(), 0);
        for (int e : cycle_edges) on_cycle[e] = 1;
        std::map<int, int> index;
        for (int x : vertices_) index.emplace(x, static_cast<int>(index.size()));
        UnionFind uf(static_cast<int>(index.size()));
        for (int e : subpart_)
            if (!on_cycle[e]) uf.unite(index[g_.edges[e].first], index[g_.edges[e].second]);
        const std::size_t len = cycle_vertices.size();
        std::vector<int> weight(len, 0);
        for (std::size_t i = 0; i < len; ++i)
            for (int x : vertices_)
                if (old_[x] && uf.find(index[x]) == uf.find(index[cycle_vertices[i]])) ++weight[i];
        for (std::size_t i = 0; i < len; ++i)
            if (weight[i] > b_ / 2) return split_at_vertex(cycle_vertices[i]);

        // Consecutive run with between floor(b/3) and ceil(2b/3) old borders.
        const int third = b_ / 3;
        std::vector<std::size_t> run;
        for (std::size_t i = 0; i < len && run.empty(); ++i)
            if (weight[i] >= third) run.push_back(i);
        if (run.empty()) {
            int sum = 0;
            for (std::size_t i = 0; i < len && sum < third; ++i) {
                run.push_back(i);
                sum += weight[i];
            }
        }
        std::vector<char> black_root(index.size(), 0);
        for (std::size_t i : run) black_root[uf.find(index[cycle_vertices[i]])] = 1;
        auto is_black = [&](int x) { return black_root[uf.find(index[x])] != 0; };

        std::vector<int> black, white, crossing;
        std::vector<char> black_edge(g_.edge_count(), 0);
        for (int e : subpart_) {
            bool a = is_black(g_.edges[e].first), c = is_black(g_.edges[e].second);
            if (a && c) {
                black.push_back(e);
                black_edge[e] = 1;
            } else if (!a && !c) {
                white.push_back(e);
            } else {
                crossing.push_back(e);
            }
        }
        bool black_empty = black.empty();
        for (int e : crossing) {
            int mate = t_.partner[e];
            if (black_empty || (mate >= 0 && black_edge[mate]))
                black.push_back(e);
            else
                white.push_back(e);
        }
        // A crossing edge follows its associated partner when the rule above separated them.
        std::vector<char> crossing_edge(g_.edge_count(), 0), in_black(g_.edge_count(), 0);
        for (int e : crossing) crossing_edge[e] = 1;
        for (int e : black) in_black[e] = 1;
        for (int e : subpart_) {
            int mate = t_.partner[e];
            if (mate < e || in_black[e] == in_black[mate]) continue;
            int moved = crossing_edge[mate] ? mate : e;
            in_black[moved] = !in_black[moved];
        }
        std::vector<std::vector<int>> parts(2);
        for (int e : subpart_) parts[in_black[e] ? 0 : 1].push_back(e);
        parts.erase(std::remove_if(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); }),
                    parts.end());
        sort_parts(parts);
        return parts;
    }

    const CactusGraph& g_;
    const BCTree& t_;
    std::vector<int> subpart_;
    std::vector<char> old_;
    std::vector<int> vertices_;
    int b_ = 0;
};

}  // namespace

std::vector<std::vector<int>> pivot_split(const CactusGraph& g, const BCTree& t,
                                          const std::vector<int>& subpart,
                                          const std::vector<int>& old_borders) {
    return PivotSplitter(g, t, subpart, old_borders).run();
}

std::vector<std::vector<int>> split_reduce_border(const CactusGraph& g, const BCTree& t,
                                                  const std::vector<int>& subpart,
                                                  const std::vector<int>& old_borders, int k) {
    std::vector<char> old(g.vertex_count, 0);
    for (int v : old_borders) old[v] = 1;
    if (count_in(vertices_of(g, subpart), old) <= 18 * k) return {subpart};
    return pivot_split(g, t, subpart, old_borders);
}

namespace {

std::vector<int> shared_vertices(const CactusGraph& g, const std::vector<std::vector<int>>& parts) {
    std::vector<int> count(g.vertex_count, 0);
    for (const auto& p : parts)
        for (int v : vertices_of(g, p)) ++count[v];
    std::vector<int> out;
    for (int v = 0; v < g.vertex_count; ++v)
        if (count[v] > 1) out.push_back(v);
    return out;
}

}  // namespace

Decomposition build_decomposition(const CactusGraph& g, const BCTree& t) {
    Decomposition d;
    d.k = balance_parameter(g.edge_count());
    Level first;
    std::vector<int> all(g.edge_count());
    std::iota(all.begin(), all.end(), 0);
    first.fragments.push_back(all);
    first.parent_fragment.push_back(-1);
    d.levels.push_back(first);

    auto too_big = [](const Level& lv) {
        return std::any_of(lv.fragments.begin(), lv.fragments.end(), [](const auto& f) { return f.size() > 2; });
    };
    while (too_big(d.levels.back())) {
        const Level& cur = d.levels.back();
        const int j = d.L();
        std::vector<int> previous_borders = shared_vertices(g, cur.fragments);
        Level next;
        for (int f = 0; f < static_cast<int>(cur.fragments.size()); ++f) {
            const auto& frag = cur.fragments[f];
            if (frag.size() <= 2) {
                next.fragments.push_back(frag);
                next.parent_fragment.push_back(f);
                continue;
            }
            SplitRecord rec;
            rec.level = j;
            rec.fragment = f;
            rec.parent_edges = static_cast<int>(frag.size());
            int k = d.k;
            auto subparts = split_reduce_edges(g, t, frag, k);
            while (subparts.size() < 2) subparts = split_reduce_edges(g, t, frag, ++k);
            rec.k_used = k;
            // Old borders: previous level's borders plus vertices shared between subparts.
            std::vector<int> old = previous_borders;
            for (int v : shared_vertices(g, subparts)) old.push_back(v);
            std::sort(old.begin(), old.end());
            old.erase(std::unique(old.begin(), old.end()), old.end());
            std::vector<std::vector<int>> children;
            for (const auto& sp : subparts) {
                auto pieces = split_reduce_border(g, t, sp, old, d.k);
                rec.border_splits += pieces.size() > 1;
                children.insert(children.end(), pieces.begin(), pieces.end());
            }
            std::sort(children.begin(), children.end(),
                      [](const auto& a, const auto& b) { return a.front() < b.front(); });
            rec.children = static_cast<int>(children.size());
            rec.shared_vertices = static_cast<int>(shared_vertices(g, children).size());
            d.splits.push_back(rec);
            for (auto& c : children) {
                next.fragments.push_back(std::move(c));
                next.parent_fragment.push_back(f);
            }
        }
        d.levels.push_back(std::move(next));
    }
    for (auto& lv : d.levels) {
        lv.fragment_of_edge.assign(g.edge_count(), -1);
        for (int f = 0; f < static_cast<int>(lv.fragments.size()); ++f)
            for (int e : lv.fragments[f]) lv.fragment_of_edge[e] = f;
    }
    for (int j = 0; j + 1 < d.L(); ++j) d.levels[j].border_vertices = shared_vertices(g, d.levels[j + 1].fragments);
    auto& last = d.levels.back().border_vertices;
    last.resize(g.vertex_count);
    std::iota(last.begin(), last.end(), 0);
    return d;
}

BuyerLevels assign_buyers(const Decomposition& d, const CactusGraph& g, const std::vector<Buyer>& buyers) {
    BuyerLevels out;
    out.level_of_buyer.assign(buyers.size(), 0);
    out.fragment_of_buyer.assign(buyers.size(), -1);
    out.buyers_at_level.assign(d.L(), {});
    std::vector<std::vector<std::vector<int>>> verts(d.L());
    for (int j = 0; j < d.L(); ++j)
        for (const auto& f : d.levels[j].fragments) verts[j].push_back(vertices_of(g, f));
    for (std::size_t i = 0; i < buyers.size(); ++i) {
        const Buyer& b = buyers[i];
        if (b.s == b.t) continue;
        // Fragments are connected, so sharing a fragment means an s-t path inside it.
        for (int j = d.L() - 1; j >= 0 && out.level_of_buyer[i] == 0; --j)
            for (std::size_t f = 0; f < verts[j].size(); ++f) {
                const auto& vs = verts[j][f];
                if (std::binary_search(vs.begin(), vs.end(), b.s) && std::binary_search(vs.begin(), vs.end(), b.t)) {
                    out.level_of_buyer[i] = j + 1;
                    out.fragment_of_buyer[i] = static_cast<int>(f);
                    break;
                }
            }
        out.buyers_at_level[out.level_of_buyer[i] - 1].push_back(static_cast<int>(i));
    }
    return out;
}

}  // namespace toll

namespace toll {

DecompositionCheck check_decomposition(const CactusGraph& g, const BCTree& t, const Decomposition& d) {
    DecompositionCheck out;
    auto fail = [&](std::string msg) { out.violations.push_back(std::move(msg)); };
    const int k = d.k;
    if (d.L() == 0 || static_cast<int>(d.levels[0].fragments.size()) != 1 ||
        static_cast<int>(d.levels[0].fragments[0].size()) != g.edge_count())
        fail("level 1 is not the whole graph");
    for (const auto& f : d.levels.back().fragments)
        if (f.size() > 2) fail("last level has a fragment with more than two edges");
    for (int j = 1; j <= d.L(); ++j) {
        const Level& lv = d.level(j);
        std::vector<int> seen(g.edge_count(), 0);
        for (int f = 0; f < static_cast<int>(lv.fragments.size()); ++f) {
            const auto& frag = lv.fragments[f];
            for (int e : frag) ++seen[e];
            if (frag.empty() || edge_components(g, frag).size() != 1)
                fail("level " + std::to_string(j) + " fragment " + std::to_string(f) + " is not connected");
            auto verts = vertices_of(g, frag);
            int borders = 0;
            for (int v : verts) borders += std::binary_search(lv.border_vertices.begin(), lv.border_vertices.end(), v);
            if (j < d.L()) out.max_fragment_borders = std::max(out.max_fragment_borders, borders);
            if (j < d.L() && borders > 26 * k)
                fail("level " + std::to_string(j) + " fragment " + std::to_string(f) + " has " +
                     std::to_string(borders) + " border vertices");
            if (j > 1) {
                const auto& parent = d.level(j - 1).fragments[lv.parent_fragment[f]];
                for (int e : frag)
                    if (!std::binary_search(parent.begin(), parent.end(), e))
                        fail("level " + std::to_string(j) + " fragment escapes its parent");
            }
        }
        for (int e = 0; e < g.edge_count(); ++e)
            if (seen[e] != 1) fail("level " + std::to_string(j) + " does not partition the edges");
        for (auto [a, b] : t.associated_pairs)
            if (lv.fragment_of_edge[a] != lv.fragment_of_edge[b])
                fail("level " + std::to_string(j) + " separates associated edges " + std::to_string(a) + "," +
                     std::to_string(b));
        if (j < d.L()) {
            const auto& next = d.level(j + 1).border_vertices;
            if (!std::includes(next.begin(), next.end(), lv.border_vertices.begin(), lv.border_vertices.end()))
                fail("border vertices of level " + std::to_string(j) + " are not borders of the next level");
        }
    }
    for (const auto& rec : d.splits) {
        out.max_children = std::max(out.max_children, rec.children);
        if (rec.children > 3 * k) fail("a fragment split into more than 3k children");
        if (rec.shared_vertices > 2 * rec.children - 2)
            fail("split of level " + std::to_string(rec.level) + " fragment " + std::to_string(rec.fragment) +
                 " shares " + std::to_string(rec.shared_vertices) + " vertices among " +
                 std::to_string(rec.children) + " children");
        const int limit = 4 * ((rec.parent_edges + k - 1) / k);
        const Level& next = d.level(rec.level + 1);
        for (int f = 0; f < static_cast<int>(next.fragments.size()); ++f)
            if (next.parent_fragment[f] == rec.fragment && static_cast<int>(next.fragments[f].size()) > limit)
                fail("child fragment exceeds 4*ceil(|E|/k) edges");
    }
    return out;
}

}  // namespace toll
