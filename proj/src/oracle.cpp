#include "tollbooth/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>

#include "tollbooth/evaluator.hpp"

namespace toll {

GridSpec uniform_grid(int edge_count, std::vector<Rational> values) {
    values.push_back(Rational(0));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    GridSpec g;
    g.per_edge.assign(edge_count, values);
    return g;
}

GridSpec default_grid(const CactusInstance& inst) {
    std::vector<Rational> values;
    for (const auto& b : inst.buyers) {
        values.push_back(b.budget);
        values.push_back(b.budget / 2);
        for (const auto& c : inst.buyers)
            if (b.budget >= c.budget) values.push_back(b.budget - c.budget);
    }
    return uniform_grid(inst.graph.edge_count(), values);
}

GridSpec budget_grid(const CactusInstance& inst) {
    std::vector<Rational> values;
    for (const auto& b : inst.buyers) values.push_back(b.budget);
    return uniform_grid(inst.graph.edge_count(), values);
}

namespace {

using Key = std::vector<std::int64_t>;

struct Table {
    std::vector<int> buyers;  // sorted buyer indices still travelling towards the top vertex
    std::map<Key, std::int64_t> best;
};

void relax(std::map<Key, std::int64_t>& m, Key key, std::int64_t value) {
    auto [it, fresh] = m.emplace(std::move(key), value);
    if (!fresh && value > it->second) it->second = value;
}

class GridDp {
public:
    GridDp(const CactusInstance& inst, const GridSpec& grid, const std::vector<int>& zero_edges,
           OracleLimits limits)
        : g_(inst.graph), tree_(build_bc_tree(inst.graph, 0)), limit_(limits.max_work) {
        std::vector<char> pinned(g_.edge_count(), 0);
        for (int e : zero_edges) pinned[e] = 1;
        mpz_class scale = 1;
        for (int e = 0; e < g_.edge_count(); ++e)
            if (!pinned[e])
                for (const auto& v : grid.per_edge[e]) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.get_den_mpz_t());
        for (const auto& b : inst.buyers) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), b.budget.get_den_mpz_t());
        scale_ = scale;
        for (std::size_t i = 0; i < inst.buyers.size(); ++i) {
            const Buyer& b = inst.buyers[i];
            if (b.s == b.t) continue;
            ends_.push_back({b.s, b.t});
            budget_.push_back(to_int(b.budget));
        }
        cap_ = 0;
        for (auto b : budget_) cap_ = std::max(cap_, b + 1);
        values_.resize(g_.edge_count());
        for (int e = 0; e < g_.edge_count(); ++e) {
            std::set<std::int64_t> vals{0};
            if (!pinned[e])
                for (const auto& v : grid.per_edge[e]) vals.insert(std::min(to_int(v), cap_));
            values_[e].assign(vals.begin(), vals.end());
        }
        inside_.assign(tree_.components.size(), std::vector<char>(g_.vertex_count, 0));
        for (int c = 0; c < static_cast<int>(tree_.components.size()); ++c)
            for (int v : subtree_graph(tree_, c).vertices) inside_[c][v] = 1;
    }

    Rational run() {
        Table root = vertex_table(tree_.root_vertex);
        std::int64_t best = 0;
        for (const auto& [k, v] : root.best) best = std::max(best, v);
        Rational out(mpz_class(static_cast<long>(best)), scale_);
        out.canonicalize();
        return out;
    }

private:
    std::int64_t to_int(const Rational& v) const {
        mpz_class scaled = v.get_num() * (scale_ / v.get_den());
        if (scaled > mpz_class(1L << 50)) throw TooLarge("grid values too large to scale");
        return static_cast<std::int64_t>(scaled.get_si());
    }

    void charge(std::size_t amount) {
        work_ += amount;
        if (work_ > limit_) throw TooLarge("grid oracle exceeded its work budget");
    }

    std::int64_t clamp(int buyer, std::int64_t d) const { return std::min(d, budget_[buyer] + 1); }

    std::int64_t pay(int buyer, std::int64_t d) const { return d <= budget_[buyer] ? d : 0; }

    std::vector<char> below(int w) const {
        std::vector<char> in(g_.vertex_count, 0);
        in[w] = 1;
        for (int c : tree_.hanging[w])
            for (int v = 0; v < g_.vertex_count; ++v) in[v] |= inside_[c][v];
        return in;
    }

    // Endpoint of `buyer` outside `region`.
    int outer_end(int buyer, const std::vector<char>& region) const {
        return region[ends_[buyer].first] ? ends_[buyer].second : ends_[buyer].first;
    }

    Table combine(const Table& a, const Table& b) {
        Table out;
        std::vector<int> shared;
        std::set_intersection(a.buyers.begin(), a.buyers.end(), b.buyers.begin(), b.buyers.end(),
                              std::back_inserter(shared));
        std::set_symmetric_difference(a.buyers.begin(), a.buyers.end(), b.buyers.begin(), b.buyers.end(),
                                      std::back_inserter(out.buyers));
        auto pos = [](const std::vector<int>& list, int x) {
            return static_cast<std::size_t>(std::lower_bound(list.begin(), list.end(), x) - list.begin());
        };
        charge(a.best.size() * b.best.size());
        for (const auto& [ka, ra] : a.best)
            for (const auto& [kb, rb] : b.best) {
                std::int64_t rev = ra + rb;
                for (int i : shared) rev += pay(i, clamp(i, ka[pos(a.buyers, i)] + kb[pos(b.buyers, i)]));
                Key key;
                key.reserve(out.buyers.size());
                for (int i : out.buyers) {
                    auto ia = std::lower_bound(a.buyers.begin(), a.buyers.end(), i);
                    key.push_back(ia != a.buyers.end() && *ia == i ? ka[ia - a.buyers.begin()]
                                                                   : kb[pos(b.buyers, i)]);
                }
                relax(out.best, std::move(key), rev);
            }
        return out;
    }

    // Everything hanging below w; adds buyers starting at w itself at distance 0.
    Table lifted_vertex_table(int w) {
        Table t = vertex_table(w);
        auto region = below(w);
        std::vector<int> extra;
        for (int i = 0; i < static_cast<int>(ends_.size()); ++i) {
            auto [s, u] = ends_[i];
            if ((s == w && !region[u]) || (u == w && !region[s])) extra.push_back(i);
        }
        if (extra.empty()) return t;
        Table zeros;
        zeros.buyers = extra;
        zeros.best[Key(extra.size(), 0)] = 0;
        return combine(t, zeros);
    }

    Table vertex_table(int w) {
        Table t;
        t.best[Key{}] = 0;
        for (int c : tree_.hanging[w]) t = combine(t, component_table(c));
        return t;
    }

    Table component_table(int c) {
        const Component& comp = tree_.components[c];
        return comp.kind == ComponentKind::Bridge ? bridge_table(comp) : cycle_table(comp);
    }

    Table bridge_table(const Component& comp) {
        int x = comp.top, w = comp.vertices[1];
        Table low = lifted_vertex_table(w);
        auto region = below(w);
        Table out;
        std::vector<char> resolves(low.buyers.size());
        for (std::size_t j = 0; j < low.buyers.size(); ++j) {
            resolves[j] = outer_end(low.buyers[j], region) == x;
            if (!resolves[j]) out.buyers.push_back(low.buyers[j]);
        }
        const auto& vals = values_[comp.edges[0]];
        charge(vals.size() * low.best.size());
        for (std::int64_t p : vals)
            for (const auto& [k, r] : low.best) {
                std::int64_t rev = r;
                Key key;
                for (std::size_t j = 0; j < k.size(); ++j) {
                    std::int64_t d = clamp(low.buyers[j], k[j] + p);
                    if (resolves[j])
                        rev += pay(low.buyers[j], d);
                    else
                        key.push_back(d);
                }
                relax(out.best, std::move(key), rev);
            }
        return out;
    }

    Table cycle_table(const Component& comp) {
        const int k = static_cast<int>(comp.vertices.size()) - 1;
        std::vector<char> cycle_region(g_.vertex_count, 0);
        std::vector<int> position(g_.vertex_count, -1);
        for (int i = 0; i <= k; ++i) position[comp.vertices[i]] = i;

        std::int64_t constant = 0;
        std::vector<int> relevant{0};
        std::vector<Table> parts;
        std::vector<std::vector<char>> regions;
        for (int i = 1; i <= k; ++i) {
            Table t = lifted_vertex_table(comp.vertices[i]);
            auto region = below(comp.vertices[i]);
            for (int v = 0; v < g_.vertex_count; ++v) cycle_region[v] |= region[v];
            if (t.buyers.empty()) {
                constant += t.best.begin()->second;
                continue;
            }
            relevant.push_back(i);
            parts.push_back(std::move(t));
            regions.push_back(std::move(region));
        }
        cycle_region[comp.top] = 1;
        Table out;
        if (parts.empty()) {
            out.best[Key{}] = constant;
            return out;
        }
        // Where every travelling buyer ends: another part (index), the top (-1), or outside (-2).
        std::vector<std::vector<int>> target(parts.size());
        std::set<int> crossing;
        for (std::size_t a = 0; a < parts.size(); ++a)
            for (int b : parts[a].buyers) {
                int other = outer_end(b, regions[a]);
                int tgt = -2;
                if (other == comp.top)
                    tgt = -1;
                else
                    for (std::size_t q = 0; q < parts.size(); ++q)
                        if (q != a && regions[q][other]) tgt = static_cast<int>(q);
                target[a].push_back(tgt);
                if (tgt == -2) crossing.insert(b);
            }
        out.buyers.assign(crossing.begin(), crossing.end());

        // Arc j runs from relevant[j] to relevant[j+1] (cyclically).
        const std::size_t arcs = relevant.size();
        std::vector<std::vector<std::int64_t>> arc_sums(arcs);
        for (std::size_t j = 0; j < arcs; ++j) {
            int from = relevant[j], to = j + 1 < arcs ? relevant[j + 1] : k + 1;
            std::set<std::int64_t> sums{0};
            for (int e = from; e < to; ++e) {
                std::set<std::int64_t> next;
                for (auto s : sums)
                    for (auto p : values_[comp.edges[e]]) next.insert(std::min(s + p, cap_));
                sums = std::move(next);
            }
            arc_sums[j].assign(sums.begin(), sums.end());
        }
        std::size_t states = 1, combos = 1;
        for (const auto& t : parts) states *= t.best.size();
        for (const auto& s : arc_sums) combos *= s.size();
        charge(states * combos);

        std::vector<std::vector<std::pair<const Key*, std::int64_t>>> entries(parts.size());
        for (std::size_t a = 0; a < parts.size(); ++a)
            for (const auto& [key, r] : parts[a].best) entries[a].push_back({&key, r});

        std::vector<std::size_t> arc_pick(arcs, 0);
        std::vector<std::int64_t> dist_top(arcs), dist(arcs * arcs);
        while (true) {
            // cycle distances between relevant positions, capped
            std::int64_t total = 0;
            for (std::size_t j = 0; j < arcs; ++j) total += arc_sums[j][arc_pick[j]];
            for (std::size_t a = 0; a < arcs; ++a) {
                std::int64_t cw = 0;
                for (std::size_t b = a; b < arcs + a; ++b) {
                    std::size_t bb = b % arcs;
                    std::size_t target_pos = (b + 1) % arcs;
                    cw += arc_sums[bb][arc_pick[bb]];
                    dist[a * arcs + target_pos] = std::min({cw, total - cw, cap_});
                }
                dist[a * arcs + a] = 0;
            }
            std::vector<std::size_t> pick(parts.size(), 0);
            while (true) {
                std::int64_t rev = constant;
                std::map<int, std::int64_t> outgoing;
                for (std::size_t a = 0; a < parts.size(); ++a) {
                    const auto& [key, r] = entries[a][pick[a]];
                    rev += r;
                    std::size_t pa = a + 1;  // index into relevant
                    for (std::size_t j = 0; j < key->size(); ++j) {
                        int b = parts[a].buyers[j];
                        int tgt = target[a][j];
                        if (tgt >= 0) {
                            if (static_cast<int>(a) < tgt) {
                                const Key& other = *entries[tgt][pick[tgt]].first;
                                auto it = std::lower_bound(parts[tgt].buyers.begin(), parts[tgt].buyers.end(), b);
                                std::int64_t d = (*key)[j] + dist[pa * arcs + tgt + 1] +
                                                 other[it - parts[tgt].buyers.begin()];
                                rev += pay(b, clamp(b, d));
                            }
                        } else {
                            std::int64_t d = clamp(b, (*key)[j] + dist[pa * arcs]);
                            if (tgt == -1)
                                rev += pay(b, d);
                            else
                                outgoing[b] = d;
                        }
                    }
                }
                Key key;
                for (int b : out.buyers) key.push_back(outgoing[b]);
                relax(out.best, std::move(key), rev);
                std::size_t a = 0;
                while (a < parts.size() && ++pick[a] == entries[a].size()) pick[a++] = 0;
                if (a == parts.size()) break;
            }
            std::size_t j = 0;
            while (j < arcs && ++arc_pick[j] == arc_sums[j].size()) arc_pick[j++] = 0;
            if (j == arcs) break;
        }
        return out;
    }

    const CactusGraph& g_;
    BCTree tree_;
    std::size_t limit_;
    std::size_t work_ = 0;
    mpz_class scale_;
    std::vector<std::pair<int, int>> ends_;
    std::vector<std::int64_t> budget_;
    std::int64_t cap_ = 0;
    std::vector<std::vector<std::int64_t>> values_;
    std::vector<std::vector<char>> inside_;
};

}  // namespace

Rational oracle_grid(const CactusInstance& inst, const GridSpec& grid, const std::vector<int>& zero_edges,
                     OracleLimits limits) {
    GridDp dp(inst, grid, zero_edges, limits);
    return dp.run();
}

Rational oracle_grid_bruteforce(const CactusInstance& inst, const GridSpec& grid,
                                const std::vector<int>& zero_edges, std::size_t max_space) {
    const int m = inst.graph.edge_count();
    std::vector<std::vector<Rational>> choices(m);
    std::size_t space = 1;
    for (int e = 0; e < m; ++e) {
        bool pinned = std::find(zero_edges.begin(), zero_edges.end(), e) != zero_edges.end();
        choices[e] = pinned ? std::vector<Rational>{Rational(0)} : grid.per_edge[e];
        space *= choices[e].size();
        if (space > max_space) throw TooLarge("grid space exceeds the enumeration guard");
    }
    std::vector<std::size_t> pick(m, 0);
    Prices prices(m);
    Rational best = 0;
    while (true) {
        for (int e = 0; e < m; ++e) prices[e] = choices[e][pick[e]];
        best = std::max(best, revenue(inst.graph, prices, inst.buyers));
        int e = 0;
        while (e < m && ++pick[e] == choices[e].size()) pick[e++] = 0;
        if (e == m) break;
    }
    return best;
}

Rational oracle_rooted(const RootedInstance& inst, std::size_t max_space) {
    const CactusGraph& g = inst.graph;
    DepthCandidates cand = candidate_depths(inst);
    auto root_it = inst.depth_constraints.find(inst.root);
    if (root_it != inst.depth_constraints.end() && root_it->second != 0)
        throw InfeasibleConstraints("root depth must be 0");
    std::vector<int> free_vertices;
    std::size_t space = 1;
    for (int v = 0; v < g.vertex_count; ++v) {
        if (v == inst.root) continue;
        free_vertices.push_back(v);
        space *= cand.per_vertex[v].size();
        if (space > max_space) throw TooLarge("rooted oracle space exceeds the guard");
    }
    std::vector<Rational> depth(g.vertex_count, Rational(0));
    std::vector<std::size_t> pick(free_vertices.size(), 0);
    std::optional<Rational> best;
    std::vector<char> reached(g.vertex_count);
    std::vector<int> stack;
    while (true) {
        for (std::size_t i = 0; i < free_vertices.size(); ++i)
            depth[free_vertices[i]] = cand.per_vertex[free_vertices[i]][pick[i]];
        // Realizable iff every vertex is reached from the root along nondecreasing depths
        // (then pricing each edge at the depth difference yields exactly these distances).
        std::fill(reached.begin(), reached.end(), 0);
        reached[inst.root] = 1;
        stack.assign(1, inst.root);
        int count = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (auto [w, e] : g.adjacency[u])
                if (!reached[w] && depth[w] >= depth[u]) {
                    reached[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
        }
        if (count == g.vertex_count) {
            Rational total = 0;
            for (const auto& [dest, budget] : inst.demands)
                if (depth[dest] <= budget) total += depth[dest];
            if (!best || total > *best) best = total;
        }
        std::size_t i = 0;
        while (i < free_vertices.size() && ++pick[i] == cand.per_vertex[free_vertices[i]].size()) pick[i++] = 0;
        if (i == free_vertices.size()) break;
    }
    if (!best) throw InfeasibleConstraints("depth constraints cannot be met");
    return *best;
}

}  // namespace toll
