#include "tollbooth/skeleton_solver.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <queue>
#include <set>

#include "tollbooth/evaluator.hpp"
#include "tollbooth/rooted.hpp"

namespace toll {

namespace {

using Adjacency = std::vector<std::vector<std::pair<int, int>>>;  // (to, slot)

int ceil_log2(const mpz_class& x) {
    int steps = 0;
    mpz_class power = 1;
    while (power < x) {
        power *= 2;
        ++steps;
    }
    return steps;
}

std::vector<Rational> halvings(const Rational& top, int steps) {
    std::vector<Rational> out{Rational(0)};
    Rational value = top;
    for (int t = 0; t <= steps; ++t) {
        out.push_back(value);
        value /= 2;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Dijkstra over slots; slots with usable == 0 are skipped. parent_slot is optional.
void shortest_paths(const Adjacency& adj, const std::vector<Rational>& weight, const std::vector<char>& usable,
                    int source, std::vector<Rational>& dist, std::vector<char>& reached,
                    std::vector<int>* parent_slot = nullptr) {
    const int n = static_cast<int>(adj.size());
    dist.assign(n, Rational(0));
    reached.assign(n, 0);
    if (parent_slot) parent_slot->assign(n, -1);
    std::vector<char> done(n, 0);
    using Item = std::pair<Rational, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    reached[source] = 1;
    queue.push({Rational(0), source});
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (done[v]) continue;
        done[v] = 1;
        for (auto [to, slot] : adj[v]) {
            if (!usable[slot]) continue;
            Rational next = d + weight[slot];
            if (!reached[to] || next < dist[to]) {
                reached[to] = 1;
                dist[to] = next;
                if (parent_slot) (*parent_slot)[to] = slot;
                queue.push({next, to});
            }
        }
    }
}

// Segment as a standalone graph: local vertex ids, slot i = s.edges[i].
struct LocalSegment {
    std::map<int, int> local;
    Adjacency adj;
};

LocalSegment local_segment(const CactusGraph& g, const Segment& s) {
    LocalSegment out;
    for (int v : vertices_of(g, s.edges)) out.local.emplace(v, static_cast<int>(out.local.size()));
    out.adj.resize(out.local.size());
    for (int i = 0; i < static_cast<int>(s.edges.size()); ++i) {
        int a = out.local.at(g.edges[s.edges[i]].first), b = out.local.at(g.edges[s.edges[i]].second);
        out.adj[a].push_back({b, i});
        out.adj[b].push_back({a, i});
    }
    return out;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
    return a * b;
}

RootedSolution solve_path(int length, const std::vector<std::pair<int, Rational>>& demands) {
    RootedInstance inst;
    std::vector<Edge> edges;
    for (int i = 0; i < length; ++i) edges.push_back({i, i + 1});
    inst.graph = make_cactus(length + 1, edges);
    inst.root = 0;
    inst.demands = demands;
    return solve_rooted(inst);
}

}  // namespace

PriceGrid make_grids(int m, const Rational& b_max, int buyers) {
    if (b_max <= 0) throw AllBudgetsZero("every budget at this level is zero");
    PriceGrid grid;
    grid.m = m;
    grid.b_max = b_max;
    grid.buyers = buyers;
    const mpz_class mm = m, nn = std::max(buyers, 1);
    grid.inner = halvings(Rational(mm) * b_max, ceil_log2(1024 * mm * mm * nn));
    grid.outer = halvings(Rational(mm * mm) * b_max, ceil_log2(1024 * mm * mm * mm * nn));
    grid.p_min = grid.inner[1];
    return grid;
}

Rational segment_length(const CactusGraph& g, const Prices& prices, const Segment& s) {
    LocalSegment ls = local_segment(g, s);
    std::vector<Rational> weight;
    for (int e : s.edges) weight.push_back(prices[e]);
    std::vector<char> usable(s.edges.size(), 1), reached;
    std::vector<Rational> dist;
    shortest_paths(ls.adj, weight, usable, ls.local.at(s.l), dist, reached);
    return dist[ls.local.at(s.r)];
}

Prices round_prices(const CactusGraph& g, const Prices& prices, const SegmentSet& segs, const PriceGrid& grid) {
    Prices out(prices);
    for (auto& p : out)
        if (p > grid.b_max) p = grid.b_max;
    for (const Segment& s : segs.segments) {
        LocalSegment ls = local_segment(g, s);
        std::vector<Rational> weight;
        for (int e : s.edges) weight.push_back(out[e]);
        std::vector<char> usable(s.edges.size(), 1), reached;
        std::vector<Rational> dist;
        std::vector<int> parent;
        shortest_paths(ls.adj, weight, usable, ls.local.at(s.l), dist, reached, &parent);
        const Rational length = dist[ls.local.at(s.r)];
        if (length == 0) continue;
        auto above = std::upper_bound(grid.inner.begin(), grid.inner.end(), length);
        const Rational target = *std::prev(above);
        if (target == length) continue;
        const Rational factor = target / length;
        // Every other l-r path stays at least `length`, hence at least `target`.
        for (int at = s.r; at != s.l;) {
            const int e = s.edges[parent[ls.local.at(at)]];
            out[e] *= factor;
            at = g.other_end(e, at);
        }
    }
    return out;
}

bool Interval::contains(const Rational& x) const {
    switch (kind) {
        case ExactZero: return x == 0;
        case Range: return x > low && x <= high;
        case Unbounded: return x > low;
        case Any: return true;
    }
    return false;
}

std::optional<Rational> Interval::charged() const {
    switch (kind) {
        case ExactZero: return Rational(0);
        case Range: return high;
        default: return std::nullopt;
    }
}

std::size_t StrategySpace::size() const {
    std::size_t total = 1;
    for (const auto& v : inner_values) total = saturating_mul(total, v.size());
    for (const auto& v : outer_intervals) total = saturating_mul(total, v.size());
    return total;
}

std::vector<std::size_t> StrategySpace::digits(std::size_t index) const {
    const std::size_t inner = inner_values.size();
    std::vector<std::size_t> out(inner + outer_intervals.size(), 0);
    for (std::size_t i = out.size(); i-- > 0;) {
        const std::size_t radix = i < inner ? inner_values[i].size() : outer_intervals[i - inner].size();
        out[i] = index % radix;
        index /= radix;
    }
    return out;
}

PricingStrategy StrategySpace::at(std::size_t index) const {
    const auto d = digits(index);
    PricingStrategy s;
    for (std::size_t i = 0; i < inner_values.size(); ++i) s.inner_cost.push_back(inner_values[i][d[i]]);
    for (std::size_t x = 0; x < outer_intervals.size(); ++x)
        s.outer.push_back(outer_intervals[x][d[inner_values.size() + x]]);
    return s;
}

std::vector<Interval> outer_interval_list(const PriceGrid& grid) {
    std::vector<Interval> out{Interval{}};
    for (std::size_t i = 1; i < grid.outer.size(); ++i)
        out.push_back(Interval{Interval::Range, grid.outer[i - 1], grid.outer[i]});
    return out;
}

StrategySpace enumerate_strategies(const FragmentSkeleton& fs, const PriceGrid& grid) {
    StrategySpace space;
    space.inner_values.assign(fs.inner_segments.size(), grid.inner);
    space.outer_intervals.assign(fs.outer_extensions.size(), outer_interval_list(grid));
    return space;
}

std::vector<Rational> price_segment(const CactusGraph& g, const Segment& s, const Rational& c,
                                    const std::vector<InvolvedBuyer>& view, int option) {
    std::vector<Rational> out(s.edges.size(), Rational(0));
    auto index_of = [&](int e) {
        return static_cast<int>(std::lower_bound(s.edges.begin(), s.edges.end(), e) - s.edges.begin());
    };
    if (option == 1 || option == 2) {
        const int end = option == 1 ? s.l : s.r;
        if (s.cyclic) {
            for (std::size_t i = 0; i < s.edges.size(); ++i)
                if (g.edges[s.edges[i]].first == end || g.edges[s.edges[i]].second == end) out[i] = c;
        } else {
            out[index_of(option == 1 ? s.path_edges.front() : s.path_edges.back())] = c;
        }
        return out;
    }
    if (s.cyclic) {
        const bool from_l = option == 3;
        SubCactus sub = make_subcactus(g, s.edges);
        RootedInstance inst;
        inst.graph = sub.graph;
        inst.root = sub.local_vertex.at(from_l ? s.l : s.r);
        inst.depth_constraints[sub.local_vertex.at(from_l ? s.r : s.l)] = c;
        for (const auto& b : view) {
            if (b.exit != (from_l ? 0 : 1)) continue;
            const Rational& via = from_l ? b.via_l : b.via_r;
            if (via > 0) inst.demands.emplace_back(sub.local_vertex.at(b.vertex), via);
        }
        RootedSolution sol = solve_rooted(inst);
        for (std::size_t le = 0; le < sol.prices.size(); ++le) out[index_of(sub.global_edge[le])] = sol.prices[le];
        return out;
    }
    const int len = static_cast<int>(s.path_edges.size());
    if (option == 3) {
        if (len == 1) {
            out[0] = c;
        } else {
            out[index_of(s.path_edges.front())] = c / 2;
            out[index_of(s.path_edges.back())] = c / 2;
        }
        return out;
    }
    // option 4: pivot edge absorbs what the two rooted halves leave of c
    std::map<int, int> position;
    for (int i = 0; i < static_cast<int>(s.path_vertices.size()); ++i) position[s.path_vertices[i]] = i;
    std::vector<std::pair<int, InvolvedBuyer>> cheap;
    for (const auto& b : view) {
        if (b.exit < 0) continue;
        if (std::max(b.via_l, b.via_r) < c / 2) cheap.push_back({position.at(b.vertex), b});
    }
    bool found = false;
    Rational best_revenue;
    std::vector<Rational> best;
    for (int pivot = 0; pivot < len; ++pivot) {
        std::vector<std::pair<int, Rational>> left, right;
        for (const auto& [pos, b] : cheap) {
            if (pos <= pivot) {
                if (b.via_l > 0) left.push_back({pos, b.via_l});
            } else if (b.via_r > 0) {
                right.push_back({len - pos, b.via_r});
            }
        }
        std::vector<Rational> cand(s.edges.size(), Rational(0));
        Rational revenue = 0, used = 0;
        if (pivot > 0 && !left.empty()) {
            RootedSolution sol = solve_path(pivot, left);
            for (int i = 0; i < pivot; ++i) {
                cand[index_of(s.path_edges[i])] = sol.prices[i];
                used += sol.prices[i];
            }
            revenue += sol.revenue;
        }
        if (pivot < len - 1 && !right.empty()) {
            RootedSolution sol = solve_path(len - 1 - pivot, right);
            for (int i = 0; i < len - 1 - pivot; ++i) {
                cand[index_of(s.path_edges[len - 1 - i])] = sol.prices[i];
                used += sol.prices[i];
            }
            revenue += sol.revenue;
        }
        if (used > c) continue;
        cand[index_of(s.path_edges[pivot])] = c - used;
        if (!found || revenue >= best_revenue) {
            found = true;
            best_revenue = revenue;
            best = std::move(cand);
        }
    }
    if (!found) return price_segment(g, s, c, view, 3);
    return best;
}

FragmentSolver::FragmentSolver(const CactusGraph& g, const SegmentSet& segs, const FragmentSkeleton& fs,
                               std::vector<Buyer> buyers, std::size_t max_combinations)
    : g_(g), segs_(segs), fs_(fs), buyers_(std::move(buyers)), max_combinations_(max_combinations) {
    std::set<int> touched;
    for (int q : fs_.inner_segments)
        for (int v : vertices_of(g_, segs_.segments[q].edges)) touched.insert(v);
    for (const auto& ext : fs_.outer_extensions) {
        touched.insert(ext.u);
        touched.insert(ext.v);
    }
    for (int v : touched) local_.emplace(v, nodes_++);

    const int inner = static_cast<int>(fs_.inner_segments.size());
    interior_.assign(g_.vertex_count, -1);
    adjacency_.assign(nodes_, {});
    slots_of_position_.assign(inner, {});
    int slot = 0;
    for (int q = 0; q < inner; ++q) {
        const Segment& s = segs_.segments[fs_.inner_segments[q]];
        for (int v : vertices_of(g_, s.edges))
            if (v != s.l && v != s.r) interior_[v] = q;
        for (int e : s.edges) {
            int a = local_.at(g_.edges[e].first), b = local_.at(g_.edges[e].second);
            adjacency_[a].push_back({b, slot});
            adjacency_[b].push_back({a, slot});
            slots_of_position_[q].push_back(slot++);
        }
        metric_edges_.push_back({local_.at(s.l), local_.at(s.r)});
    }
    extension_slot_ = slot;
    for (const auto& ext : fs_.outer_extensions) {
        int a = local_.at(ext.u), b = local_.at(ext.v);
        adjacency_[a].push_back({b, slot});
        adjacency_[b].push_back({a, slot});
        ++slot;
        metric_edges_.push_back({a, b});
    }

    // Component labels of G without each cyclic segment, to tell which end a buyer leaves by.
    exit_label_.assign(inner, {});
    for (int q = 0; q < inner; ++q) {
        const Segment& s = segs_.segments[fs_.inner_segments[q]];
        if (!s.cyclic) continue;
        std::vector<int> parent(g_.vertex_count);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
        for (int e = 0; e < g_.edge_count(); ++e)
            if (segs_.segment_of_edge[e] != fs_.inner_segments[q])
                parent[find(g_.edges[e].first)] = find(g_.edges[e].second);
        exit_label_[q].resize(g_.vertex_count);
        for (int v = 0; v < g_.vertex_count; ++v) exit_label_[q][v] = find(v);
    }

    std::map<int, std::vector<int>> involved;
    std::set<int> sources;
    for (int i = 0; i < static_cast<int>(buyers_.size()); ++i) {
        const Buyer& b = buyers_[i];
        if (!local_.count(b.s) || !local_.count(b.t))
            throw std::logic_error("buyer representative outside its fragment skeleton");
        sources.insert(local_.at(b.s));
        for (int end : {b.s, b.t}) {
            int q = interior_[end];
            if (q < 0) continue;
            auto& list = involved[q];
            if (list.empty() || list.back() != i) list.push_back(i);
        }
    }
    sources_.assign(sources.begin(), sources.end());
    for (auto& [q, list] : involved) {
        involved_.push_back(q);
        involved_buyers_.push_back(list);
        full_combinations_ = saturating_mul(full_combinations_, 4);
    }
}

std::size_t FragmentSolver::combinations() const {
    std::size_t total = 1;
    for (std::size_t i = 0; i < involved_.size() && total * 4 <= max_combinations_; ++i) total *= 4;
    return total;
}

FragmentSolver::Metric FragmentSolver::metric(const PricingStrategy& s) const {
    Adjacency adj(nodes_);
    std::vector<Rational> weight;
    std::vector<char> usable;
    for (int i = 0; i < static_cast<int>(metric_edges_.size()); ++i) {
        auto [a, b] = metric_edges_[i];
        adj[a].push_back({b, i});
        adj[b].push_back({a, i});
        const int inner = static_cast<int>(fs_.inner_segments.size());
        if (i < inner) {
            weight.push_back(s.inner_cost[i]);
            usable.push_back(1);
        } else {
            auto c = s.outer[i - inner].charged();
            weight.push_back(c ? *c : Rational(0));
            usable.push_back(c.has_value());
        }
    }
    Metric out;
    for (int q : involved_) {
        for (int end : {metric_edges_[q].first, metric_edges_[q].second}) {
            if (out.count(end)) continue;
            auto& [dist, reached] = out[end];
            shortest_paths(adj, weight, usable, end, dist, reached);
        }
    }
    return out;
}

std::vector<InvolvedBuyer> FragmentSolver::view_with(const Metric& dist, const PricingStrategy& s,
                                                     int position) const {
    (void)s;
    std::vector<InvolvedBuyer> out;
    auto it = std::find(involved_.begin(), involved_.end(), position);
    if (it == involved_.end()) return out;
    const Segment& seg = segs_.segments[fs_.inner_segments[position]];
    const auto& from_l = dist.at(local_.at(seg.l));
    const auto& from_r = dist.at(local_.at(seg.r));
    for (int i : involved_buyers_[it - involved_.begin()]) {
        const Buyer& b = buyers_[i];
        InvolvedBuyer ib;
        ib.buyer = i;
        const bool in_s = interior_[b.s] == position, in_t = interior_[b.t] == position;
        if (in_s && in_t) {
            ib.vertex = b.s;
            ib.via_l = ib.via_r = b.budget;
            ib.exit = -1;
            out.push_back(ib);
            continue;
        }
        ib.vertex = in_s ? b.s : b.t;
        const int other = in_s ? b.t : b.s;
        std::vector<int> ends;
        if (interior_[other] >= 0) {
            ends = {metric_edges_[interior_[other]].first, metric_edges_[interior_[other]].second};
        } else {
            ends = {local_.at(other)};
        }
        auto residual = [&](const std::pair<std::vector<Rational>, std::vector<char>>& d) {
            bool any = false;
            Rational nearest;
            for (int e : ends)
                if (d.second[e] && (!any || d.first[e] < nearest)) {
                    any = true;
                    nearest = d.first[e];
                }
            return any ? Rational(b.budget - nearest) : Rational(-1);
        };
        ib.via_l = residual(from_l);
        ib.via_r = residual(from_r);
        ib.exit = 0;
        if (seg.cyclic) ib.exit = exit_label_[position][other] == exit_label_[position][seg.l] ? 0 : 1;
        out.push_back(ib);
    }
    return out;
}

std::vector<InvolvedBuyer> FragmentSolver::view(const PricingStrategy& s, int position) const {
    return view_with(metric(s), s, position);
}

const std::vector<Rational>& FragmentSolver::cached_option(int position, const Rational& c,
                                                           const std::vector<InvolvedBuyer>& view, int option) {
    const Segment& seg = segs_.segments[fs_.inner_segments[position]];
    std::string key = std::to_string(position) + '|' + std::to_string(option) + '|' + c.get_str();
    const bool uses_view = option == 4 || (option == 3 && seg.cyclic);
    if (uses_view)
        for (const auto& b : view)
            key += '|' + std::to_string(b.vertex) + ',' + b.via_l.get_str() + ',' + b.via_r.get_str() + ',' +
                   std::to_string(b.exit);
    auto it = option_cache_.find(key);
    if (it == option_cache_.end())
        it = option_cache_.emplace(key, price_segment(g_, seg, c, view, option)).first;
    return it->second;
}

void FragmentSolver::extension_weights(const PricingStrategy& s, std::vector<Rational>& weight,
                                       std::vector<char>& usable) const {
    for (std::size_t x = 0; x < fs_.outer_extensions.size(); ++x) {
        auto c = s.outer[x].charged();
        weight[extension_slot_ + x] = c ? *c : Rational(0);
        usable[extension_slot_ + x] = c.has_value();
    }
}

Rational FragmentSolver::evaluate(const std::vector<Rational>& weight, const std::vector<char>& usable) const {
    Rational total = 0;
    std::vector<Rational> dist;
    std::vector<char> reached;
    for (int source : sources_) {
        shortest_paths(adjacency_, weight, usable, source, dist, reached);
        for (const Buyer& b : buyers_) {
            if (local_.at(b.s) != source) continue;
            const int t = local_.at(b.t);
            if (reached[t] && dist[t] <= b.budget) total += dist[t];
        }
    }
    return total;
}

Rational FragmentSolver::approximate_revenue(const PricingStrategy& s, const Prices& prices) const {
    const std::size_t slots = extension_slot_ + fs_.outer_extensions.size();
    std::vector<Rational> weight(slots);
    std::vector<char> usable(slots, 1);
    for (std::size_t q = 0; q < fs_.inner_segments.size(); ++q) {
        const Segment& seg = segs_.segments[fs_.inner_segments[q]];
        for (std::size_t i = 0; i < seg.edges.size(); ++i) weight[slots_of_position_[q][i]] = prices[seg.edges[i]];
    }
    extension_weights(s, weight, usable);
    return evaluate(weight, usable);
}

Prices FragmentSolver::plain_prices(const PricingStrategy& s) const {
    Prices out(g_.edge_count(), Rational(0));
    for (std::size_t q = 0; q < fs_.inner_segments.size(); ++q) {
        const Segment& seg = segs_.segments[fs_.inner_segments[q]];
        auto p = price_segment(g_, seg, s.inner_cost[q], {}, 1);
        for (std::size_t i = 0; i < seg.edges.size(); ++i) out[seg.edges[i]] = p[i];
    }
    return out;
}

FragmentSolution FragmentSolver::solve(const PricingStrategy& s) {
    const int inner = static_cast<int>(fs_.inner_segments.size());
    const std::size_t slots = extension_slot_ + fs_.outer_extensions.size();
    std::vector<Rational> weight(slots);
    std::vector<char> usable(slots, 1);
    extension_weights(s, weight, usable);
    std::vector<std::vector<Rational>> plain(inner);
    for (int q = 0; q < inner; ++q) {
        plain[q] = price_segment(g_, segs_.segments[fs_.inner_segments[q]], s.inner_cost[q], {}, 1);
        for (std::size_t i = 0; i < plain[q].size(); ++i) weight[slots_of_position_[q][i]] = plain[q][i];
    }

    const std::size_t combos = combinations();
    std::size_t enumerated = 0;
    for (std::size_t c = combos; c > 1; c /= 4) ++enumerated;
    std::vector<std::vector<const std::vector<Rational>*>> choices(enumerated);
    if (enumerated > 0) {
        const Metric dist = metric(s);
        for (std::size_t idx = 0; idx < enumerated; ++idx) {
            const int q = involved_[idx];
            const auto v = view_with(dist, s, q);
            for (int option = 1; option <= 4; ++option)
                choices[idx].push_back(&cached_option(q, s.inner_cost[q], v, option));
        }
    }

    FragmentSolution best;
    std::size_t best_combo = 0;
    bool have = false;
    for (std::size_t combo = 0; combo < combos; ++combo) {
        std::size_t rest = combo;
        for (std::size_t idx = enumerated; idx-- > 0;) {
            const auto& p = *choices[idx][rest % 4];
            rest /= 4;
            const int q = involved_[idx];
            for (std::size_t i = 0; i < p.size(); ++i) weight[slots_of_position_[q][i]] = p[i];
        }
        Rational score = evaluate(weight, usable);
        if (!have || score > best.score) {
            have = true;
            best.score = score;
            best_combo = combo;
        }
    }

    best.options.assign(inner, 1);
    best.prices.assign(g_.edge_count(), Rational(0));
    std::vector<const std::vector<Rational>*> chosen(inner);
    for (int q = 0; q < inner; ++q) chosen[q] = &plain[q];
    std::size_t rest = best_combo;
    for (std::size_t idx = enumerated; idx-- > 0;) {
        best.options[involved_[idx]] = static_cast<int>(rest % 4) + 1;
        chosen[involved_[idx]] = choices[idx][rest % 4];
        rest /= 4;
    }
    for (int q = 0; q < inner; ++q) {
        const Segment& seg = segs_.segments[fs_.inner_segments[q]];
        for (std::size_t i = 0; i < seg.edges.size(); ++i) best.prices[seg.edges[i]] = (*chosen[q])[i];
    }
    return best;
}

Rational approximate_revenue(const CactusGraph& g, const SegmentSet& segs, const FragmentSkeleton& fs,
                             const PricingStrategy& s, const Prices& prices, const std::vector<Buyer>& buyers) {
    return FragmentSolver(g, segs, fs, buyers).approximate_revenue(s, prices);
}

FragmentSolution solve_fragment_strategy(const CactusGraph& g, const SegmentSet& segs, const FragmentSkeleton& fs,
                                         const PricingStrategy& s, const std::vector<Buyer>& buyers) {
    return FragmentSolver(g, segs, fs, buyers).solve(s);
}

namespace {

// {0}, every stride-th positive P value at or below b_max counting down from the largest,
// and the smallest P value above b_max (a blocking price).
std::vector<Rational> thinned_values(const PriceGrid& grid, int stride) {
    std::vector<Rational> below;
    std::optional<Rational> block;
    for (const auto& p : grid.inner) {
        if (p > grid.b_max && !block) block = p;
        if (p > 0 && p <= grid.b_max) below.push_back(p);
    }
    std::vector<Rational> out{Rational(0)};
    for (int i = static_cast<int>(below.size()) - 1; i >= 0; i -= stride) out.push_back(below[i]);
    if (block) out.push_back(*block);
    std::sort(out.begin(), out.end());
    return out;
}

// Every P' interval up to b_max, then one unbounded interval: no buyer can afford more than
// b_max, so longer extensions are interchangeable. Intervals are never thinned; each keeps a
// factor of two between its ends.
std::vector<Interval> merged_intervals(const PriceGrid& grid) {
    std::vector<Interval> out{Interval{}};
    Rational low = 0;
    for (const auto& p : grid.outer) {
        if (p <= 0 || p > grid.b_max) continue;
        out.push_back(Interval{Interval::Range, low, p});
        low = p;
    }
    out.push_back(Interval{Interval::Unbounded, low, Rational(0)});
    return out;
}

int max_stride(const PriceGrid& grid) {
    int below = 0;
    for (const auto& p : grid.inner) below += p > 0 && p <= grid.b_max;
    return std::max(below, 1);
}

using Key = std::pair<Rational, int>;  // (arc length on the parent cycle, interval digit or -1 for Any)

struct Entry {
    Rational value;
    std::size_t index = 0;
};

struct CycleChoice {
    Rational value, total, children_sum;
};

// Distinct sums picking one value per list.
std::set<Rational> sumset(const std::vector<const std::vector<Rational>*>& lists) {
    std::set<Rational> current{Rational(0)};
    for (const auto* list : lists) {
        std::set<Rational> next;
        for (const auto& a : current)
            for (const auto& b : *list) next.insert(a + b);
        current = std::move(next);
    }
    return current;
}

std::set<Rational> sumset_of_sets(const std::set<Rational>& a, const std::set<Rational>& b) {
    std::set<Rational> out;
    for (const auto& x : a)
        for (const auto& y : b) out.insert(x + y);
    return out;
}

// Combines per-fragment strategy scores across split cycles. The fragments and split cycles
// form a forest; each fragment hangs below its parent cycle and each cycle below one owner.
class Assembly {
public:
    Assembly(const std::vector<FragmentSkeleton>& fss, const std::vector<std::vector<std::vector<int>>>& arcs)
        : fss_(fss), arcs_(arcs) {
        const int count = static_cast<int>(fss.size());
        std::map<int, std::vector<std::pair<int, int>>> owners;
        for (int f = 0; f < count; ++f)
            for (int x = 0; x < static_cast<int>(fss[f].outer_extensions.size()); ++x)
                owners[fss[f].outer_extensions[x].cycle].push_back({f, x});
        std::map<int, int> cycle_id;
        for (auto& [c, list] : owners) {
            cycle_id[c] = static_cast<int>(cycles_.size());
            cycles_.push_back({});
        }
        parent_.assign(count, {-1, -1});
        child_cycles_.assign(count, {});
        std::vector<char> seen_fragment(count, 0), seen_cycle(cycles_.size(), 0);
        for (int root = 0; root < count; ++root) {
            if (seen_fragment[root]) continue;
            roots_.push_back(root);
            seen_fragment[root] = 1;
            std::deque<int> queue{root};
            while (!queue.empty()) {
                const int f = queue.front();
                queue.pop_front();
                order_.push_back(f);
                for (int x = 0; x < static_cast<int>(fss[f].outer_extensions.size()); ++x) {
                    const int c = fss[f].outer_extensions[x].cycle;
                    const int cid = cycle_id.at(c);
                    if (cid == parent_[f].first) continue;
                    if (seen_cycle[cid]) throw std::logic_error("fragments and split cycles do not form a forest");
                    seen_cycle[cid] = 1;
                    child_cycles_[f].push_back({cid, x});
                    cycles_[cid].parent = {f, x};
                    for (auto [h, hx] : owners.at(c)) {
                        if (h == f) continue;
                        if (seen_fragment[h]) throw std::logic_error("fragments and split cycles do not form a forest");
                        seen_fragment[h] = 1;
                        parent_[h] = {cid, hx};
                        cycles_[cid].children.push_back({h, hx});
                        queue.push_back(h);
                    }
                }
            }
        }
    }

    // Rough count of knapsack steps for the given spaces.
    double estimate(const std::vector<StrategySpace>& spaces) const {
        double steps = 0;
        for (const auto& cycle : cycles_) {
            auto [p, px] = cycle.parent;
            std::set<Rational> reach{Rational(0)};
            double per_total = 0;
            for (auto [h, hx] : cycle.children) {
                const auto arcs = arc_values(spaces, h, hx);
                per_total += static_cast<double>(reach.size()) * static_cast<double>(arcs.size());
                reach = sumset_of_sets(reach, arcs);
            }
            const double totals = static_cast<double>(sumset_of_sets(arc_values(spaces, p, px), reach).size());
            steps += totals * per_total;
        }
        return steps;
    }

    std::vector<std::size_t> run(const std::vector<StrategySpace>& spaces,
                                 const std::vector<std::vector<Rational>>& scores) {
        spaces_ = &spaces;
        scores_ = &scores;
        const int count = static_cast<int>(fss_.size());
        tables_.assign(count, {});
        root_best_.assign(count, {});
        cycle_tables_.assign(cycles_.size(), {});
        for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
            for (auto [cid, x] : child_cycles_[*it]) solve_cycle(cid);
            build_table(*it);
        }
        std::vector<std::size_t> chosen(count, 0);
        std::deque<int> queue(roots_.begin(), roots_.end());
        for (int r : roots_) chosen[r] = root_best_[r].index;
        while (!queue.empty()) {
            const int f = queue.front();
            queue.pop_front();
            const auto digits = spaces[f].digits(chosen[f]);
            for (auto [cid, x] : child_cycles_[f]) {
                const CycleChoice& choice = cycle_tables_[cid].at(Key{arc(f, x, digits), interval_key(f, x, digits)});
                const auto keys = reconstruct(cid, choice.total, choice.children_sum);
                for (std::size_t i = 0; i < cycles_[cid].children.size(); ++i) {
                    const int h = cycles_[cid].children[i].first;
                    chosen[h] = tables_[h].at(keys[i]).index;
                    queue.push_back(h);
                }
            }
        }
        return chosen;
    }

private:
    struct Cycle {
        std::pair<int, int> parent{-1, -1};         // (fragment, extension index)
        std::vector<std::pair<int, int>> children;  // the other owners
    };

    std::set<Rational> arc_values(const std::vector<StrategySpace>& spaces, int f, int x) const {
        std::vector<const std::vector<Rational>*> lists;
        for (int q : arcs_[f][x]) lists.push_back(&spaces[f].inner_values[q]);
        return sumset(lists);
    }

    Rational arc(int f, int x, const std::vector<std::size_t>& digits) const {
        Rational total = 0;
        for (int q : arcs_[f][x]) total += (*spaces_)[f].inner_values[q][digits[q]];
        return total;
    }

    int interval_key(int f, int x, const std::vector<std::size_t>& digits) const {
        const std::size_t d = digits[(*spaces_)[f].inner_values.size() + x];
        return (*spaces_)[f].outer_intervals[x][d].kind == Interval::Any ? -1 : static_cast<int>(d);
    }

    // Key of the interval of (f, x) holding `length`; -1 when the list is the wildcard.
    int key_holding(int f, int x, const Rational& length) const {
        const auto& list = (*spaces_)[f].outer_intervals[x];
        for (int k = 0; k < static_cast<int>(list.size()); ++k) {
            if (list[k].kind == Interval::Any) return -1;
            if (list[k].contains(length)) return k;
        }
        return -2;
    }

    void build_table(int f) {
        const auto& space = (*spaces_)[f];
        const auto& scores = (*scores_)[f];
        const std::size_t size = space.size();
        const bool root = parent_[f].first < 0;
        bool have = false;
        for (std::size_t idx = 0; idx < size; ++idx) {
            const auto digits = space.digits(idx);
            Rational value = scores.empty() ? Rational(0) : scores[idx];
            bool ok = true;
            for (auto [cid, x] : child_cycles_[f]) {
                auto found = cycle_tables_[cid].find(Key{arc(f, x, digits), interval_key(f, x, digits)});
                if (found == cycle_tables_[cid].end()) {
                    ok = false;
                    break;
                }
                value += found->second.value;
            }
            if (!ok) continue;
            if (root) {
                if (!have || value > root_best_[f].value) root_best_[f] = {value, idx};
                have = true;
            } else {
                const int px = parent_[f].second;
                Key key{arc(f, px, digits), interval_key(f, px, digits)};
                auto it = tables_[f].find(key);
                if (it == tables_[f].end())
                    tables_[f].emplace(key, Entry{value, idx});
                else if (value > it->second.value)
                    it->second = {value, idx};
            }
        }
        if (root && !have) throw std::logic_error("no valid strategy combination");
    }

    // Best children value per children-sum when the cycle has length `total`; with `back`,
    // also the chosen key per layer.
    std::map<Rational, Rational> knapsack(int cid, const Rational& total,
                                          std::vector<std::map<Rational, std::pair<Rational, Key>>>* back) const {
        std::map<Rational, Rational> current{{Rational(0), Rational(0)}};
        for (auto [h, hx] : cycles_[cid].children) {
            std::map<Rational, Rational> next;
            std::map<Rational, std::pair<Rational, Key>> step;
            for (const auto& a : child_arcs_.at(h)) {
                const int k = key_holding(h, hx, total - a);
                auto entry = tables_[h].find(Key{a, k});
                if (entry == tables_[h].end()) continue;
                for (const auto& [sum, value] : current) {
                    const Rational reach = sum + a;
                    const Rational v = value + entry->second.value;
                    auto found = next.find(reach);
                    if (found != next.end() && !(v > found->second)) continue;
                    next[reach] = v;
                    if (back) step[reach] = {sum, Key{a, k}};
                }
            }
            current = std::move(next);
            if (back) back->push_back(std::move(step));
        }
        return current;
    }

    void solve_cycle(int cid) {
        const auto& cycle = cycles_[cid];
        auto [p, px] = cycle.parent;
        std::set<Rational> reach{Rational(0)};
        for (auto [h, hx] : cycle.children) {
            std::set<Rational> arcs_here;
            for (const auto& [key, entry] : tables_[h]) arcs_here.insert(key.first);
            child_arcs_[h] = arcs_here;
            reach = sumset_of_sets(reach, arcs_here);
        }
        const std::set<Rational> parent_arcs = arc_values(*spaces_, p, px);
        const auto& parent_intervals = (*spaces_)[p].outer_intervals[px];
        const std::set<Rational> totals = sumset_of_sets(parent_arcs, reach);
        auto& table = cycle_tables_[cid];
        for (const auto& total : totals) {
            const auto best = knapsack(cid, total, nullptr);
            for (const auto& a : parent_arcs) {
                const Rational s = total - a;
                auto found = best.find(s);
                if (found == best.end()) continue;
                for (int k = 0; k < static_cast<int>(parent_intervals.size()); ++k) {
                    const bool any = parent_intervals[k].kind == Interval::Any;
                    if (!parent_intervals[k].contains(s)) continue;
                    Key key{a, any ? -1 : k};
                    auto it = table.find(key);
                    if (it == table.end() || found->second > it->second.value)
                        table[key] = CycleChoice{found->second, total, s};
                }
            }
        }
    }

    std::vector<Key> reconstruct(int cid, const Rational& total, const Rational& children_sum) const {
        std::vector<std::map<Rational, std::pair<Rational, Key>>> back;
        knapsack(cid, total, &back);
        std::vector<Key> keys(back.size());
        Rational at = children_sum;
        for (std::size_t i = back.size(); i-- > 0;) {
            const auto& [prev, key] = back[i].at(at);
            keys[i] = key;
            at = prev;
        }
        return keys;
    }

    const std::vector<FragmentSkeleton>& fss_;
    const std::vector<std::vector<std::vector<int>>>& arcs_;
    const std::vector<StrategySpace>* spaces_ = nullptr;
    const std::vector<std::vector<Rational>>* scores_ = nullptr;
    std::vector<Cycle> cycles_;
    std::vector<std::pair<int, int>> parent_;  // (cycle id, own extension index)
    std::vector<std::vector<std::pair<int, int>>> child_cycles_;
    std::vector<int> roots_, order_;
    std::vector<std::map<Key, Entry>> tables_;
    std::vector<Entry> root_best_;
    std::vector<std::map<Key, CycleChoice>> cycle_tables_;
    std::map<int, std::set<Rational>> child_arcs_;
};

}  // namespace

std::vector<std::vector<int>> arc_positions(const BCTree& t, const SegmentSet& segs, const FragmentSkeleton& fs) {
    std::vector<std::vector<int>> out;
    for (const auto& ext : fs.outer_extensions) {
        std::vector<int> on_cycle;
        for (int q = 0; q < static_cast<int>(fs.inner_segments.size()); ++q)
            if (t.component_of_edge[segs.segments[fs.inner_segments[q]].edges.front()] == ext.cycle)
                on_cycle.push_back(q);
        out.push_back(std::move(on_cycle));
    }
    return out;
}

std::vector<std::size_t> assemble_strategies(const std::vector<FragmentSkeleton>& fss,
                                             const std::vector<StrategySpace>& spaces,
                                             const std::vector<std::vector<Rational>>& scores,
                                             const std::vector<std::vector<std::vector<int>>>& arcs) {
    return Assembly(fss, arcs).run(spaces, scores);
}

SkeletonResult solve_skeleton(const CactusGraph& g, const BCTree& t, const Decomposition& d,
                              const SkeletonLevel& sk, const std::vector<Buyer>& buyers,
                              const BuyerLevels& levels, SkeletonOptions options) {
    const int j = sk.level;
    SkeletonResult res;
    res.level = j;
    res.prices.assign(g.edge_count(), Rational(0));
    const auto& at_level = levels.buyers_at_level[j - 1];
    for (int i : at_level)
        if (buyers[i].budget > res.b_max) res.b_max = buyers[i].budget;
    if (at_level.empty() || res.b_max <= 0 || sk.skeleton_edges.empty()) return res;

    const SegmentSet segs = compress_segments(g, d, sk);
    const PriceGrid grid = make_grids(g.edge_count(), res.b_max, static_cast<int>(at_level.size()));
    const Level& lv = d.level(j);
    const int count = static_cast<int>(lv.fragments.size());

    std::vector<FragmentSkeleton> fss;
    std::vector<std::vector<int>> vertex_sets;
    for (int f = 0; f < count; ++f) {
        fss.push_back(fragment_skeleton(g, t, d, sk, segs, f));
        vertex_sets.push_back(vertices_of(g, lv.fragments[f]));
    }
    std::vector<std::vector<Buyer>> placed(count);
    for (int i : at_level) {
        const int rs = sk.repr[buyers[i].s], rt = sk.repr[buyers[i].t];
        if (rs == rt) continue;
        int home = -1;
        for (int f = 0; f < count && home < 0; ++f)
            if (std::binary_search(vertex_sets[f].begin(), vertex_sets[f].end(), rs) &&
                std::binary_search(vertex_sets[f].begin(), vertex_sets[f].end(), rt))
                home = f;
        if (home < 0) {
            ++res.unplaced_buyers;
            continue;
        }
        placed[home].push_back(Buyer{rs, rt, buyers[i].budget});
    }

    std::vector<std::unique_ptr<FragmentSolver>> solvers;
    for (int f = 0; f < count; ++f)
        solvers.push_back(std::make_unique<FragmentSolver>(g, segs, fss[f], placed[f]));

    std::vector<std::vector<std::vector<int>>> arcs(count);
    for (int f = 0; f < count; ++f) arcs[f] = arc_positions(t, segs, fss[f]);
    Assembly assembly(fss, arcs);

    // Grid thinning: the smallest stride whose strategy evaluations and assembly steps fit the
    // budgets. Past the coarsest grid, the most expensive fragments drop to all-zero prices.
    const Interval any{Interval::Any, 0, 0};
    auto spaces_for = [&](int stride, const std::vector<char>& collapsed) {
        std::vector<StrategySpace> spaces(count);
        for (int f = 0; f < count; ++f) {
            const auto& fs = fss[f];
            if (collapsed[f]) {
                spaces[f].inner_values.assign(fs.inner_segments.size(), {Rational(0)});
                spaces[f].outer_intervals.assign(fs.outer_extensions.size(), {any});
            } else {
                spaces[f].inner_values.assign(fs.inner_segments.size(), thinned_values(grid, stride));
                spaces[f].outer_intervals.assign(fs.outer_extensions.size(),
                                                 placed[f].empty() ? std::vector<Interval>{any}
                                                                   : merged_intervals(grid));
            }
        }
        return spaces;
    };
    auto work = [&](const std::vector<StrategySpace>& spaces, const std::vector<char>& collapsed, int f) {
        double size = 1;
        for (const auto& v : spaces[f].inner_values) size *= static_cast<double>(v.size());
        for (const auto& v : spaces[f].outer_intervals) size *= static_cast<double>(v.size());
        const bool evaluated = !placed[f].empty() && !collapsed[f];
        return evaluated ? size * static_cast<double>(solvers[f]->combinations()) : size;
    };
    auto fits = [&](const std::vector<StrategySpace>& spaces, const std::vector<char>& collapsed) {
        double total = 0;
        for (int f = 0; f < count; ++f) total += work(spaces, collapsed, f);
        return total <= static_cast<double>(options.max_evaluations) &&
               assembly.estimate(spaces) <= static_cast<double>(options.max_assembly_steps);
    };
    std::vector<char> collapsed(count, 0);
    const int top_stride = max_stride(grid);
    int stride = 1;
    std::vector<StrategySpace> spaces = spaces_for(stride, collapsed);
    while (!fits(spaces, collapsed) && stride < top_stride) spaces = spaces_for(++stride, collapsed);
    res.stride = stride;
    while (!fits(spaces, collapsed)) {
        int heaviest = -1;
        double most = -1;
        for (int f = 0; f < count; ++f) {
            if (collapsed[f]) continue;
            double w = work(spaces, collapsed, f);
            if (w > most) {
                most = w;
                heaviest = f;
            }
        }
        if (heaviest < 0) break;
        collapsed[heaviest] = 1;
        res.reduced = true;
        spaces = spaces_for(stride, collapsed);
    }

    std::vector<std::vector<Rational>> scores(count);
    for (int f = 0; f < count; ++f) {
        if (placed[f].empty() || collapsed[f]) continue;
        const std::size_t size = spaces[f].size();
        scores[f].resize(size);
        for (std::size_t idx = 0; idx < size; ++idx) {
            scores[f][idx] = solvers[f]->solve(spaces[f].at(idx)).score;
            res.evaluations += solvers[f]->combinations();
        }
    }

    const auto chosen = assembly.run(spaces, scores);

    for (int f = 0; f < count; ++f) {
        PricingStrategy s = spaces[f].at(chosen[f]);
        Prices local = scores[f].empty() ? solvers[f]->plain_prices(s) : solvers[f]->solve(s).prices;
        for (int q : fss[f].inner_segments)
            for (int e : segs.segments[q].edges) res.prices[e] = local[e];
        FragmentDiagnostics diag;
        diag.fragment = f;
        diag.inner = static_cast<int>(fss[f].inner_segments.size());
        diag.outer = static_cast<int>(fss[f].outer_extensions.size());
        diag.buyers = static_cast<int>(placed[f].size());
        diag.involved_segments = solvers[f]->involved_segments();
        diag.strategies = spaces[f].size();
        diag.chosen_score = scores[f].empty() ? Rational(0) : scores[f][chosen[f]];
        res.score += diag.chosen_score;
        res.fragments.push_back(diag);
        res.chosen.push_back(std::move(s));
    }

    for (int f = 0; f < count; ++f) {
        const auto& fs = fss[f];
        for (std::size_t q = 0; q < fs.inner_segments.size(); ++q)
            if (segment_length(g, res.prices, segs.segments[fs.inner_segments[q]]) != res.chosen[f].inner_cost[q])
                res.valid = false;
        for (std::size_t x = 0; x < fs.outer_extensions.size(); ++x) {
            Rational length = 0;
            for (int si : fs.outer_extensions[x].segments) length += segment_length(g, res.prices, segs.segments[si]);
            if (!res.chosen[f].outer[x].contains(length)) res.valid = false;
        }
    }
    res.revenue = revenue_restricted(g, res.prices, buyers, at_level);
    if (res.score * 512 >= res.b_max) res.overpricing_ok = res.revenue * 4 >= res.score;
    return res;
}

}  // namespace toll
