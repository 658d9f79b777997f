#include "tollbooth/rooted.hpp"

#include <algorithm>
#include <optional>

#include "tollbooth/evaluator.hpp"

namespace toll {

DepthCandidates candidate_depths(const RootedInstance& inst) {
    std::vector<Rational> shared{Rational(0)};
    for (const auto& [dest, budget] : inst.demands) shared.push_back(budget);
    for (const auto& [v, depth] : inst.depth_constraints) shared.push_back(depth);
    std::sort(shared.begin(), shared.end());
    shared.erase(std::unique(shared.begin(), shared.end()), shared.end());
    DepthCandidates out;
    out.per_vertex.assign(inst.graph.vertex_count, shared);
    for (const auto& [v, depth] : inst.depth_constraints) out.per_vertex[v] = {depth};
    return out;
}

namespace {

using Value = std::optional<Rational>;  // nullopt = infeasible

Value add(const Value& a, const Value& b) {
    if (!a || !b) return std::nullopt;
    return *a + *b;
}

class RootedDp {
public:
    explicit RootedDp(const RootedInstance& inst)
        : inst_(inst), g_(inst.graph), tree_(build_bc_tree(inst.graph, inst.root)),
          cand_(candidate_depths(inst)) {
        budgets_at_.assign(g_.vertex_count, {});
        for (const auto& [dest, budget] : inst.demands) budgets_at_[dest].push_back(budget);
        Rational top = 0;
        for (const auto& list : cand_.per_vertex)
            for (const auto& d : list) top = std::max(top, d);
        blocked_price_ = top + 1;
        dp_.resize(tree_.components.size());
        choice_.resize(tree_.components.size());
        for (int c = static_cast<int>(tree_.components.size()) - 1; c >= 1; --c) solve_component(c);
    }

    RootedSolution extract() {
        auto root_it = inst_.depth_constraints.find(inst_.root);
        if (root_it != inst_.depth_constraints.end() && root_it->second != 0)
            throw InfeasibleConstraints("root depth must be 0");
        RootedSolution sol;
        sol.prices.assign(g_.edge_count(), Rational(0));
        sol.depth.assign(g_.vertex_count, Rational(0));
        Rational total = 0;
        for (int c : tree_.hanging[inst_.root]) {
            auto idx = index_of(inst_.root, Rational(0));
            Value v = idx ? dp_[c][*idx] : std::nullopt;
            if (!v) throw InfeasibleConstraints("depth constraints cannot be met");
            total += *v;
        }
        for (int c : tree_.hanging[inst_.root]) assign(c, Rational(0), sol);
        sol.revenue = total;
        return sol;
    }

private:
    std::optional<std::size_t> index_of(int v, const Rational& d) const {
        const auto& list = cand_.per_vertex[v];
        auto it = std::lower_bound(list.begin(), list.end(), d);
        if (it == list.end() || *it != d) return std::nullopt;
        return static_cast<std::size_t>(it - list.begin());
    }

    long count_at_least(int v, const Rational& x) const {
        long n = 0;
        for (const auto& b : budgets_at_[v])
            if (b >= x) ++n;
        return n;
    }

    // Revenue of v's own demands plus everything hanging below v, with v at depth D_v[i].
    Value base(int v, std::size_t i) const {
        const Rational& d = cand_.per_vertex[v][i];
        Value total = Rational(count_at_least(v, d)) * d;
        for (int c : tree_.hanging[v]) total = add(total, dp_[c][i]);
        return total;
    }

    // Best of f over D_x restricted to depths >= d; ties go to the smaller depth.
    std::pair<Value, std::size_t> best_from(int x, const std::vector<Value>& f, const Rational& d) const {
        const auto& list = cand_.per_vertex[x];
        Value best;
        std::size_t arg = 0;
        for (std::size_t i = std::lower_bound(list.begin(), list.end(), d) - list.begin(); i < list.size(); ++i)
            if (f[i] && (!best || *f[i] > *best)) {
                best = f[i];
                arg = i;
            }
        return {best, arg};
    }

    // Chain x_1..x_q hanging off the cycle top: F[t][i] = value with x_t at depth D[i].
    std::vector<std::vector<Value>> chain_table(const std::vector<int>& chain) const {
        std::vector<std::vector<Value>> f(chain.size());
        for (int t = static_cast<int>(chain.size()) - 1; t >= 0; --t) {
            int x = chain[t];
            const auto& list = cand_.per_vertex[x];
            f[t].resize(list.size());
            for (std::size_t i = 0; i < list.size(); ++i) {
                Value v = base(x, i);
                if (t + 1 < static_cast<int>(chain.size()))
                    v = add(v, best_from(chain[t + 1], f[t + 1], list[i]).first);
                f[t][i] = v;
            }
        }
        return f;
    }

    Value chain_value(const std::vector<int>& chain, const std::vector<std::vector<Value>>& f,
                      const Rational& d) const {
        if (chain.empty()) return Rational(0);
        return best_from(chain[0], f[0], d).first;
    }

    struct Split {
        std::vector<int> first_vertices, first_edges, second_vertices, second_edges;
    };

    static Split split_cycle(const Component& comp, std::size_t unused) {
        Split s;
        const std::size_t k = comp.vertices.size() - 1;
        for (std::size_t i = 1; i <= unused; ++i) {
            s.first_vertices.push_back(comp.vertices[i]);
            s.first_edges.push_back(comp.edges[i - 1]);
        }
        for (std::size_t i = k; i > unused; --i) {
            s.second_vertices.push_back(comp.vertices[i]);
            s.second_edges.push_back(comp.edges[i]);
        }
        return s;
    }

    void solve_component(int c) {
        const Component& comp = tree_.components[c];
        const auto& top_list = cand_.per_vertex[comp.top];
        dp_[c].assign(top_list.size(), std::nullopt);
        choice_[c].assign(top_list.size(), 0);
        if (comp.kind == ComponentKind::Bridge) {
            int v = comp.vertices[1];
            std::vector<Value> f(cand_.per_vertex[v].size());
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = base(v, i);
            for (std::size_t i = 0; i < top_list.size(); ++i) {
                auto [val, arg] = best_from(v, f, top_list[i]);
                dp_[c][i] = val;
                choice_[c][i] = arg;
            }
            return;
        }
        for (std::size_t unused = 0; unused < comp.edges.size(); ++unused) {
            Split s = split_cycle(comp, unused);
            auto f1 = chain_table(s.first_vertices);
            auto f2 = chain_table(s.second_vertices);
            for (std::size_t i = 0; i < top_list.size(); ++i) {
                Value v = add(chain_value(s.first_vertices, f1, top_list[i]),
                              chain_value(s.second_vertices, f2, top_list[i]));
                // ties keep the later edge in cycle order
                if (v && (!dp_[c][i] || *v >= *dp_[c][i])) {
                    dp_[c][i] = v;
                    choice_[c][i] = unused;
                }
            }
        }
    }

    void assign_chain(const std::vector<int>& chain, const std::vector<int>& edges, Rational d,
                      RootedSolution& sol) {
        auto f = chain_table(chain);
        for (std::size_t t = 0; t < chain.size(); ++t) {
            int x = chain[t];
            std::size_t arg = best_from(x, f[t], d).second;
            const Rational& next = cand_.per_vertex[x][arg];
            sol.prices[edges[t]] = next - d;
            assign_vertex(x, arg, sol);
            d = next;
        }
    }

    void assign_vertex(int v, std::size_t i, RootedSolution& sol) {
        sol.depth[v] = cand_.per_vertex[v][i];
        for (int c : tree_.hanging[v]) assign(c, sol.depth[v], sol);
    }

    void assign(int c, const Rational& d, RootedSolution& sol) {
        const Component& comp = tree_.components[c];
        std::size_t i = *index_of(comp.top, d);
        if (comp.kind == ComponentKind::Bridge) {
            int v = comp.vertices[1];
            std::size_t arg = choice_[c][i];
            sol.prices[comp.edges[0]] = cand_.per_vertex[v][arg] - d;
            assign_vertex(v, arg, sol);
            return;
        }
        std::size_t unused = choice_[c][i];
        sol.prices[comp.edges[unused]] = blocked_price_;
        sol.unused_edges.push_back(comp.edges[unused]);
        Split s = split_cycle(comp, unused);
        assign_chain(s.first_vertices, s.first_edges, d, sol);
        assign_chain(s.second_vertices, s.second_edges, d, sol);
    }

    const RootedInstance& inst_;
    const CactusGraph& g_;
    BCTree tree_;
    DepthCandidates cand_;
    std::vector<std::vector<Rational>> budgets_at_;
    Rational blocked_price_;
    std::vector<std::vector<Value>> dp_;
    std::vector<std::vector<std::size_t>> choice_;
};

}  // namespace

RootedSolution solve_rooted(const RootedInstance& inst) {
    auto root_it = inst.depth_constraints.find(inst.root);
    if (root_it != inst.depth_constraints.end() && root_it->second != 0)
        throw InfeasibleConstraints("root depth must be 0");
    RootedDp dp(inst);
    RootedSolution sol = dp.extract();
    std::sort(sol.unused_edges.begin(), sol.unused_edges.end());
    return sol;
}

Rational eval_rooted(const RootedInstance& inst, const Prices& prices) {
    auto dist = distances_from(inst.graph, prices, inst.root);
    Rational total = 0;
    for (const auto& [dest, budget] : inst.demands)
        if (dist[dest] <= budget) total += dist[dest];
    return total;
}

}  // namespace toll
