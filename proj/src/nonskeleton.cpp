#include "tollbooth/nonskeleton.hpp"

#include <stdexcept>

#include "tollbooth/evaluator.hpp"

namespace toll {

std::vector<ComponentInstance> build_rooted_instances(const CactusGraph& g, const SkeletonLevel& sk,
                                                      const std::vector<Buyer>& buyers,
                                                      const std::vector<int>& level_buyers) {
    std::vector<ComponentInstance> out;
    std::vector<std::unordered_map<int, int>> local(sk.components.size());
    for (int c = 0; c < static_cast<int>(sk.components.size()); ++c) {
        const auto& comp = sk.components[c];
        SubCactus sub = make_subcactus(g, comp.edges);
        ComponentInstance ci;
        ci.component = c;
        ci.instance.graph = sub.graph;
        ci.instance.root = sub.local_vertex.at(comp.anchor);
        ci.global_edge = sub.global_edge;
        ci.global_vertex = sub.global_vertex;
        local[c] = sub.local_vertex;
        out.push_back(std::move(ci));
    }
    // The component holding a non-skeleton vertex: the one containing any of its edges.
    std::vector<int> component_of_vertex(g.vertex_count, -1);
    for (int c = 0; c < static_cast<int>(sk.components.size()); ++c)
        for (int e : sk.components[c].edges)
            for (int v : {g.edges[e].first, g.edges[e].second})
                if (v != sk.components[c].anchor) component_of_vertex[v] = c;
    for (int i : level_buyers) {
        for (int end : {buyers[i].s, buyers[i].t}) {
            int c = component_of_vertex[end];
            if (c < 0) continue;  // skeleton vertex: empty section
            out[c].instance.demands.emplace_back(local[c].at(end), buyers[i].budget);
            out[c].demand_buyer.push_back(i);
        }
    }
    return out;
}

NonSkeletonPlan solve_nonskeleton(const CactusGraph& g, const Decomposition& d, const SkeletonLevel& sk,
                                  const std::vector<Buyer>& buyers, const BuyerLevels& levels) {
    const int j = sk.level;
    if (j >= d.L()) throw std::invalid_argument("non-skeleton subproblem needs a level below the last");
    NonSkeletonPlan plan;
    plan.level = j;
    const auto& level_buyers = levels.buyers_at_level[j - 1];
    plan.instances = build_rooted_instances(g, sk, buyers, level_buyers);

    // Local prices of each component's rooted optimum.
    const std::size_t count = plan.instances.size();
    plan.component_prices.assign(count, {});
    std::vector<char> active(count, 0);
    for (std::size_t c = 0; c < count; ++c) {
        if (plan.instances[c].instance.demands.empty()) continue;
        plan.component_prices[c] = solve_rooted(plan.instances[c].instance).prices;
        active[c] = 1;
    }
    const auto& solved = plan.component_prices;

    plan.prices.assign(g.edge_count(), Rational(0));
    const Level& here = d.level(j);
    const Level& next = d.level(j + 1);
    for (int h = 0; h < static_cast<int>(here.fragments.size()); ++h) {
        FragmentColoring fc;
        fc.fragment = h;
        for (int f = 0; f < static_cast<int>(next.fragments.size()); ++f) {
            if (next.parent_fragment[f] != h) continue;
            bool carries = false;
            for (std::size_t c = 0; c < plan.instances.size(); ++c)
                carries |= active[c] && sk.components[plan.instances[c].component].fragment == f;
            if (carries) fc.children.push_back(f);
        }
        std::vector<int> subset;
        for (int i : level_buyers)
            if (levels.fragment_of_buyer[i] == h) subset.push_back(i);
        if (fc.children.empty() || subset.empty()) {
            plan.colorings.push_back(std::move(fc));
            continue;
        }
        auto priced = [&](unsigned mask) {
            Prices p(g.edge_count(), Rational(0));
            for (std::size_t c = 0; c < plan.instances.size(); ++c) {
                if (!active[c]) continue;
                int f = sk.components[plan.instances[c].component].fragment;
                for (std::size_t b = 0; b < fc.children.size(); ++b)
                    if (fc.children[b] == f && (mask >> b & 1u))
                        for (std::size_t e = 0; e < solved[c].size(); ++e)
                            p[plan.instances[c].global_edge[e]] = solved[c][e];
            }
            return p;
        };
        Rational best = -1;
        const unsigned masks = 1u << fc.children.size();
        for (unsigned mask = 0; mask < masks; ++mask) {
            Rational rev = revenue_restricted(g, priced(mask), buyers, subset);
            fc.revenue_by_mask.push_back(rev);
            if (rev > best) {  // ties keep the smaller mask
                best = rev;
                fc.mask = mask;
            }
        }
        Prices chosen = priced(fc.mask);
        for (int e = 0; e < g.edge_count(); ++e)
            if (chosen[e] != 0) plan.prices[e] = chosen[e];
        plan.colorings.push_back(std::move(fc));
    }
    plan.revenue = revenue_restricted(g, plan.prices, buyers, level_buyers);
    return plan;
}

}  // namespace toll
