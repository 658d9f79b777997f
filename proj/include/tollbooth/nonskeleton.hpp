#pragma once

#include <vector>

#include "tollbooth/decomposition.hpp"
#include "tollbooth/rooted.hpp"
#include "tollbooth/skeleton.hpp"

namespace toll {

struct ComponentInstance {
    int component = 0;            // index into SkeletonLevel::components
    RootedInstance instance;      // on the component relabelled locally, rooted at its anchor
    std::vector<int> global_edge;  // local edge -> global edge
    std::vector<int> global_vertex;
    std::vector<int> demand_buyer;  // buyer index per demand
};

// One instance per non-skeleton component, in component order (possibly without demands).
std::vector<ComponentInstance> build_rooted_instances(const CactusGraph& g, const SkeletonLevel& sk,
                                                      const std::vector<Buyer>& buyers,
                                                      const std::vector<int>& level_buyers);

struct FragmentColoring {
    int fragment = 0;                 // index into level j
    std::vector<int> children;        // level j+1 fragments that carry demands
    unsigned mask = 0;                // bit i set: children[i] black
    std::vector<Rational> revenue_by_mask;
};

struct NonSkeletonPlan {
    int level = 0;
    std::vector<ComponentInstance> instances;
    std::vector<Prices> component_prices;  // solved local prices per instance
    std::vector<FragmentColoring> colorings;
    Prices prices;
    Rational revenue;  // over the level's buyers
};

// Requires j < L.
NonSkeletonPlan solve_nonskeleton(const CactusGraph& g, const Decomposition& d, const SkeletonLevel& sk,
                                  const std::vector<Buyer>& buyers, const BuyerLevels& levels);

}  // namespace toll
