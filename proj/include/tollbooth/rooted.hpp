#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tollbooth/cactus.hpp"

namespace toll {

struct RootedInstance {
    CactusGraph graph;
    int root = 0;
    std::vector<std::pair<int, Rational>> demands;  // (destination, budget)
    std::map<int, Rational> depth_constraints;      // vertex -> required distance from root
};

struct DepthCandidates {
    std::vector<std::vector<Rational>> per_vertex;  // sorted, deduplicated
};

struct RootedSolution {
    Prices prices;
    Rational revenue;
    std::vector<Rational> depth;    // distance from root under `prices`
    std::vector<int> unused_edges;  // the blocked edge of every cycle
};

class InfeasibleConstraints : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

DepthCandidates candidate_depths(const RootedInstance& inst);

RootedSolution solve_rooted(const RootedInstance& inst);

Rational eval_rooted(const RootedInstance& inst, const Prices& prices);

}  // namespace toll
