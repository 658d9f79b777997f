#pragma once

#include <optional>
#include <vector>

#include "tollbooth/cactus.hpp"

namespace toll {

struct Purchase {
    bool bought = false;
    std::vector<int> path;  // edge-ids from s to t
    Rational paid;
};

struct Allocation {
    std::vector<Purchase> purchases;
    Rational total_revenue;
};

// Shortest-path distances from `source` under nonnegative edge prices.
std::vector<Rational> distances_from(const CactusGraph& g, const Prices& prices, int source);

Rational distance(const CactusGraph& g, const Prices& prices, int u, int v);

Allocation allocate(const CactusGraph& g, const Prices& prices, const std::vector<Buyer>& buyers);

// Total revenue only; skips path reconstruction.
Rational revenue(const CactusGraph& g, const Prices& prices, const std::vector<Buyer>& buyers);

Rational revenue_restricted(const CactusGraph& g, const Prices& prices,
                            const std::vector<Buyer>& buyers, const std::vector<int>& subset);

// Lexicographically smallest (by edge-id sequence) cheapest s-t path.
std::vector<int> cheapest_path(const CactusGraph& g, const Prices& prices, int s, int t);

}  // namespace toll
