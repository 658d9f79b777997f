#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tollbooth/cactus.hpp"
#include "tollbooth/rooted.hpp"

namespace toll {

class TooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    std::vector<std::vector<Rational>> per_edge;  // sorted, contains 0
};

GridSpec uniform_grid(int edge_count, std::vector<Rational> values);

// {0} ∪ budgets ∪ budgets/2 ∪ nonnegative pairwise budget differences, on every edge.
GridSpec default_grid(const CactusInstance& inst);

// Only {0} ∪ budgets.
GridSpec budget_grid(const CactusInstance& inst);

struct OracleLimits {
    std::size_t max_work = 400'000'000;  // inner-loop iterations before TooLarge
};

// Exact maximum revenue over price vectors drawn from the grid, edges in `zero_edges`
// pinned to 0. Dynamic program over the block tree; same value as the odometer below.
Rational oracle_grid(const CactusInstance& inst, const GridSpec& grid,
                     const std::vector<int>& zero_edges = {}, OracleLimits limits = {});

// Plain odometer over all grid vectors; `max_space` bounds the number of vectors.
Rational oracle_grid_bruteforce(const CactusInstance& inst, const GridSpec& grid,
                                const std::vector<int>& zero_edges = {},
                                std::size_t max_space = 2'000'000);

// Exact rooted optimum by enumerating root distances over the candidate depth sets and
// keeping the assignments some price vector realizes.
Rational oracle_rooted(const RootedInstance& inst, std::size_t max_space = 5'000'000);

}  // namespace toll
