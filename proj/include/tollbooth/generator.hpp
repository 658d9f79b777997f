#pragma once

#include <cstdint>

#include "tollbooth/cactus.hpp"

namespace toll {

struct GeneratorParams {
    int edges = 10;
    int buyers = 5;
    long max_budget = 8;
    double cycle_prob = 0.5;
    std::uint64_t seed = 1;
};

// Grows a cactus from vertex 0 by pendant edges and cycles of length 3..6 (cut at the
// remaining edge budget); buyers get distinct uniform endpoints and budgets in [1, max_budget].
CactusInstance generate_instance(const GeneratorParams& params);

}  // namespace toll
