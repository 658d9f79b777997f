#include "tollbooth/generator.hpp"

#include <random>
#include <stdexcept>

namespace toll {

CactusInstance generate_instance(const GeneratorParams& params) {
    if (params.edges < 0 || params.buyers < 0 || params.max_budget < 1 || params.cycle_prob < 0 ||
        params.cycle_prob > 1)
        throw std::invalid_argument("invalid generator parameters");
    std::mt19937_64 rng(params.seed);
    auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    std::bernoulli_distribution cycle_coin(params.cycle_prob);

    int n = 1;
    std::vector<Edge> edges;
    while (static_cast<int>(edges.size()) < params.edges) {
        int remaining = params.edges - static_cast<int>(edges.size());
        int at = static_cast<int>(uniform(0, n - 1));
        bool cycle = cycle_coin(rng);
        if (cycle && remaining >= 3) {
            int len = static_cast<int>(uniform(3, std::min(6, remaining)));
            int prev = at;
            for (int i = 1; i < len; ++i) {
                edges.push_back({prev, n});
                prev = n++;
            }
            edges.push_back({prev, at});
        } else {
            edges.push_back({at, n++});
        }
    }
    CactusInstance inst;
    inst.graph = make_cactus(n, edges);
    if (n >= 2) {
        for (int i = 0; i < params.buyers; ++i) {
            int s = static_cast<int>(uniform(0, n - 1));
            int t = static_cast<int>(uniform(0, n - 2));
            if (t >= s) ++t;
            inst.buyers.push_back({s, t, Rational(uniform(1, params.max_budget))});
        }
    }
    return inst;
}

}  // namespace toll
