#include "tollbooth/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "tollbooth/evaluator.hpp"
#include "tollbooth/nonskeleton.hpp"

namespace toll {

std::string subproblem_name(Subproblem s) { return s == Subproblem::Skeleton ? "skeleton" : "non-skeleton"; }

unsigned threads_from_env() {
    const char* text = std::getenv("TOLL_THREADS");
    if (!text) return 1;
    char* end = nullptr;
    long value = std::strtol(text, &end, 10);
    if (end == text || *end != '\0' || value < 1) return 1;
    return static_cast<unsigned>(value);
}

namespace {

struct LevelOutcome {
    LevelDiagnostics diag;
    Prices skeleton_prices, nonskeleton_prices;
};

}  // namespace

Solution solve(const CactusInstance& inst, EngineOptions options) {
    const CactusGraph& g = inst.graph;
    Solution sol;
    sol.prices.assign(g.edge_count(), Rational(0));
    sol.revenue = 0;
    if (g.edge_count() == 0) return sol;

    const BCTree t = build_bc_tree(g);
    const Decomposition d = build_decomposition(g, t);
    const BuyerLevels levels = assign_buyers(d, g, inst.buyers);
    sol.levels = d.L();
    sol.k = d.k;

    std::vector<int> active;
    for (int j = 1; j <= d.L(); ++j)
        if (!levels.buyers_at_level[j - 1].empty()) active.push_back(j);

    std::vector<LevelOutcome> outcomes(active.size());
    auto run_level = [&](std::size_t slot) {
        const int j = active[slot];
        LevelOutcome& out = outcomes[slot];
        out.diag.level = j;
        out.diag.buyers = static_cast<int>(levels.buyers_at_level[j - 1].size());
        const SkeletonLevel sk = build_skeleton(g, t, d, j);
        SkeletonResult sr = solve_skeleton(g, t, d, sk, inst.buyers, levels, options.skeleton);
        out.diag.stride = sr.stride;
        out.diag.reduced = sr.reduced;
        out.diag.valid = sr.valid;
        out.diag.overpricing_ok = sr.overpricing_ok;
        out.diag.skeleton_level_revenue = sr.revenue;
        out.diag.skeleton_score = sr.score;
        out.diag.b_max = sr.b_max;
        out.diag.skeleton_revenue = revenue(g, sr.prices, inst.buyers);
        out.skeleton_prices = std::move(sr.prices);
        if (j < d.L()) {
            NonSkeletonPlan plan = solve_nonskeleton(g, d, sk, inst.buyers, levels);
            out.diag.nonskeleton_revenue = revenue(g, plan.prices, inst.buyers);
            out.nonskeleton_prices = std::move(plan.prices);
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(active.size())));
    if (workers <= 1) {
        for (std::size_t s = 0; s < active.size(); ++s) run_level(s);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t s = next++; s < active.size(); s = next++) run_level(s);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    bool have = false;
    for (auto& out : outcomes) {
        auto consider = [&](const std::optional<Rational>& rev, Prices& prices, Subproblem kind) {
            if (!rev || (have && !(*rev > sol.revenue))) return;
            have = true;
            sol.revenue = *rev;
            sol.prices = prices;
            sol.winning_level = out.diag.level;
            sol.subproblem = kind;
        };
        consider(out.diag.skeleton_revenue, out.skeleton_prices, Subproblem::Skeleton);
        consider(out.diag.nonskeleton_revenue, out.nonskeleton_prices, Subproblem::NonSkeleton);
        sol.diagnostics.push_back(out.diag);
    }
    return sol;
}

}  // namespace toll
