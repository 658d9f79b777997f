#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tollbooth/cactus.hpp"
#include "tollbooth/skeleton_solver.hpp"

namespace toll {

enum class Subproblem { Skeleton, NonSkeleton };

std::string subproblem_name(Subproblem s);  // "skeleton" / "non-skeleton"

struct LevelDiagnostics {
    int level = 0;
    int buyers = 0;                            // |B_j|
    std::optional<Rational> skeleton_revenue;  // over all buyers
    std::optional<Rational> nonskeleton_revenue;
    // Skeleton run on the level's own buyers.
    Rational skeleton_level_revenue;
    Rational skeleton_score;
    Rational b_max;
    int stride = 1;
    bool reduced = false;
    bool valid = true;
    bool overpricing_ok = true;
};

struct EngineOptions {
    SkeletonOptions skeleton;
    unsigned threads = 1;  // levels solved concurrently
};

struct Solution {
    Prices prices;
    Rational revenue;  // over all buyers
    int winning_level = 1;
    Subproblem subproblem = Subproblem::Skeleton;
    int levels = 1;    // L
    int k = 2;
    std::vector<LevelDiagnostics> diagnostics;  // levels with buyers only
};

// Best candidate over both subproblems of every level with buyers, each evaluated on all
// buyers; the first candidate wins ties (levels ascending, skeleton before non-skeleton).
Solution solve(const CactusInstance& inst, EngineOptions options = {});

// TOLL_THREADS when set to a positive integer, else 1.
unsigned threads_from_env();

}  // namespace toll
