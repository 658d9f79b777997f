#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <stdexcept>
#include <vector>

#include "tollbooth/decomposition.hpp"
#include "tollbooth/skeleton.hpp"

namespace toll {

class AllBudgetsZero : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PriceGrid {
    std::vector<Rational> inner;  // P, ascending, starts with 0
    std::vector<Rational> outer;  // P', ascending, starts with 0
    Rational p_min;               // smallest positive element of P
    Rational b_max;
    int m = 0;
    int buyers = 0;
};

// Both grids use 1024 inside the logarithm; the end-to-end factor asserted elsewhere is 2048.
PriceGrid make_grids(int m, const Rational& b_max, int buyers);

// Caps every edge at b_max, then scales one cheapest l-r path of each segment so that every
// segment length lands on the largest element of P not above it.
Prices round_prices(const CactusGraph& g, const Prices& prices, const SegmentSet& segs, const PriceGrid& grid);

// Length of a cheapest l-r path inside the segment.
Rational segment_length(const CactusGraph& g, const Prices& prices, const Segment& s);

struct Interval {
    enum Kind { ExactZero, Range, Unbounded, Any } kind = ExactZero;
    Rational low, high;  // Range: (low, high]; Unbounded: (low, inf)

    bool contains(const Rational& x) const;
    // Length charged for the extension when approximating revenue; none when unaffordable.
    std::optional<Rational> charged() const;
};

struct PricingStrategy {
    std::vector<Rational> inner_cost;  // per inner segment
    std::vector<Interval> outer;       // per outer extension
};

// Cartesian product in mixed radix; the last coordinate varies fastest.
struct StrategySpace {
    std::vector<std::vector<Rational>> inner_values;
    std::vector<std::vector<Interval>> outer_intervals;

    std::size_t size() const;  // saturates at SIZE_MAX
    PricingStrategy at(std::size_t index) const;
    std::vector<std::size_t> digits(std::size_t index) const;
};

// (0,0) plus one interval per pair of consecutive elements of P'.
std::vector<Interval> outer_interval_list(const PriceGrid& grid);

// The full space: P on every inner segment, every P' interval on every outer extension.
StrategySpace enumerate_strategies(const FragmentSkeleton& fs, const PriceGrid& grid);

// A buyer involved in a segment, seen from that segment.
struct InvolvedBuyer {
    int buyer = 0;
    int vertex = 0;   // the buyer's representative strictly inside the segment
    Rational via_l;   // budget left for the segment when entering through l
    Rational via_r;
    int exit = 0;     // 0: all paths leave through l, 1: through r, -1: both representatives inside
};

// Options 1..4; the result is aligned with s.edges and implements length c.
std::vector<Rational> price_segment(const CactusGraph& g, const Segment& s, const Rational& c,
                                    const std::vector<InvolvedBuyer>& view, int option);

struct FragmentSolution {
    Prices prices;             // full length; only the fragment's inner-segment edges are set
    Rational score;            // approximate revenue
    std::vector<int> options;  // chosen option (1..4) per inner segment
};

// Per-fragment work for one level: involvement, the strategy metric, the four options per
// involved segment and the search over option combinations.
class FragmentSolver {
public:
    // `buyers` hold representatives as endpoints and are the ones assigned to this fragment.
    FragmentSolver(const CactusGraph& g, const SegmentSet& segs, const FragmentSkeleton& fs,
                   std::vector<Buyer> buyers, std::size_t max_combinations = 4096);

    // Revenue of the fragment's buyers with extensions charged at their interval's upper end.
    Rational approximate_revenue(const PricingStrategy& s, const Prices& prices) const;

    std::vector<InvolvedBuyer> view(const PricingStrategy& s, int position) const;

    // Best combination of the four options over the involved segments (smallest index on ties).
    FragmentSolution solve(const PricingStrategy& s);

    // Option 1 on every segment.
    Prices plain_prices(const PricingStrategy& s) const;

    int involved_segments() const { return static_cast<int>(involved_.size()); }
    std::size_t combinations() const;
    bool reduced() const { return combinations() < full_combinations_; }
    int buyer_count() const { return static_cast<int>(buyers_.size()); }

private:
    using Metric = std::map<int, std::pair<std::vector<Rational>, std::vector<char>>>;  // by local source
    Metric metric(const PricingStrategy& s) const;
    std::vector<InvolvedBuyer> view_with(const Metric& dist, const PricingStrategy& s, int position) const;
    Rational evaluate(const std::vector<Rational>& weight, const std::vector<char>& usable) const;
    void extension_weights(const PricingStrategy& s, std::vector<Rational>& weight, std::vector<char>& usable) const;
    const std::vector<Rational>& cached_option(int position, const Rational& c,
                                               const std::vector<InvolvedBuyer>& view, int option);

    const CactusGraph& g_;
    const SegmentSet& segs_;
    const FragmentSkeleton& fs_;
    std::vector<Buyer> buyers_;
    std::map<int, int> local_;
    int nodes_ = 0;
    std::vector<int> interior_;   // per global vertex: inner position or -1
    std::vector<std::vector<int>> exit_label_;  // cyclic positions: component labels without the segment
    std::vector<int> involved_;   // positions with involved buyers
    std::vector<std::vector<int>> involved_buyers_;  // per involved entry
    std::size_t max_combinations_;
    std::size_t full_combinations_ = 1;
    // real-edge graph: slots 0..E-1 for inner-segment edges, then one per outer extension
    std::vector<std::vector<std::pair<int, int>>> adjacency_;
    std::vector<std::vector<int>> slots_of_position_;  // aligned with the segment's edges
    int extension_slot_ = 0;                           // first pseudo-edge slot
    std::vector<std::pair<int, int>> metric_edges_;    // inner positions, then extensions (local ends)
    std::vector<int> sources_;                  // distinct local source vertices of buyers
    std::map<std::string, std::vector<Rational>> option_cache_;
};

Rational approximate_revenue(const CactusGraph& g, const SegmentSet& segs, const FragmentSkeleton& fs,
                             const PricingStrategy& s, const Prices& prices, const std::vector<Buyer>& buyers);

FragmentSolution solve_fragment_strategy(const CactusGraph& g, const SegmentSet& segs, const FragmentSkeleton& fs,
                                         const PricingStrategy& s, const std::vector<Buyer>& buyers);

// Per outer extension of `fs`: positions of its inner segments on that extension's cycle.
std::vector<std::vector<int>> arc_positions(const BCTree& t, const SegmentSet& segs, const FragmentSkeleton& fs);

// Highest total score over valid combinations, one strategy index per fragment. A fragment
// with empty `scores` scores 0 everywhere. Throws std::logic_error unless fragments and
// split cycles form a forest.
std::vector<std::size_t> assemble_strategies(const std::vector<FragmentSkeleton>& fss,
                                             const std::vector<StrategySpace>& spaces,
                                             const std::vector<std::vector<Rational>>& scores,
                                             const std::vector<std::vector<std::vector<int>>>& arcs);

struct SkeletonOptions {
    std::size_t max_evaluations = 60'000;       // per level: strategies x option combinations
    std::size_t max_assembly_steps = 1'000'000;  // per level: knapsack steps over split cycles
};

struct FragmentDiagnostics {
    int fragment = 0;
    int inner = 0;
    int outer = 0;
    int buyers = 0;
    int involved_segments = 0;
    std::size_t strategies = 0;
    Rational chosen_score;
};

struct SkeletonResult {
    int level = 0;
    Prices prices;
    Rational revenue;        // over the level's buyers
    Rational score;          // total approximate revenue of the chosen combination
    Rational b_max;
    bool valid = true;       // recomputed extension lengths sit in their intervals
    bool overpricing_ok = true;
    int stride = 1;          // grid thinning used to fit the evaluation budget
    bool reduced = false;    // even the coarsest grid exceeded the budget
    std::size_t evaluations = 0;
    int unplaced_buyers = 0; // buyers whose representatives share no fragment (expected 0)
    std::vector<PricingStrategy> chosen;  // per level-j fragment
    std::vector<FragmentDiagnostics> fragments;
};

// Prices on SK_j only (non-skeleton edges 0).
SkeletonResult solve_skeleton(const CactusGraph& g, const BCTree& t, const Decomposition& d,
                              const SkeletonLevel& sk, const std::vector<Buyer>& buyers,
                              const BuyerLevels& levels, SkeletonOptions options = {});

}  // namespace toll
