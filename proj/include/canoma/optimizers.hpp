#pragma once

#include "canoma/channel_model.hpp"
#include "canoma/comparative_advantage.hpp"
#include "canoma/core_model.hpp"
#include "canoma/types.hpp"

namespace canoma {

struct GridSpec {
    int points_2d = 201;     // per axis of the full (f11, f12) grid
    int points_edge = 1001;  // per selected edge of the reduced search
    bool refine = false;     // optional local refinement pass around the argmin
};

void validate_grid(const GridSpec& spec);

struct OptimizationResult {
    AllocationMatrix f_opt;       // the allocation exactly as evaluated
    double value = 0.0;           // re-evaluating the target at f_opt reproduces this bit-for-bit
    DecodingOrder order;          // SIC order achieving the value
    bool on_edge = false;         // argmin lies on a boundary edge of the unit square
    std::size_t evaluations = 0;  // analytic count, 3 orders per visited point
};

struct MatchOutcome {
    bool is_global;
    double rel_gap;  // (method - oracle) / oracle, clamped below at 0
};

// Exhaustive reference: evaluates the best-over-SIC-orders target at every
// point of the uniform (f11, f12) grid. Value ties prefer smaller (f11, f12).
OptimizationResult grid_oracle_two_user(const ScenarioInstance& instance, const Weights& w,
                                        const GridSpec& spec, TargetKind kind,
                                        double log_base = 2.0);

// The reduced method: same evaluation and tie rules, but only along the two
// advantage-selected edges, with points_edge samples per edge.
OptimizationResult edge_search_two_user(const ScenarioInstance& instance, const Weights& w,
                                        const GridSpec& spec, TargetKind kind,
                                        double log_base = 2.0);

struct IndependentSearchResult {
    AllocationMatrix f_opt;
    double value = 0.0;
    std::size_t evaluations = 0;
};

// Brute force for the independent-reception model over both BS columns of
// the fraction simplex (entries are multiples of 1/(grid_points_per_axis-1)).
// Small N only; this is the oracle for the split-structure property.
IndependentSearchResult brute_force_independent(const ChannelGains& gains,
                                                const NormalizedPowers& powers, const Weights& w,
                                                int grid_points_per_axis, double log_base = 2.0);

// Declares a method result globally optimal when its value is within
// match_rel_tol of the oracle's, relatively. Edge grids refine the 2D grid's
// boundary, so a genuine edge optimum matches exactly and the default
// tolerance only absorbs the degenerate rounding cases.
MatchOutcome compare_results(const OptimizationResult& method, const OptimizationResult& oracle,
                             double match_rel_tol = 1e-9);

}  // namespace canoma
