#pragma once
// Capacity bounds and sum-rate-optimal power allocation for the two-user
// switched channel.
//
// outer1: per-event power control, power charged only in states the receiver
//         hears; the region is the convex hull over feasible power splits.
// outer2: a single constant power per transmitter charged whenever that
//         transmitter's switch is on; all pentagon constraints are monotone
//         in the powers, so the union collapses to the max-power pentagon.
// inner:  outer2 shifted inward by the dwell-limited state-knowledge gaps.

#include <span>

#include "cogmac/prob_model.hpp"
#include "cogmac/region.hpp"

namespace cogmac {

// Per-event transmit powers.  p1a/p1c (p2b/p2c) split transmitter 1's (2's)
// budget across its solo-heard and jointly-heard events; p1df/p2ef are the
// constant powers used by the outer-2 bound.
struct PowerAllocation {
  double p1a = 0, p1c = 0, p2b = 0, p2c = 0;
  double p1df = 0, p2ef = 0;
  bool boundary_fallback = false;  // a solver corner case clamped a power to 0
};

// Rate losses from imperfect receiver state knowledge over a dwell of N
// symbols; subtracted from the outer-2 pentagon to get the inner bound.
struct GapSpec {
  double d_r1, d_r2, d_sum;
};

GapSpec genie_gaps(const JointStateDist& joint, std::int64_t dwell_n);

RateRegion outer1_region(const ModelParams& params, int sweep_resolution = 201);
RateRegion outer2_region(const ModelParams& params, int sweep_resolution = 201);
RateRegion inner_region(const ModelParams& params, int sweep_resolution = 201);

// Closed-form sum-rate-optimal allocation.  The interior solution equalizes
// 1 + power across the three heard events; when a jointly-heard component
// would go negative it is clamped to zero and the reduced problem re-solved,
// with boundary_fallback set.  Throws std::domain_error when pa+pb+pc = 0
// (the receiver never hears anyone).
PowerAllocation optimal_allocation(const EventProbs& e, double p1, double p2);
PowerAllocation optimal_allocation(const ModelParams& params);

// Sum rate achieved by a given allocation, in bits.
double allocation_sum_rate(const EventProbs& e, const PowerAllocation& a);

// Pooled closed-form maximum sum rate (pa+pb+pc)*log2(1+(P1+P2)/(pa+pb+pc));
// 0 when pa+pb+pc = 0.  Coincides with the achieved optimum whenever the
// interior allocation is feasible (always at equal power budgets).
double max_sum_rate(const EventProbs& e, double p1, double p2);
double max_sum_rate(const ModelParams& params);

struct OracleResult {
  double sum_rate_bits;
  PowerAllocation allocation;
};

// Brute-force maximizer over the feasible power splits: an exhaustive grid
// on the two solo-event powers (jointly-heard powers fixed by constraint
// saturation) followed by coordinate-ascent golden-section refinement.
// Shares no algebra with optimal_allocation; deterministic.
OracleResult oracle_max_sum_rate(const EventProbs& e, double p1, double p2,
                                 int grid_points = 33,
                                 int max_ascent_rounds = 100);
OracleResult oracle_max_sum_rate(const ModelParams& params,
                                 int grid_points = 33,
                                 int max_ascent_rounds = 100);

}  // namespace cogmac
