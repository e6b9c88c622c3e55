#pragma once
// m-transmitter generalization: every transmitter and the receiver carries
// an on/off switch, giving 2^(m+1) joint states.  Rate bounds become a
// polymatroid over transmitter subsets, and the maximum sum rate is found by
// exact per-user water-filling cycled to a KKT point (the objective is
// concave, so the point is a global optimum).

#include <cstdint>
#include <vector>

#include "cogmac/prob_model.hpp"

namespace cogmac {

// States are bitmasks over m+1 bits: bit i (0 <= i < m) is transmitter i's
// switch, bit m is the receiver's switch.  prob[] has 2^(m+1) entries.
struct MUserModel {
  int m = 2;
  std::vector<double> prob;

  void validate() const;
  int n_states() const { return 1 << (m + 1); }
  bool transmitter_on(uint32_t state, int user) const {
    return (state >> user) & 1u;
  }
  bool receiver_on(uint32_t state) const { return (state >> m) & 1u; }
  // P(transmitter `user` on), marginal over everything else.
  double pr_transmitter_on(int user) const;
};

// All m+1 switches independent Bernoulli(1 - mu) "off" indicators: each is
// on with probability 1 - mu.
MUserModel make_iid_model(int m, double mu);

// Embed the two-transmitter joint law as the m = 2 case.
MUserModel from_two_user(const JointStateDist& joint);

// Power placed by each transmitter in each joint state (only states with the
// receiver on matter for rate, but the power constraint charges every state
// in which the transmitter's own switch is on).
// allocation[state][user], state indexing matching MUserModel.
using StateUserAllocation = std::vector<std::vector<double>>;

// One bound per transmitter subset: sum of rates over the subset is at most
// bound_bits.  subset is a bitmask over users 0..m-1; the empty subset has
// bound 0.
struct SubsetRateBound {
  uint32_t subset;
  double bound_bits;
};

// Genie-style bounds: evaluates, for each subset M, the concave bound
//   sum over states s with receiver on of p(s) * lg(1 + sum of power placed
//   by users in M that are on in s),
// at the given allocation.  The allocation must put zero power where a
// transmitter is off and must meet each user's gated average-power budget
// E[P_i(s) ; transmitter i on] <= budgets[i].
std::vector<SubsetRateBound> muser_outer1_sum_bounds(
    const MUserModel& model, const StateUserAllocation& allocation,
    const std::vector<double>& budgets);

// Same bounds with each transmitter forced to a single constant power
// whenever on: P_i = budgets[i] / P(transmitter i on).
std::vector<SubsetRateBound> muser_outer2_sum_bounds(
    const MUserModel& model, const std::vector<double>& budgets);

// Rate backoff for subset M: P(only M heard cleanly among M) analogue --
// here simply min(H(switches of M | receiver), |M| / dwell_n) scaled by the
// probability that the receiver is on and exactly the users of M are on.
double muser_inner_gap(const MUserModel& model, uint32_t subset,
                       int64_t dwell_n);

struct MUserSumRateResult {
  double sum_rate_bits;
  StateUserAllocation allocation;
  double kkt_residual;  // max complementary-slackness / budget violation
  int sweeps;           // block-coordinate passes performed
};

// Maximize the full-set bound over feasible allocations by cycling exact
// one-user water-filling until the largest per-block improvement is tiny.
MUserSumRateResult muser_max_sum_rate(const MUserModel& model,
                                      const std::vector<double>& budgets);

struct PolymatroidReport {
  bool ok;
  double worst_violation;
  uint32_t witness_a, witness_b;  // subsets violating submodularity (if any)
};

// Checks normalization (f(empty) == 0), monotonicity over subset inclusions,
// and submodularity f(A)+f(B) >= f(A|B)+f(A&B) for the given bound list,
// which must cover all 2^m subsets.
PolymatroidReport verify_polymatroid(const std::vector<SubsetRateBound>& bounds,
                                     double tol);

}  // namespace cogmac
