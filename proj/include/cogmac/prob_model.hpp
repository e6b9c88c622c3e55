#pragma once
// Joint law of the three channel switches (S_T1, S_T2, S_R).
//
// The switches share a single occupancy process: mu is each switch's off
// probability, rho the pairwise correlation, and the joint law is symmetric
// under permutations of the three switches, so a cell's probability depends
// only on how many switches are on.
//
// Two table modes are supported.  `verbatim` uses the published per-count
// formulas unmodified; for intermediate rho these do not sum to one, and the
// shortfall is reported as normalization_defect (cells are NOT rescaled).
// `consistent` keeps the two-on and three-on cells and rebuilds the rest so
// the table sums to one while preserving the Bernoulli(1-mu) marginals and
// the pairwise correlation rho.  The modes agree at rho = 0 and rho = 1.

#include <cstdint>

namespace cogmac {

enum class TableMode { verbatim, consistent };

struct ModelParams {
  double mu = 0.1;          // P(switch off), in [0,1]
  double rho = 0.0;         // pairwise switch correlation, in [0,1]
  double p1_avg = 1.0;      // transmitter 1 average power budget, >= 0
  double p2_avg = 1.0;      // transmitter 2 average power budget, >= 0
  std::int64_t dwell_n = 1; // coherent dwell length per switch state, >= 1
  double i_sq = 10.0;       // squared interference attenuation, >= 1
  TableMode table_mode = TableMode::consistent;

  void validate() const;  // throws std::domain_error naming the bad field
};

// Joint distribution over the 8 switch states.
// Cell index: s_t1 | (s_t2 << 1) | (s_r << 2).
struct JointStateDist {
  double cells[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  TableMode mode = TableMode::consistent;
  double normalization_defect = 0.0;  // |1 - sum(cells)| before any clamping

  double cell(int t1, int t2, int r) const { return cells[t1 | t2 << 1 | r << 2]; }
  double sum() const;
  double pr_sr_on() const;              // P(S_R = 1)
  double pr_t_on(int transmitter) const;  // P(S_Ti = 1), i in {1,2}
};

JointStateDist build_joint(double mu, double rho, TableMode mode);

// Probabilities of the events that drive the rate bounds:
//   pa = P(S_R=1, S_T1=1, S_T2=0)   "1 heard alone"
//   pb = P(S_R=1, S_T1=0, S_T2=1)   "2 heard alone"
//   pc = P(S_R=1, S_T1=1, S_T2=1)   "both heard"
//   pd = P(S_T1=1, S_T2=0)          "1 sends alone"
//   pe = P(S_T1=0, S_T2=1)          "2 sends alone"
//   pf = P(S_T1=1, S_T2=1)          "both send"
struct EventProbs {
  double pa, pb, pc, pd, pe, pf;
};

EventProbs event_probs(const JointStateDist& joint);

// P(receiver listens and at least one transmitter sends) = pa + pb + pc,
// in closed form as a function of (mu, rho).
double p_mu_rho(double mu, double rho);
double dp_dmu(double mu, double rho);
double dp_drho(double mu, double rho);

struct ConditionalEntropies {
  double h_t1_given_r;    // H(S_T1 | S_R), bits
  double h_t2_given_r;    // H(S_T2 | S_R), bits
  double h_t1t2_given_r;  // H(S_T1, S_T2 | S_R), bits
  bool renormalized;      // true when a defective verbatim table was rescaled
};

ConditionalEntropies conditional_entropies(const JointStateDist& joint);

enum class StatePair { t1_t2, t1_r, t2_r };

struct Correlation {
  double value;
  bool degenerate;  // a marginal had zero variance; value reported as 0
};

Correlation pairwise_correlation(const JointStateDist& joint, StatePair which);

}  // namespace cogmac
