#pragma once
// Monte Carlo estimation of the rates a causal (state-oblivious) Gaussian
// codebook achieves through the switched channel, together with a sandwich
// check placing the estimated sum rate below the analytic outer bounds.
//
// All estimators are deterministic functions of (inputs, n, seed): samples
// are drawn in fixed-size chunks, each chunk from its own counter-derived
// substream, and reduced in chunk order, so reruns are byte-identical and
// the first n samples of a longer run coincide with a shorter one.

#include <cstdint>

#include "cogmac/prob_model.hpp"

namespace cogmac {

// Codebook variances, allowed to differ with the transmitter's own switch.
// The rate estimator requires the state-independent case (on == off); the
// state-information penalty below quantifies what a dependent choice leaks.
struct GaussianStrategy {
  double var1_on = 0.0, var1_off = 0.0;
  double var2_on = 0.0, var2_off = 0.0;

  void validate() const;
  bool state_independent() const;
  // State-independent codebooks spending the whole gated budget:
  // variance = budget / P(own switch on), zero for a never-on transmitter.
  static GaussianStrategy saturating(const JointStateDist& joint,
                                     double p1_avg, double p2_avg);
};

struct MIEstimate {
  double value_bits = 0.0;
  double std_err_bits = 0.0;
  int64_t n_samples = 0;  // 0 when the value is exact (no sampling needed)
  uint64_t seed = 0;
};

struct CausalRateEstimates {
  MIEstimate r1;   // rate of transmitter 1 with transmitter 2's input known
  MIEstimate r2;   // rate of transmitter 2 with transmitter 1's input known
  MIEstimate sum;  // joint sum rate
  bool states_independent = true;
  double dependence_gap = 0.0;  // max |P(t1,t2) - P(t1)P(t2)|
};

CausalRateEstimates estimate_causal_rates(const JointStateDist& joint,
                                          const GaussianStrategy& strategy,
                                          int64_t n, uint64_t seed);

// Information the channel input leaks about the transmitter's own switch
// when the codebook variance depends on it: H(switch) - H(switch | input).
// Exact in the degenerate cases (state-independent variances, a switch that
// is always on or always off, or one variance exactly zero); Monte Carlo
// over the binary posterior entropy otherwise.
MIEstimate estimate_state_penalty(const JointStateDist& joint,
                                  const GaussianStrategy& strategy,
                                  int transmitter, int64_t n, uint64_t seed);

struct SandwichReport {
  CausalRateEstimates estimates;
  double outer1_support = 0.0;  // max r1 + r2 over the adaptive outer bound
  double outer2_support = 0.0;  // max r1 + r2 over the constant-power bound
  double margin1 = 0.0;         // outer1_support + 3 se - estimated sum
  double margin2 = 0.0;
  bool pass = false;            // both margins nonnegative
};

SandwichReport sandwich_check(const ModelParams& params,
                              const GaussianStrategy& strategy, int64_t n,
                              uint64_t seed, int resolution = 201);

}  // namespace cogmac
