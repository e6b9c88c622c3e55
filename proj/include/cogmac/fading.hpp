#pragma once
// Sum rate when missed receiver states degrade to attenuated-interference
// fades instead of erasures, plus the threshold water-filling policy for
// fully known two-state gains.
//
// The channel splits transmitted power between "good" slots (receiver
// listening, at least one sender heard cleanly) and "bad" slots (someone
// sends but arrives attenuated by 1/I^2).  The optimal split is closed-form;
// at I^2 = 1 the bad slots are as good as the good ones, and as I^2 grows
// the bad-slot power is squeezed to zero and the switch-model sum rate is
// recovered.

#include <cstdint>
#include <vector>

#include "cogmac/prob_model.hpp"

namespace cogmac {

struct FadingParams {
  double p_nonfading;  // P(a clean slot) = pa + pb + pc
  double p_fading;     // P(an attenuated slot) = pd + pe + pf - p_nonfading
  double i_sq;         // interference power attenuation, >= 1
  double p1_avg, p2_avg;

  void validate() const;
};

FadingParams fading_params(const JointStateDist& joint, double i_sq,
                           double p1_avg, double p2_avg);
FadingParams fading_params(const ModelParams& params);

struct FadingSumRate {
  double rate_bits;
  double p_clean_sum;  // power spent in clean slots
  double p_faded_sum;  // power spent in attenuated slots
};

FadingSumRate fading_sum_rate(const FadingParams& fp);

// fading_sum_rate - switch-model max_sum_rate; mathematically >= 0, clamped
// at 0 and rejected (logic_error) if it computes below -1e-12.
double fading_vs_switch_gap(const ModelParams& params);

// Discrete joint gain distribution for the two transmitters.
struct GainState {
  double h1, h2, prob;
};

struct GainDistribution {
  std::vector<GainState> states;
  void validate() const;  // probs >= 0 summing to 1, gains finite >= 0
};

struct WaterfillResult {
  std::vector<double> power1, power2;  // per state, aligned with input
  double lambda1, lambda2;             // equal by symmetry
  bool lambda_defined;                 // false when no power can be placed
};

// Threshold water-filling: in each gain state only the transmitter(s) with
// the larger gain may send, with power (1/(2*lambda) - 1/h)+; lambda is set
// by bisection so each average power constraint is met.  Requires h1 and h2
// to be identically distributed and p1_avg == p2_avg (the symmetric case the
// closed form covers); asymmetric inputs are rejected.
WaterfillResult waterfill_threshold(const GainDistribution& gains,
                                    double p1_avg, double p2_avg);

}  // namespace cogmac
