#include "cogmac/fading.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "cogmac/bounds.hpp"

namespace cogmac {

namespace {

constexpr double kInvLn2 = 1.4426950408889634;

double lg1p(double x) { return std::log1p(x) * kInvLn2; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

}  // namespace

void FadingParams::validate() const {
  require(std::isfinite(p_nonfading) && p_nonfading >= 0.0 &&
              p_nonfading <= 1.0,
          "p_nonfading must lie in [0, 1]");
  require(std::isfinite(p_fading) && p_fading >= 0.0 && p_fading <= 1.0,
          "p_fading must lie in [0, 1]");
  require(p_nonfading + p_fading <= 1.0 + 1e-12,
          "p_nonfading + p_fading must not exceed 1");
  require(std::isfinite(i_sq) && i_sq >= 1.0, "i_sq must be >= 1");
  require(std::isfinite(p1_avg) && p1_avg >= 0.0, "p1_avg must be >= 0");
  require(std::isfinite(p2_avg) && p2_avg >= 0.0, "p2_avg must be >= 0");
}

FadingParams fading_params(const JointStateDist& joint, double i_sq,
                           double p1_avg, double p2_avg) {
  const EventProbs e = event_probs(joint);
  FadingParams fp;
  fp.p_nonfading = e.pa + e.pb + e.pc;
  // pd + pe + pf counts every sending opportunity (weighted by how many
  // constraints it enters); what exceeds the clean mass arrives attenuated.
  fp.p_fading = std::max(0.0, (e.pd + e.pe + e.pf) - fp.p_nonfading);
  fp.i_sq = i_sq;
  fp.p1_avg = p1_avg;
  fp.p2_avg = p2_avg;
  fp.validate();
  return fp;
}

FadingParams fading_params(const ModelParams& params) {
  params.validate();
  const JointStateDist joint =
      build_joint(params.mu, params.rho, params.table_mode);
  return fading_params(joint, params.i_sq, params.p1_avg, params.p2_avg);
}

FadingSumRate fading_sum_rate(const FadingParams& fp) {
  fp.validate();
  const double p_nf = fp.p_nonfading;
  const double p_f = fp.p_fading;
  const double total = fp.p1_avg + fp.p2_avg;
  FadingSumRate out{0.0, 0.0, 0.0};
  if (total <= 0.0) return out;
  if (p_nf <= 0.0 && p_f <= 0.0) return out;  // never heard at all
  if (p_f <= 0.0) {
    out.p_clean_sum = total;
    out.rate_bits = p_nf * lg1p(total / p_nf);
    return out;
  }
  if (p_nf <= 0.0) {
    out.p_faded_sum = total;
    out.rate_bits = p_f * lg1p(total / (fp.i_sq * p_f));
    return out;
  }
  // Split total power S between clean slots (S - P'') and attenuated slots
  // (P''): the stationary point of
  //   p_nf*lg(1 + (S-P'')/p_nf) + p_f*lg(1 + P''/(I^2 p_f))
  // is P'' = (S*p_f - (I^2-1)*p_nf*p_f) / (p_nf + p_f), clamped to [0, S].
  const double p_faded = std::clamp(
      (total * p_f - (fp.i_sq - 1.0) * p_nf * p_f) / (p_nf + p_f), 0.0, total);
  out.p_faded_sum = p_faded;
  out.p_clean_sum = total - p_faded;
  out.rate_bits = p_nf * lg1p(out.p_clean_sum / p_nf) +
                  p_f * lg1p(p_faded / (fp.i_sq * p_f));
  return out;
}

double fading_vs_switch_gap(const ModelParams& params) {
  const FadingSumRate fr = fading_sum_rate(fading_params(params));
  const EventProbs e = event_probs(
      build_joint(params.mu, params.rho, params.table_mode));
  double switch_rate = 0.0;
  if (e.pa + e.pb + e.pc > 0.0) {
    switch_rate = max_sum_rate(e, params.p1_avg, params.p2_avg);
  }
  const double diff = fr.rate_bits - switch_rate;
  if (diff < -1e-12) {
    throw std::logic_error(
        "fading sum rate fell below the switch-model sum rate");
  }
  return std::max(0.0, diff);
}

void GainDistribution::validate() const {
  require(!states.empty(), "gain distribution must have at least one state");
  double total = 0.0;
  for (const GainState& s : states) {
    require(std::isfinite(s.h1) && s.h1 >= 0.0, "gain h1 must be >= 0");
    require(std::isfinite(s.h2) && s.h2 >= 0.0, "gain h2 must be >= 0");
    require(std::isfinite(s.prob) && s.prob >= 0.0,
            "gain state probability must be >= 0");
    total += s.prob;
  }
  require(std::abs(total - 1.0) <= 1e-9,
          "gain state probabilities must sum to 1");
}

namespace {

// Marginal gain laws must coincide for the symmetric threshold policy.
void check_identical_marginals(const GainDistribution& gains) {
  std::map<double, double> m1, m2;
  for (const GainState& s : gains.states) {
    m1[s.h1] += s.prob;
    m2[s.h2] += s.prob;
  }
  bool same = m1.size() == m2.size();
  if (same) {
    auto it1 = m1.begin();
    auto it2 = m2.begin();
    for (; it1 != m1.end(); ++it1, ++it2) {
      if (std::abs(it1->first - it2->first) > 1e-12 ||
          std::abs(it1->second - it2->second) > 1e-9) {
        same = false;
        break;
      }
    }
  }
  require(same,
          "threshold water-filling requires identically distributed gains");
}

}  // namespace

WaterfillResult waterfill_threshold(const GainDistribution& gains,
                                    double p1_avg, double p2_avg) {
  gains.validate();
  require(std::isfinite(p1_avg) && p1_avg >= 0.0, "p1_avg must be >= 0");
  require(std::isfinite(p2_avg) && p2_avg >= 0.0, "p2_avg must be >= 0");
  require(std::abs(p1_avg - p2_avg) <= 1e-12,
          "threshold water-filling requires equal power budgets");
  check_identical_marginals(gains);

  const size_t n = gains.states.size();
  WaterfillResult out;
  out.power1.assign(n, 0.0);
  out.power2.assign(n, 0.0);
  out.lambda1 = 0.0;
  out.lambda2 = 0.0;
  out.lambda_defined = false;

  // Average power transmitter 1 spends at threshold level lambda: it sends
  // only in states where h1 >= h2 (ties allow both), with the water-filling
  // power (1/(2 lambda) - 1/h1)+.
  auto spent = [&](double lambda) {
    double acc = 0.0;
    for (const GainState& s : gains.states) {
      if (s.prob <= 0.0 || s.h1 <= 0.0) continue;
      if (s.h1 + 1e-15 >= s.h2) {
        acc += s.prob *
               std::max(0.0, 1.0 / (2.0 * lambda) - 1.0 / s.h1);
      }
    }
    return acc;
  };

  if (p1_avg <= 0.0) return out;  // zero budget: all powers stay zero

  double lo = 1e-12, hi = 1e6;
  if (spent(lo) < p1_avg) {
    // Even an (effectively) zero threshold cannot place the budget: every
    // usable gain is zero.  Leave powers at zero and lambda undefined.
    return out;
  }
  // spent is non-increasing in lambda; bisect for spent(lambda) == p1_avg.
  for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (spent(mid) >= p1_avg) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (std::abs(spent(mid) - p1_avg) <= 1e-12) break;
  }
  double lambda = 0.5 * (lo + hi);
  require(std::abs(spent(lambda) - p1_avg) <= 1e-10,
          "water-filling bisection failed to meet the power budget");

  out.lambda1 = lambda;
  out.lambda2 = lambda;  // symmetric problem, symmetric multiplier
  out.lambda_defined = true;
  for (size_t i = 0; i < n; ++i) {
    const GainState& s = gains.states[i];
    if (s.prob <= 0.0) continue;
    if (s.h1 > 0.0 && s.h1 + 1e-15 >= s.h2) {
      out.power1[i] = std::max(0.0, 1.0 / (2.0 * lambda) - 1.0 / s.h1);
    }
    if (s.h2 > 0.0 && s.h2 + 1e-15 >= s.h1) {
      out.power2[i] = std::max(0.0, 1.0 / (2.0 * lambda) - 1.0 / s.h2);
    }
  }
  return out;
}

}  // namespace cogmac
