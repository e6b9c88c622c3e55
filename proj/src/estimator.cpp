#include "cogmac/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogmac/bounds.hpp"
#include "cogmac/kernels.hpp"
#include "cogmac/region.hpp"
#include "cogmac/rng.hpp"

namespace cogmac {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int64_t kChunk = 8192;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

double binary_entropy_bits(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

double sq_dist(const std::array<double, 2>& y, double mre, double mim) {
  const double dre = y[0] - mre;
  const double dim = y[1] - mim;
  return dre * dre + dim * dim;
}

// Accumulates mean and standard error of a stream of per-sample values,
// summed chunk by chunk in a fixed order.
struct MeanAccumulator {
  double sum = 0.0, sum_sq = 0.0;
  int64_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n > 0 ? sum / double(n) : 0.0; }
  double std_err() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - double(n) * m * m) /
                                         double(n - 1));
    return std::sqrt(var / double(n));
  }
};

MIEstimate exact_estimate(double value, uint64_t seed) {
  MIEstimate e;
  e.value_bits = value;
  e.std_err_bits = 0.0;
  e.n_samples = 0;
  e.seed = seed;
  return e;
}

}  // namespace

void GaussianStrategy::validate() const {
  for (double v : {var1_on, var1_off, var2_on, var2_off}) {
    require(std::isfinite(v) && v >= 0.0,
            "codebook variances must be finite and >= 0");
  }
}

bool GaussianStrategy::state_independent() const {
  return var1_on == var1_off && var2_on == var2_off;
}

GaussianStrategy GaussianStrategy::saturating(const JointStateDist& joint,
                                              double p1_avg, double p2_avg) {
  require(std::isfinite(p1_avg) && p1_avg >= 0.0, "p1_avg must be >= 0");
  require(std::isfinite(p2_avg) && p2_avg >= 0.0, "p2_avg must be >= 0");
  GaussianStrategy s;
  const double on1 = joint.pr_t_on(1);
  const double on2 = joint.pr_t_on(2);
  s.var1_on = s.var1_off = on1 > 0.0 ? p1_avg / on1 : 0.0;
  s.var2_on = s.var2_off = on2 > 0.0 ? p2_avg / on2 : 0.0;
  return s;
}

CausalRateEstimates estimate_causal_rates(const JointStateDist& joint,
                                          const GaussianStrategy& strategy,
                                          int64_t n, uint64_t seed) {
  strategy.validate();
  require(strategy.state_independent(),
          "causal rate estimation requires state-independent codebook "
          "variances");

  CausalRateEstimates out;

  // How far the two transmitter switches are from independent (the mixture
  // weights below bake the joint law in either way; the flag just reports
  // whether a product-form approximation would have been exact).
  {
    const double total = std::max(joint.sum(), 1e-300);
    double pt1 = 0.0, pt2 = 0.0, pj[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (int t1 = 0; t1 < 2; ++t1) {
      for (int t2 = 0; t2 < 2; ++t2) {
        const double p =
            (joint.cell(t1, t2, 0) + joint.cell(t1, t2, 1)) / total;
        pj[t1][t2] = p;
        if (t1) pt1 += p;
        if (t2) pt2 += p;
      }
    }
    double gap = 0.0;
    for (int t1 = 0; t1 < 2; ++t1) {
      for (int t2 = 0; t2 < 2; ++t2) {
        const double m1 = t1 ? pt1 : 1.0 - pt1;
        const double m2 = t2 ? pt2 : 1.0 - pt2;
        gap = std::max(gap, std::abs(pj[t1][t2] - m1 * m2));
      }
    }
    out.dependence_gap = gap;
    out.states_independent = gap <= 1e-9;
  }

  const double pr = joint.pr_sr_on();
  if (pr <= 0.0) {
    // The receiver never listens: every rate is exactly zero.
    out.r1 = exact_estimate(0.0, seed);
    out.r2 = exact_estimate(0.0, seed);
    out.sum = exact_estimate(0.0, seed);
    return out;
  }
  require(n >= 2, "n_samples must be >= 2");

  const double v1 = strategy.var1_on;
  const double v2 = strategy.var2_on;

  // Component k = (t1, t2) packed as t1 | t2 << 1, weighted by the state law
  // conditioned on the receiver being on.  Zero-weight components are
  // dropped from the mixtures (they would only contribute -inf exponents).
  std::array<double, 4> w{};
  for (int k = 0; k < 4; ++k) {
    w[k] = std::max(0.0, joint.cell(k & 1, (k >> 1) & 1, 1)) / pr;
  }
  std::array<double, 4> cum{};
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) cum[k] = (acc += w[k]);
  cum[3] = 1.0;

  std::vector<int> active;
  for (int k = 0; k < 4; ++k) {
    if (w[k] > 0.0) active.push_back(k);
  }
  const size_t na = active.size();

  // Fixed per-component coefficients for the four conditional densities:
  //   A = f(y | x2)       B = f(y | x1)
  //   C = f(y)            D = f(y | x1, x2)
  std::array<double, 4> lcA{}, ivA{}, lcB{}, ivB{}, lcC{}, ivC{}, lcD{}, ivD{};
  for (size_t a = 0; a < na; ++a) {
    const int t1 = active[a] & 1;
    const int t2 = (active[a] >> 1) & 1;
    const double lw = std::log(w[active[a]]);
    const double vA = 1.0 + t1 * v1;
    const double vB = 1.0 + t2 * v2;
    const double vC = 1.0 + t1 * v1 + t2 * v2;
    lcA[a] = lw - std::log(kPi * vA);
    ivA[a] = 1.0 / vA;
    lcB[a] = lw - std::log(kPi * vB);
    ivB[a] = 1.0 / vB;
    lcC[a] = lw - std::log(kPi * vC);
    ivC[a] = 1.0 / vC;
    lcD[a] = lw - std::log(kPi);
    ivD[a] = 1.0;
  }

  std::vector<double> dA(na * kChunk), dB(na * kChunk), dC(na * kChunk),
      dD(na * kChunk);
  std::vector<double> nlA(kChunk), nlB(kChunk), nlC(kChunk), nlD(kChunk);
  MeanAccumulator acc1, acc2, accSum;

  const int64_t n_chunks = (n + kChunk - 1) / kChunk;
  for (int64_t c = 0; c < n_chunks; ++c) {
    const int64_t lo = c * kChunk;
    const size_t len = static_cast<size_t>(std::min<int64_t>(kChunk, n - lo));
    Rng rng(seed, static_cast<uint64_t>(c));
    for (size_t j = 0; j < len; ++j) {
      // Fixed draw order per sample: state, x1, x2, noise.
      const int state = rng.categorical4(cum);
      const auto x1 = rng.complex_gaussian(v1);
      const auto x2 = rng.complex_gaussian(v2);
      const auto z = rng.complex_gaussian(1.0);
      const int t1 = state & 1;
      const int t2 = (state >> 1) & 1;
      const std::array<double, 2> y = {t1 * x1[0] + t2 * x2[0] + z[0],
                                       t1 * x1[1] + t2 * x2[1] + z[1]};
      const double d00 = sq_dist(y, 0.0, 0.0);
      const double d10 = sq_dist(y, x1[0], x1[1]);
      const double d01 = sq_dist(y, x2[0], x2[1]);
      const double d11 = sq_dist(y, x1[0] + x2[0], x1[1] + x2[1]);
      for (size_t a = 0; a < na; ++a) {
        const int kt1 = active[a] & 1;
        const int kt2 = (active[a] >> 1) & 1;
        dA[a * kChunk + j] = kt2 ? d01 : d00;
        dB[a * kChunk + j] = kt1 ? d10 : d00;
        dC[a * kChunk + j] = d00;
        dD[a * kChunk + j] = kt1 ? (kt2 ? d11 : d10) : (kt2 ? d01 : d00);
      }
    }
    // The buffers are allocated with kChunk stride; evaluate with that
    // stride preserved by passing per-component rows of length kChunk but
    // only reading the first `len` entries.
    kernels::mixture_neglog2_density(dA.data(), na, kChunk, lcA.data(),
                                     ivA.data(), nlA.data());
    kernels::mixture_neglog2_density(dB.data(), na, kChunk, lcB.data(),
                                     ivB.data(), nlB.data());
    kernels::mixture_neglog2_density(dC.data(), na, kChunk, lcC.data(),
                                     ivC.data(), nlC.data());
    kernels::mixture_neglog2_density(dD.data(), na, kChunk, lcD.data(),
                                     ivD.data(), nlD.data());
    for (size_t j = 0; j < len; ++j) {
      acc1.add(nlA[j] - nlD[j]);
      acc2.add(nlB[j] - nlD[j]);
      accSum.add(nlC[j] - nlD[j]);
    }
  }

  auto finish = [&](const MeanAccumulator& a) {
    MIEstimate e;
    e.value_bits = pr * a.mean();
    e.std_err_bits = pr * a.std_err();
    e.n_samples = n;
    e.seed = seed;
    return e;
  };
  out.r1 = finish(acc1);
  out.r2 = finish(acc2);
  out.sum = finish(accSum);
  return out;
}

MIEstimate estimate_state_penalty(const JointStateDist& joint,
                                  const GaussianStrategy& strategy,
                                  int transmitter, int64_t n, uint64_t seed) {
  strategy.validate();
  require(transmitter == 1 || transmitter == 2, "transmitter must be 1 or 2");
  const double v_on = transmitter == 1 ? strategy.var1_on : strategy.var2_on;
  const double v_off =
      transmitter == 1 ? strategy.var1_off : strategy.var2_off;

  const double total = joint.sum();
  require(total > 0.0, "state table has no mass");
  const double prior = joint.pr_t_on(transmitter) / total;

  // Exact cases first: an input whose law does not depend on the switch
  // carries no switch information; a deterministic switch has none to carry;
  // a zero variance on exactly one side identifies the switch outright.
  if (v_on == v_off) return exact_estimate(0.0, seed);
  if (prior <= 0.0 || prior >= 1.0) return exact_estimate(0.0, seed);
  if (v_on == 0.0 || v_off == 0.0) {
    return exact_estimate(binary_entropy_bits(prior), seed);
  }

  require(n >= 2, "n_samples must be >= 2");
  const double log_prior_on = std::log(prior) - std::log(kPi * v_on);
  const double log_prior_off = std::log(1.0 - prior) - std::log(kPi * v_off);
  const double inv_on = 1.0 / v_on;
  const double inv_off = 1.0 / v_off;

  MeanAccumulator acc;
  const int64_t n_chunks = (n + kChunk - 1) / kChunk;
  for (int64_t c = 0; c < n_chunks; ++c) {
    const int64_t lo = c * kChunk;
    const size_t len = static_cast<size_t>(std::min<int64_t>(kChunk, n - lo));
    Rng rng(seed, static_cast<uint64_t>(c));
    for (size_t j = 0; j < len; ++j) {
      const bool on = rng.uniform01() < prior;
      const auto x = rng.complex_gaussian(on ? v_on : v_off);
      const double d2 = x[0] * x[0] + x[1] * x[1];
      const double l_on = log_prior_on - d2 * inv_on;
      const double l_off = log_prior_off - d2 * inv_off;
      // posterior P(on | x) without overflow
      const double diff = l_off - l_on;
      const double p_on =
          diff > 0.0 ? std::exp(-diff) / (1.0 + std::exp(-diff))
                     : 1.0 / (1.0 + std::exp(diff));
      acc.add(binary_entropy_bits(p_on));
    }
  }
  MIEstimate e;
  e.value_bits = binary_entropy_bits(prior) - acc.mean();
  e.std_err_bits = acc.std_err();
  e.n_samples = n;
  e.seed = seed;
  return e;
}

SandwichReport sandwich_check(const ModelParams& params,
                              const GaussianStrategy& strategy, int64_t n,
                              uint64_t seed, int resolution) {
  params.validate();
  const JointStateDist joint =
      build_joint(params.mu, params.rho, params.table_mode);

  SandwichReport report;
  report.estimates = estimate_causal_rates(joint, strategy, n, seed);

  const RateRegion o1 = outer1_region(params, resolution);
  const RateRegion o2 = outer2_region(params, resolution);
  report.outer1_support = support(o1, 1.0, 1.0);
  report.outer2_support = support(o2, 1.0, 1.0);

  const double est = report.estimates.sum.value_bits;
  const double slack = 3.0 * report.estimates.sum.std_err_bits;
  report.margin1 = report.outer1_support + slack - est;
  report.margin2 = report.outer2_support + slack - est;
  report.pass = report.margin1 >= 0.0 && report.margin2 >= 0.0;
  return report;
}

}  // namespace cogmac
