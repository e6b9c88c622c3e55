#include "cogmac/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cogmac/kernels.hpp"

namespace cogmac {

namespace {

double lg1p(double x) { return std::log1p(x) * 1.4426950408889634; }

// grid of per-event powers for one transmitter: solo power rises as the
// jointly-heard power falls, always saturating the budget
struct PowerSplit {
  std::vector<double> solo, joint;
};

PowerSplit budget_splits(double p_solo_event, double p_joint_event,
                         double budget, int res) {
  PowerSplit s;
  if (budget <= 0.0) {
    s.solo.push_back(0.0);
    s.joint.push_back(0.0);
    return s;
  }
  if (p_solo_event > 0.0 && p_joint_event > 0.0) {
    s.solo.reserve(res);
    s.joint.reserve(res);
    for (int i = 0; i < res; ++i) {
      const double t = double(i) / (res - 1);
      s.solo.push_back(t * budget / p_solo_event);
      s.joint.push_back((1.0 - t) * budget / p_joint_event);
    }
  } else if (p_solo_event > 0.0) {
    s.solo.push_back(budget / p_solo_event);
    s.joint.push_back(0.0);
  } else if (p_joint_event > 0.0) {
    s.solo.push_back(0.0);
    s.joint.push_back(budget / p_joint_event);
  } else {
    s.solo.push_back(0.0);
    s.joint.push_back(0.0);
  }
  return s;
}

RateRegion sweep_pentagons(const EventProbs& e, const PowerSplit& s1,
                           const PowerSplit& s2, RegionKind label,
                           const GapSpec* gaps) {
  const std::size_t n1 = s1.solo.size(), n2 = s2.solo.size();
  std::vector<double> a1(n1), c1j(n1), b2(n2), c2j(n2);
  kernels::log2_one_plus(s1.solo.data(), n1, e.pa, a1.data());
  kernels::log2_one_plus(s1.joint.data(), n1, e.pc, c1j.data());
  kernels::log2_one_plus(s2.solo.data(), n2, e.pb, b2.data());
  kernels::log2_one_plus(s2.joint.data(), n2, e.pc, c2j.data());

  std::vector<double> sum_pow(n1 * n2), sum_lg(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      sum_pow[i * n2 + j] = s1.joint[i] + s2.joint[j];
  kernels::log2_one_plus(sum_pow.data(), n1 * n2, e.pc, sum_lg.data());

  std::vector<PentagonConstraints> pents;
  pents.reserve(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      PentagonConstraints p;
      p.c1 = a1[i] + c1j[i];
      p.c2 = b2[j] + c2j[j];
      p.c12 = a1[i] + b2[j] + sum_lg[i * n2 + j];
      if (gaps) {
        p.c1 = std::max(0.0, p.c1 - gaps->d_r1);
        p.c2 = std::max(0.0, p.c2 - gaps->d_r2);
        p.c12 = std::max(0.0, p.c12 - gaps->d_sum);
      }
      p.c12 = std::clamp(p.c12, std::max(p.c1, p.c2), p.c1 + p.c2);
      pents.push_back(p);
    }
  return hull_union(pents, label);
}

void check_resolution(int res) {
  if (res < 2 || res > 100000)
    throw std::domain_error("sweep_resolution must lie in [2, 100000]");
}

double golden_max_1d(const std::function<double(double)>& f, double lo,
                     double hi, double* arg_out) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, hi); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = (a + b) / 2, fm = f(xm);
  if (arg_out) *arg_out = xm;
  return fm;
}

void check_events(const EventProbs& e) {
  const double probs[6] = {e.pa, e.pb, e.pc, e.pd, e.pe, e.pf};
  for (double p : probs)
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::domain_error("event probability must be finite and >= 0");
}

}  // namespace

GapSpec genie_gaps(const JointStateDist& joint, std::int64_t dwell_n) {
  if (dwell_n < 1) throw std::domain_error("dwell_n must be >= 1");
  const EventProbs e = event_probs(joint);
  const ConditionalEntropies h = conditional_entropies(joint);
  const double inv_n = 1.0 / double(dwell_n);
  GapSpec g;
  g.d_r1 = e.pa * std::min(h.h_t1_given_r, inv_n);
  g.d_r2 = e.pb * std::min(h.h_t2_given_r, inv_n);
  g.d_sum = e.pc * std::min(h.h_t1t2_given_r, 2.0 * inv_n);
  return g;
}

RateRegion outer1_region(const ModelParams& params, int sweep_resolution) {
  params.validate();
  check_resolution(sweep_resolution);
  const JointStateDist j = build_joint(params.mu, params.rho, params.table_mode);
  const EventProbs e = event_probs(j);
  const PowerSplit s1 = budget_splits(e.pa, e.pc, params.p1_avg, sweep_resolution);
  const PowerSplit s2 = budget_splits(e.pb, e.pc, params.p2_avg, sweep_resolution);
  return sweep_pentagons(e, s1, s2, RegionKind::outer1, nullptr);
}

namespace {

// one common power swept on [0, budget / P(this transmitter sends)]
PowerSplit outer2_splits(double p_solo_ev, double p_joint_ev, double p_send,
                         double budget, int res) {
  PowerSplit s;
  const double pmax = p_send > 0.0 ? budget / p_send : 0.0;
  const int n = (p_send > 0.0 && pmax > 0.0) ? res : 1;
  s.solo.reserve(n);
  s.joint.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double power = n == 1 ? pmax : pmax * double(i) / (n - 1);
    s.solo.push_back(p_solo_ev > 0.0 ? power : 0.0);
    s.joint.push_back(p_joint_ev > 0.0 ? power : 0.0);
  }
  return s;
}

}  // namespace

RateRegion outer2_region(const ModelParams& params, int sweep_resolution) {
  params.validate();
  check_resolution(sweep_resolution);
  const JointStateDist j = build_joint(params.mu, params.rho, params.table_mode);
  const EventProbs e = event_probs(j);
  const PowerSplit s1 = outer2_splits(e.pa, e.pc, e.pd + e.pf,
                                      params.p1_avg, sweep_resolution);
  const PowerSplit s2 = outer2_splits(e.pb, e.pc, e.pe + e.pf,
                                      params.p2_avg, sweep_resolution);
  return sweep_pentagons(e, s1, s2, RegionKind::outer2, nullptr);
}

RateRegion inner_region(const ModelParams& params, int sweep_resolution) {
  params.validate();
  check_resolution(sweep_resolution);
  const JointStateDist j = build_joint(params.mu, params.rho, params.table_mode);
  const EventProbs e = event_probs(j);
  const GapSpec g = genie_gaps(j, params.dwell_n);
  const PowerSplit s1 = outer2_splits(e.pa, e.pc, e.pd + e.pf,
                                      params.p1_avg, sweep_resolution);
  const PowerSplit s2 = outer2_splits(e.pb, e.pc, e.pe + e.pf,
                                      params.p2_avg, sweep_resolution);
  return sweep_pentagons(e, s1, s2, RegionKind::inner, &g);
}

PowerAllocation optimal_allocation(const EventProbs& e, double p1, double p2) {
  check_events(e);
  if (!(p1 >= 0.0) || !(p2 >= 0.0) || !std::isfinite(p1) || !std::isfinite(p2))
    throw std::domain_error("power budgets must be finite and >= 0");
  const double pabc = e.pa + e.pb + e.pc;
  if (pabc <= 0.0)
    throw std::domain_error(
        "no transmission is ever heard (pa + pb + pc = 0)");

  PowerAllocation a;
  a.p1df = (e.pd + e.pf) > 0.0 ? p1 / (e.pd + e.pf) : 0.0;
  a.p2ef = (e.pe + e.pf) > 0.0 ? p2 / (e.pe + e.pf) : 0.0;

  if (e.pc <= 0.0) {
    a.p1a = e.pa > 0.0 ? p1 / e.pa : 0.0;
    a.p2b = e.pb > 0.0 ? p2 / e.pb : 0.0;
    return a;
  }
  if (e.pa <= 0.0 && e.pb <= 0.0) {
    a.p1c = p1 / e.pc;
    a.p2c = p2 / e.pc;
    return a;
  }
  if (e.pa <= 0.0) {
    // transmitter 1 only heard jointly; equalize 1+p2b with 1+p1c+p2c
    a.p1c = p1 / e.pc;
    a.p2b = (p1 + p2) / (e.pb + e.pc);
    a.p2c = a.p2b - a.p1c;
    if (a.p2c < 0.0) {
      a.boundary_fallback = true;
      a.p2c = 0.0;
      a.p2b = p2 / e.pb;
    }
    return a;
  }
  if (e.pb <= 0.0) {
    a.p2c = p2 / e.pc;
    a.p1a = (p1 + p2) / (e.pa + e.pc);
    a.p1c = a.p1a - a.p2c;
    if (a.p1c < 0.0) {
      a.boundary_fallback = true;
      a.p1c = 0.0;
      a.p1a = p1 / e.pa;
    }
    return a;
  }

  // all three events live: interior solution equalizes 1+power everywhere
  const double s = (p1 + p2) / pabc;
  const double p1c = ((e.pb + e.pc) * p1 - e.pa * p2) / (pabc * e.pc);
  const double p2c = ((e.pa + e.pc) * p2 - e.pb * p1) / (pabc * e.pc);
  if (p1c >= 0.0 && p2c >= 0.0) {
    a.p1a = s;
    a.p2b = s;
    a.p1c = p1c;
    a.p2c = p2c;
    return a;
  }
  a.boundary_fallback = true;
  if (p1c < 0.0) {
    // transmitter 1 cannot afford joint transmission: solo only, and
    // transmitter 2 water-fills across its two events
    a.p1a = p1 / e.pa;
    a.p2b = p2 / (e.pb + e.pc);
    a.p2c = a.p2b;
  } else {
    a.p2b = p2 / e.pb;
    a.p1a = p1 / (e.pa + e.pc);
    a.p1c = a.p1a;
  }
  return a;
}

PowerAllocation optimal_allocation(const ModelParams& params) {
  params.validate();
  const JointStateDist j = build_joint(params.mu, params.rho, params.table_mode);
  return optimal_allocation(event_probs(j), params.p1_avg, params.p2_avg);
}

double allocation_sum_rate(const EventProbs& e, const PowerAllocation& a) {
  double r = 0.0;
  if (e.pa > 0.0) r += e.pa * lg1p(a.p1a);
  if (e.pb > 0.0) r += e.pb * lg1p(a.p2b);
  if (e.pc > 0.0) r += e.pc * lg1p(a.p1c + a.p2c);
  return r;
}

double max_sum_rate(const EventProbs& e, double p1, double p2) {
  check_events(e);
  const double p = e.pa + e.pb + e.pc;
  if (p <= 0.0) return 0.0;
  return p * lg1p((p1 + p2) / p);
}

double max_sum_rate(const ModelParams& params) {
  params.validate();
  const JointStateDist j = build_joint(params.mu, params.rho, params.table_mode);
  return max_sum_rate(event_probs(j), params.p1_avg, params.p2_avg);
}

OracleResult oracle_max_sum_rate(const EventProbs& e, double p1, double p2,
                                 int grid_points, int max_ascent_rounds) {
  check_events(e);
  if (grid_points < 2) throw std::domain_error("grid_points must be >= 2");
  const double pabc = e.pa + e.pb + e.pc;
  if (pabc <= 0.0)
    throw std::domain_error(
        "no transmission is ever heard (pa + pb + pc = 0)");

  // objective over the two solo powers, joint powers saturating the budgets
  const double x_hi = e.pa > 0.0 ? p1 / e.pa : 0.0;
  const double y_hi = e.pb > 0.0 ? p2 / e.pb : 0.0;
  const auto joint1 = [&](double x) {
    return e.pc > 0.0 ? std::max(0.0, (p1 - e.pa * x) / e.pc) : 0.0;
  };
  const auto joint2 = [&](double y) {
    return e.pc > 0.0 ? std::max(0.0, (p2 - e.pb * y) / e.pc) : 0.0;
  };
  const auto obj = [&](double x, double y) {
    double r = 0.0;
    if (e.pa > 0.0) r += e.pa * lg1p(x);
    if (e.pb > 0.0) r += e.pb * lg1p(y);
    if (e.pc > 0.0) r += e.pc * lg1p(joint1(x) + joint2(y));
    return r;
  };

  // when the jointly-heard event is dead, saturating solo power is optimal
  double x = x_hi, y = y_hi;
  if (e.pc > 0.0) {
    double best = -HUGE_VAL;
    for (int i = 0; i < grid_points; ++i) {
      const double xi = x_hi * double(i) / (grid_points - 1);
      for (int j = 0; j < grid_points; ++j) {
        const double yj = y_hi * double(j) / (grid_points - 1);
        const double v = obj(xi, yj);
        if (v > best) {
          best = v;
          x = xi;
          y = yj;
        }
      }
      if (x_hi == 0.0) break;
    }
    double prev = best;
    for (int round = 0; round < max_ascent_rounds; ++round) {
      if (x_hi > 0.0)
        golden_max_1d([&](double t) { return obj(t, y); }, 0.0, x_hi, &x);
      if (y_hi > 0.0)
        golden_max_1d([&](double t) { return obj(x, t); }, 0.0, y_hi, &y);
      const double cur = obj(x, y);
      if (cur - prev <= 1e-14) break;
      prev = cur;
    }
  }

  OracleResult res;
  res.allocation.p1a = x;
  res.allocation.p2b = y;
  res.allocation.p1c = std::max(0.0, joint1(x));
  res.allocation.p2c = std::max(0.0, joint2(y));
  res.allocation.p1df = (e.pd + e.pf) > 0.0 ? p1 / (e.pd + e.pf) : 0.0;
  res.allocation.p2ef = (e.pe + e.pf) > 0.0 ? p2 / (e.pe + e.pf) : 0.0;
  res.sum_rate_bits = obj(x, y);
  return res;
}

OracleResult oracle_max_sum_rate(const ModelParams& params, int grid_points,
                                 int max_ascent_rounds) {
  params.validate();
  const JointStateDist j = build_joint(params.mu, params.rho, params.table_mode);
  return oracle_max_sum_rate(event_probs(j), params.p1_avg, params.p2_avg,
                             grid_points, max_ascent_rounds);
}

}  // namespace cogmac
