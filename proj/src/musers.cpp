#include "cogmac/musers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cogmac {

namespace {

constexpr double kInvLn2 = 1.4426950408889634;

double lg1p(double x) { return std::log1p(x) * kInvLn2; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

void check_budgets(const MUserModel& model, const std::vector<double>& budgets) {
  require(budgets.size() == static_cast<size_t>(model.m),
          "budgets must have one entry per transmitter");
  for (size_t i = 0; i < budgets.size(); ++i) {
    require(std::isfinite(budgets[i]) && budgets[i] >= 0.0,
            "budget for user " + std::to_string(i) + " must be >= 0");
  }
}

// Power user i spends, charged only on states the receiver hears.
double spent_power(const MUserModel& model, const StateUserAllocation& alloc,
                   int user) {
  double acc = 0.0;
  for (int s = 0; s < model.n_states(); ++s) {
    if (!model.receiver_on(s) || !model.transmitter_on(s, user)) continue;
    acc += std::max(0.0, model.prob[s]) * alloc[s][user];
  }
  return acc;
}

void check_allocation(const MUserModel& model,
                      const StateUserAllocation& alloc,
                      const std::vector<double>& budgets) {
  require(alloc.size() == static_cast<size_t>(model.n_states()),
          "allocation must have one row per joint state");
  for (int s = 0; s < model.n_states(); ++s) {
    require(alloc[s].size() == static_cast<size_t>(model.m),
            "allocation rows must have one entry per transmitter");
    for (int i = 0; i < model.m; ++i) {
      require(std::isfinite(alloc[s][i]) && alloc[s][i] >= 0.0,
              "allocated powers must be finite and >= 0");
      if (!model.transmitter_on(s, i)) {
        require(alloc[s][i] <= 1e-12,
                "allocation places power for user " + std::to_string(i) +
                    " in state " + std::to_string(s) +
                    " where its switch is off");
      }
    }
  }
  for (int i = 0; i < model.m; ++i) {
    const double spent = spent_power(model, alloc, i);
    if (spent > budgets[i] + 1e-9) {
      throw std::domain_error(
          "allocation exceeds user " + std::to_string(i) +
          " power budget by " + std::to_string(spent - budgets[i]));
    }
  }
}

// Sum-rate bound for one subset of users at a fixed allocation.
double subset_bound(const MUserModel& model, const StateUserAllocation& alloc,
                    uint32_t subset) {
  double acc = 0.0;
  for (int s = 0; s < model.n_states(); ++s) {
    const double p = std::max(0.0, model.prob[s]);
    if (p <= 0.0 || !model.receiver_on(s)) continue;
    double power = 0.0;
    for (int i = 0; i < model.m; ++i) {
      if (((subset >> i) & 1u) && model.transmitter_on(s, i)) {
        power += alloc[s][i];
      }
    }
    acc += p * lg1p(power);
  }
  return acc;
}

std::vector<SubsetRateBound> all_subset_bounds(
    const MUserModel& model, const StateUserAllocation& alloc) {
  std::vector<SubsetRateBound> out;
  out.reserve(1u << model.m);
  for (uint32_t subset = 0; subset < (1u << model.m); ++subset) {
    out.push_back({subset, subset_bound(model, alloc, subset)});
  }
  return out;
}

}  // namespace

void MUserModel::validate() const {
  require(m >= 1 && m <= 16, "m must lie in [1, 16]");
  require(prob.size() == static_cast<size_t>(n_states()),
          "state probability table must have 2^(m+1) entries");
  double total = 0.0;
  for (double p : prob) {
    require(std::isfinite(p), "state probabilities must be finite");
    require(p >= -1e-12, "state probability is negative");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-9,
          "state probabilities must sum to 1");
}

double MUserModel::pr_transmitter_on(int user) const {
  require(user >= 0 && user < m, "user index out of range");
  double acc = 0.0;
  for (int s = 0; s < n_states(); ++s) {
    if (transmitter_on(s, user)) acc += std::max(0.0, prob[s]);
  }
  return acc;
}

MUserModel make_iid_model(int m, double mu) {
  require(m >= 1 && m <= 16, "m must lie in [1, 16]");
  require(std::isfinite(mu) && mu >= 0.0 && mu <= 1.0,
          "mu must lie in [0, 1]");
  MUserModel model;
  model.m = m;
  model.prob.assign(1u << (m + 1), 0.0);
  for (int s = 0; s < model.n_states(); ++s) {
    double p = 1.0;
    for (int b = 0; b <= m; ++b) {
      p *= ((s >> b) & 1) ? (1.0 - mu) : mu;
    }
    model.prob[s] = p;
  }
  model.validate();
  return model;
}

MUserModel from_two_user(const JointStateDist& joint) {
  MUserModel model;
  model.m = 2;
  // The two-user cell index already packs (t1, t2, r) as bits 0..2, which is
  // exactly the m = 2 state layout.
  model.prob.assign(joint.cells, joint.cells + 8);
  double total = 0.0;
  for (double p : model.prob) total += p;
  require(std::abs(total - 1.0) <= 1e-9,
          "two-user table must be normalized to embed as an m-user model");
  model.validate();
  return model;
}

std::vector<SubsetRateBound> muser_outer1_sum_bounds(
    const MUserModel& model, const StateUserAllocation& allocation,
    const std::vector<double>& budgets) {
  model.validate();
  check_budgets(model, budgets);
  check_allocation(model, allocation, budgets);
  return all_subset_bounds(model, allocation);
}

std::vector<SubsetRateBound> muser_outer2_sum_bounds(
    const MUserModel& model, const std::vector<double>& budgets) {
  model.validate();
  check_budgets(model, budgets);
  StateUserAllocation alloc(model.n_states(),
                            std::vector<double>(model.m, 0.0));
  for (int i = 0; i < model.m; ++i) {
    const double pr_on = model.pr_transmitter_on(i);
    // Constant power whenever on saturates the ungated average-power
    // constraint at budget / P(on); a never-on transmitter sends nothing.
    const double level = pr_on > 0.0 ? budgets[i] / pr_on : 0.0;
    for (int s = 0; s < model.n_states(); ++s) {
      if (model.transmitter_on(s, i)) alloc[s][i] = level;
    }
  }
  return all_subset_bounds(model, alloc);
}

double muser_inner_gap(const MUserModel& model, uint32_t subset,
                       int64_t dwell_n) {
  model.validate();
  require(subset < (1u << model.m), "subset mask has bits beyond user count");
  require(dwell_n >= 1, "dwell_n must be >= 1");
  if (subset == 0) return 0.0;

  const int k = __builtin_popcount(subset);
  // Joint law of the subset's switches together with the receiver switch.
  std::vector<double> joint(static_cast<size_t>(1u << k) * 2, 0.0);
  double pr_r[2] = {0.0, 0.0};
  for (int s = 0; s < model.n_states(); ++s) {
    const double p = std::max(0.0, model.prob[s]);
    uint32_t pattern = 0;
    int bit = 0;
    for (int i = 0; i < model.m; ++i) {
      if ((subset >> i) & 1u) {
        if (model.transmitter_on(s, i)) pattern |= 1u << bit;
        ++bit;
      }
    }
    const int r = model.receiver_on(s) ? 1 : 0;
    joint[pattern * 2 + r] += p;
    pr_r[r] += p;
  }
  double h_cond = 0.0;
  for (uint32_t pat = 0; pat < (1u << k); ++pat) {
    for (int r = 0; r < 2; ++r) {
      const double p = joint[pat * 2 + r];
      if (p > 0.0 && pr_r[r] > 0.0) {
        h_cond -= p * std::log2(p / pr_r[r]);
      }
    }
  }

  // Probability the receiver listens while exactly the subset's users send.
  const uint32_t user_mask = (1u << model.m) - 1;
  double pr_exact = 0.0;
  for (int s = 0; s < model.n_states(); ++s) {
    if (model.receiver_on(s) &&
        (static_cast<uint32_t>(s) & user_mask) == subset) {
      pr_exact += std::max(0.0, model.prob[s]);
    }
  }
  const double cap = static_cast<double>(k) / static_cast<double>(dwell_n);
  return pr_exact * std::min(h_cond, cap);
}

namespace {

// Exact single-user water-filling: maximize sum over usable states of
// q_s * lg(1 + base_s + x_s) with sum q_s * x_s <= budget, x >= 0.  The
// optimal level w solves sum q_s * (w - 1 - base_s)+ = budget; the spend is
// piecewise linear in w, so a sort plus one scan finds it exactly.
struct WaterfillState {
  double q, base;
  int state;
};

void waterfill_user(const MUserModel& model, StateUserAllocation& alloc,
                    int user, double budget) {
  std::vector<WaterfillState> usable;
  for (int s = 0; s < model.n_states(); ++s) {
    if (!model.receiver_on(s) || !model.transmitter_on(s, user)) continue;
    const double q = std::max(0.0, model.prob[s]);
    alloc[s][user] = 0.0;
    if (q <= 0.0) continue;
    double base = 0.0;
    for (int j = 0; j < model.m; ++j) {
      if (j != user && model.transmitter_on(s, j)) base += alloc[s][j];
    }
    usable.push_back({q, base, s});
  }
  if (usable.empty() || budget <= 0.0) return;

  std::sort(usable.begin(), usable.end(),
            [](const WaterfillState& a, const WaterfillState& b) {
              return a.base < b.base;
            });
  // Scan breakpoints w = 1 + base_k; within a segment the spend is
  // w * q_sum - weighted threshold sum.
  double q_sum = 0.0, qb_sum = 0.0, level = 0.0;
  for (size_t k = 0; k < usable.size(); ++k) {
    q_sum += usable[k].q;
    qb_sum += usable[k].q * (1.0 + usable[k].base);
    const double next_threshold =
        k + 1 < usable.size() ? 1.0 + usable[k + 1].base
                              : std::numeric_limits<double>::infinity();
    level = (budget + qb_sum) / q_sum;
    if (level <= next_threshold) break;
  }
  for (const WaterfillState& u : usable) {
    alloc[u.state][user] = std::max(0.0, level - 1.0 - u.base);
  }
}

double full_set_rate(const MUserModel& model,
                     const StateUserAllocation& alloc) {
  return subset_bound(model, alloc, (1u << model.m) - 1);
}

// Largest stationarity / budget violation across users at the allocation.
double kkt_residual(const MUserModel& model, const StateUserAllocation& alloc,
                    const std::vector<double>& budgets) {
  double worst = 0.0;
  for (int i = 0; i < model.m; ++i) {
    double lambda = 0.0;
    bool usable = false;
    for (int s = 0; s < model.n_states(); ++s) {
      if (!model.receiver_on(s) || !model.transmitter_on(s, i)) continue;
      if (std::max(0.0, model.prob[s]) <= 0.0) continue;
      usable = true;
      double total = 0.0;
      for (int j = 0; j < model.m; ++j) {
        if (model.transmitter_on(s, j)) total += alloc[s][j];
      }
      lambda = std::max(lambda, 1.0 / (1.0 + total));
    }
    if (!usable) continue;
    for (int s = 0; s < model.n_states(); ++s) {
      if (!model.receiver_on(s) || !model.transmitter_on(s, i)) continue;
      if (std::max(0.0, model.prob[s]) <= 0.0) continue;
      if (alloc[s][i] <= 0.0) continue;
      double total = 0.0;
      for (int j = 0; j < model.m; ++j) {
        if (model.transmitter_on(s, j)) total += alloc[s][j];
      }
      worst = std::max(worst, lambda - 1.0 / (1.0 + total));
    }
    if (budgets[i] > 0.0) {
      worst = std::max(worst, std::abs(spent_power(model, alloc, i) -
                                       budgets[i]));
    }
  }
  return worst;
}

}  // namespace

MUserSumRateResult muser_max_sum_rate(const MUserModel& model,
                                      const std::vector<double>& budgets) {
  model.validate();
  check_budgets(model, budgets);

  MUserSumRateResult out;
  out.allocation.assign(model.n_states(), std::vector<double>(model.m, 0.0));
  out.sweeps = 0;
  out.kkt_residual = 0.0;

  double value = 0.0;
  const int max_sweeps = 2000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < model.m; ++i) {
      waterfill_user(model, out.allocation, i, budgets[i]);
    }
    out.sweeps = sweep + 1;
    const double new_value = full_set_rate(model, out.allocation);
    const double gain = new_value - value;
    value = new_value;
    out.kkt_residual = kkt_residual(model, out.allocation, budgets);
    if (out.kkt_residual <= 1e-10) break;
    // Floating point can leave the residual slightly above the target even
    // once the iterates have stopped moving; accept a stalled sweep too.
    if (sweep > 0 && gain <= 1e-14 && out.kkt_residual <= 1e-9) break;
  }
  out.sum_rate_bits = value;
  return out;
}

PolymatroidReport verify_polymatroid(
    const std::vector<SubsetRateBound>& bounds, double tol) {
  require(!bounds.empty(), "bound list must not be empty");
  size_t n = bounds.size();
  require((n & (n - 1)) == 0,
          "bound list must cover every subset (size must be a power of 2)");
  std::vector<double> f(n, 0.0);
  std::vector<bool> seen(n, false);
  for (const SubsetRateBound& b : bounds) {
    require(b.subset < n, "subset mask out of range for the bound list size");
    require(!seen[b.subset], "duplicate subset in bound list");
    seen[b.subset] = true;
    f[b.subset] = b.bound_bits;
  }

  PolymatroidReport report{true, 0.0, 0, 0};
  auto record = [&](double violation, uint32_t a, uint32_t b) {
    if (violation > report.worst_violation) {
      report.worst_violation = violation;
      report.witness_a = a;
      report.witness_b = b;
    }
  };

  record(std::abs(f[0]), 0, 0);  // normalization: f(empty) == 0

  // Monotonicity along single-element extensions covers all inclusions.
  const int m = static_cast<int>(std::round(std::log2(double(n))));
  for (uint32_t a = 0; a < n; ++a) {
    for (int i = 0; i < m; ++i) {
      if ((a >> i) & 1u) continue;
      const uint32_t b = a | (1u << i);
      record(f[a] - f[b], a, b);
    }
  }

  for (uint32_t a = 0; a < n; ++a) {
    for (uint32_t b = a; b < n; ++b) {
      record(f[a | b] + f[a & b] - f[a] - f[b], a, b);
    }
  }

  report.ok = report.worst_violation <= tol;
  return report;
}

}  // namespace cogmac
