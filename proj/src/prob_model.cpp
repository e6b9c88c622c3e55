#include "cogmac/prob_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cogmac {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

double entropy_bits(const double* p, int n) {
  double h = 0.0;
  for (int i = 0; i < n; ++i)
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  return h;
}

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(mu) && mu >= 0.0 && mu <= 1.0, "mu must lie in [0,1]");
  require(std::isfinite(rho) && rho >= 0.0 && rho <= 1.0,
          "rho must lie in [0,1]");
  require(std::isfinite(p1_avg) && p1_avg >= 0.0, "p1_avg must be >= 0");
  require(std::isfinite(p2_avg) && p2_avg >= 0.0, "p2_avg must be >= 0");
  require(dwell_n >= 1, "dwell_n must be >= 1");
  require(std::isfinite(i_sq) && i_sq >= 1.0, "i_sq must be >= 1");
}

double JointStateDist::sum() const {
  double s = 0.0;
  for (double c : cells) s += c;
  return s;
}

double JointStateDist::pr_sr_on() const {
  return cells[4] + cells[5] + cells[6] + cells[7];
}

double JointStateDist::pr_t_on(int transmitter) const {
  if (transmitter != 1 && transmitter != 2)
    throw std::domain_error("transmitter index must be 1 or 2");
  const int bit = transmitter == 1 ? 1 : 2;
  double s = 0.0;
  for (int i = 0; i < 8; ++i)
    if (i & bit) s += cells[i];
  return s;
}

JointStateDist build_joint(double mu, double rho, TableMode mode) {
  require(std::isfinite(mu) && mu >= 0.0 && mu <= 1.0, "mu must lie in [0,1]");
  require(std::isfinite(rho) && rho >= 0.0 && rho <= 1.0,
          "rho must lie in [0,1]");

  // per-cell probabilities by number of switches that are on
  const double q = (1 - mu) * (1 - mu) + rho * mu * (1 - mu);
  const double p2 = (1 - rho) * mu * q;
  const double p3 = q * (1 - mu + mu * rho);
  double p0, p1;
  if (mode == TableMode::verbatim) {
    p0 = mu * (mu * mu + rho * (1 - mu * mu));
    p1 = (1 - rho * rho) * (1 - mu) * mu * mu;
  } else {
    p1 = (1 - mu) - q - p2;
    p0 = 1.0 - 3 * p1 - 3 * p2 - p3;
  }

  const double by_count[4] = {p0, p1, p2, p3};
  JointStateDist j;
  j.mode = mode;
  double total = 0.0;
  for (int i = 0; i < 8; ++i) {
    const int count = (i & 1) + ((i >> 1) & 1) + ((i >> 2) & 1);
    j.cells[i] = by_count[count];
    total += j.cells[i];
  }
  j.normalization_defect = std::abs(1.0 - total);

  for (double& c : j.cells) {
    require(c >= -1e-12, "joint cell probability is negative");
    if (c < 0.0) c = 0.0;
  }
  if (mode == TableMode::consistent)
    require(j.normalization_defect <= 1e-9,
            "consistent table failed to normalize");
  return j;
}

EventProbs event_probs(const JointStateDist& j) {
  EventProbs e;
  e.pa = j.cell(1, 0, 1);
  e.pb = j.cell(0, 1, 1);
  e.pc = j.cell(1, 1, 1);
  e.pd = j.cell(1, 0, 0) + j.cell(1, 0, 1);
  e.pe = j.cell(0, 1, 0) + j.cell(0, 1, 1);
  e.pf = j.cell(1, 1, 0) + j.cell(1, 1, 1);
  return e;
}

double p_mu_rho(double mu, double rho) {
  return (1 + mu - mu * rho) * ((1 - mu) * (1 - mu) + rho * (mu - mu * mu));
}

double dp_dmu(double mu, double rho) {
  const double c = 1 - rho;
  return mu * c * c * (3 * mu - 2) - 1;
}

double dp_drho(double mu, double rho) {
  return 2 * mu * mu * (1 - rho) * (1 - mu);
}

ConditionalEntropies conditional_entropies(const JointStateDist& j) {
  double cells[8];
  double total = j.sum();
  ConditionalEntropies out{};
  out.renormalized = false;
  require(total > 0.0, "joint distribution sums to zero");
  if (std::abs(total - 1.0) > 1e-9) out.renormalized = true;
  for (int i = 0; i < 8; ++i) cells[i] = j.cells[i] / total;

  double h_joint = 0.0, h_t1 = 0.0, h_t2 = 0.0;
  for (int r = 0; r < 2; ++r) {
    double pr = 0.0;
    for (int i = 0; i < 4; ++i) pr += cells[i | r << 2];
    if (pr <= 0.0) continue;
    double joint4[4], m1[2] = {0, 0}, m2[2] = {0, 0};
    for (int t1 = 0; t1 < 2; ++t1)
      for (int t2 = 0; t2 < 2; ++t2) {
        const double p = cells[t1 | t2 << 1 | r << 2] / pr;
        joint4[t1 | t2 << 1] = p;
        m1[t1] += p;
        m2[t2] += p;
      }
    h_joint += pr * entropy_bits(joint4, 4);
    h_t1 += pr * entropy_bits(m1, 2);
    h_t2 += pr * entropy_bits(m2, 2);
  }
  out.h_t1_given_r = h_t1;
  out.h_t2_given_r = h_t2;
  out.h_t1t2_given_r = h_joint;
  return out;
}

Correlation pairwise_correlation(const JointStateDist& j, StatePair which) {
  const double total = j.sum();
  require(total > 0.0, "joint distribution sums to zero");

  int bit_x, bit_y;
  switch (which) {
    case StatePair::t1_t2: bit_x = 1; bit_y = 2; break;
    case StatePair::t1_r: bit_x = 1; bit_y = 4; break;
    default: bit_x = 2; bit_y = 4; break;
  }
  double px = 0.0, py = 0.0, pxy = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double p = j.cells[i] / total;
    if (i & bit_x) px += p;
    if (i & bit_y) py += p;
    if ((i & bit_x) && (i & bit_y)) pxy += p;
  }
  const double vx = px * (1 - px), vy = py * (1 - py);
  if (vx <= 1e-15 || vy <= 1e-15) return {0.0, true};
  return {(pxy - px * py) / std::sqrt(vx * vy), false};
}

}  // namespace cogmac
