// Two-user capacity bounds: the two outer regions, the dwell-limited inner
// region, closed-form sum-rate allocations, and the brute-force oracle that
// cross-checks them without sharing any algebra.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cogmac/bounds.hpp"
#include "cogmac/prob_model.hpp"
#include "cogmac/region.hpp"
#include "doctest.h"

namespace {

using cogmac::EventProbs;
using cogmac::ModelParams;
using cogmac::PowerAllocation;
using cogmac::RateRegion;

ModelParams make_params(double mu, double rho, double p1 = 1.0,
                        double p2 = 1.0, std::int64_t dwell_n = 1) {
  ModelParams p;
  p.mu = mu;
  p.rho = rho;
  p.p1_avg = p1;
  p.p2_avg = p2;
  p.dwell_n = dwell_n;
  return p;
}

EventProbs events_at(double mu, double rho) {
  return cogmac::event_probs(cogmac::build_joint(mu, rho, cogmac::TableMode::consistent));
}

}  // namespace

TEST_CASE("outer-2 pentagon at mu=0.5, rho=0 matches hand arithmetic") {
  // Independent switches, each on w.p. 1/2: every heard event has
  // probability 1/8.  P(T1 on) = 1/2, so the constant power is 1/(1/2) = 2
  // and c1 = (pa + pc) * lg(1 + 2) = 0.25 * lg(3).
  const RateRegion r = cogmac::outer2_region(make_params(0.5, 0.0));
  const double c1 = 0.25 * std::log2(3.0);
  CHECK(std::fabs(c1 - 0.396240625116) <= 1e-9);
  CHECK(std::fabs(cogmac::support(r, 1.0, 0.0) - c1) <= 1e-12);
  CHECK(std::fabs(cogmac::support(r, 0.0, 1.0) - c1) <= 1e-12);
  // Sum cap: (pa + pb) * lg(1 + 2) + pc * lg(1 + 2 + 2).
  const double c12 = 0.25 * std::log2(3.0) + 0.125 * std::log2(5.0);
  CHECK(std::fabs(cogmac::support(r, 1.0, 1.0) - c12) <= 1e-12);
}

TEST_CASE("outer-1 sum-rate support matches the closed-form optimum") {
  const ModelParams params = make_params(0.5, 0.0);
  const RateRegion r = cogmac::outer1_region(params, 201);
  const double sweep_support = cogmac::support(r, 1.0, 1.0);
  // Frozen value of the 201-point sweep.
  CHECK(std::fabs(sweep_support - 0.998609485) <= 1e-6);
  // The sweep slightly under-covers the true optimum but must stay within
  // discretization error of it (and never exceed it).
  const double closed = cogmac::max_sum_rate(params);
  CHECK(std::fabs(closed - 0.998611879771) <= 1e-9);
  CHECK(sweep_support <= closed + 1e-12);
  CHECK(closed - sweep_support <= 1e-4);
}

TEST_CASE("always-on channel collapses every region to one pentagon") {
  // mu = 0: all switches always on, so the three regions coincide with the
  // classic two-user pentagon c1 = c2 = 1, c12 = lg(3).
  const ModelParams params = make_params(0.0, 0.0);
  const double lg3 = std::log2(3.0);
  for (const RateRegion& r :
       {cogmac::outer1_region(params), cogmac::outer2_region(params),
        cogmac::inner_region(params)}) {
    CHECK(std::fabs(cogmac::support(r, 1.0, 0.0) - 1.0) <= 1e-9);
    CHECK(std::fabs(cogmac::support(r, 0.0, 1.0) - 1.0) <= 1e-9);
    CHECK(std::fabs(cogmac::support(r, 1.0, 1.0) - lg3) <= 1e-9);
  }
}

TEST_CASE("always-off channel collapses every region to the origin") {
  const ModelParams params = make_params(1.0, 0.0);
  for (const RateRegion& r :
       {cogmac::outer1_region(params), cogmac::outer2_region(params),
        cogmac::inner_region(params)}) {
    REQUIRE(r.vertices.size() == 1);
    CHECK(std::fabs(r.vertices[0].r1) <= 1e-12);
    CHECK(std::fabs(r.vertices[0].r2) <= 1e-12);
  }
}

TEST_CASE("regions nest: outer1 contains outer2 contains inner") {
  for (const double mu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (const double rho : {0.0, 0.4, 0.9}) {
      CAPTURE(mu);
      CAPTURE(rho);
      const ModelParams params = make_params(mu, rho, 1.5, 0.7, 4);
      const RateRegion o1 = cogmac::outer1_region(params, 101);
      const RateRegion o2 = cogmac::outer2_region(params, 101);
      const RateRegion in = cogmac::inner_region(params, 101);
      CHECK(cogmac::contains(o1, o2, 1e-9).contained);
      CHECK(cogmac::contains(o2, in, 1e-9).contained);
      CHECK(cogmac::contains(o1, in, 1e-9).contained);
    }
  }
}

TEST_CASE("fully correlated switches make the two outer bounds coincide") {
  // rho = 1: a transmitter is heard only when everyone is on, so per-event
  // and constant power control describe the same single event.
  for (const double mu : {0.1, 0.5}) {
    CAPTURE(mu);
    const ModelParams params = make_params(mu, 1.0);
    const RateRegion o1 = cogmac::outer1_region(params, 201);
    const RateRegion o2 = cogmac::outer2_region(params, 201);
    CHECK(cogmac::hausdorff(o1, o2) <= 1e-6);
  }
}

TEST_CASE("equal budgets solve in closed form with equalized powers") {
  // mu = 0.5, rho = 0, P1 = P2 = 1: pa = pb = pc = 1/8.  Interior solution
  // equalizes 1 + power across heard events at level 2/(3/8) = 16/3, with
  // the jointly-heard event splitting that level between the two users.
  const EventProbs e = events_at(0.5, 0.0);
  const PowerAllocation a = cogmac::optimal_allocation(e, 1.0, 1.0);
  CHECK(!a.boundary_fallback);
  CHECK(std::fabs(a.p1a - 16.0 / 3.0) <= 1e-12);
  CHECK(std::fabs(a.p2b - 16.0 / 3.0) <= 1e-12);
  CHECK(std::fabs((a.p1c + a.p2c) - 16.0 / 3.0) <= 1e-12);
  // Budgets saturate.
  CHECK(std::fabs(e.pa * a.p1a + e.pc * a.p1c - 1.0) <= 1e-12);
  CHECK(std::fabs(e.pb * a.p2b + e.pc * a.p2c - 1.0) <= 1e-12);
  // Achieved sum rate equals the pooled closed form.
  const double achieved = cogmac::allocation_sum_rate(e, a);
  CHECK(std::fabs(achieved - cogmac::max_sum_rate(e, 1.0, 1.0)) <= 1e-12);
  CHECK(std::fabs(achieved - 0.998611879771) <= 1e-9);
}

TEST_CASE("hand-checkable interior allocation at round numbers") {
  // pa = pb = pc = 0.25, P1 = P2 = 2: pooled power level
  // (P1+P2)/(pa+pb+pc) = 16/3; the jointly-heard split
  // p1c = ((pb+pc)P1 - pa P2)/((pa+pb+pc) pc) = (1 - 0.5)/0.1875 = 8/3,
  // and p2c = 16/3 - 8/3 = 8/3 by symmetry.
  EventProbs e{};
  e.pa = e.pb = e.pc = 0.25;
  e.pd = e.pe = 0.5;
  e.pf = 0.25;
  const PowerAllocation a = cogmac::optimal_allocation(e, 2.0, 2.0);
  CHECK(!a.boundary_fallback);
  CHECK(std::fabs(a.p1a - 16.0 / 3.0) <= 1e-12);
  CHECK(std::fabs(a.p2b - 16.0 / 3.0) <= 1e-12);
  CHECK(std::fabs(a.p1c - 8.0 / 3.0) <= 1e-12);
  CHECK(std::fabs(a.p2c - 8.0 / 3.0) <= 1e-12);
  const double achieved = cogmac::allocation_sum_rate(e, a);
  CHECK(std::fabs(achieved - cogmac::max_sum_rate(e, 2.0, 2.0)) <= 1e-12);
}

TEST_CASE("jointly-heard clamp engages for lopsided budgets") {
  EventProbs e{};
  e.pa = e.pb = e.pc = 0.25;
  e.pd = e.pe = 0.5;
  e.pf = 0.25;
  const PowerAllocation a = cogmac::optimal_allocation(e, 3.0, 1.0);
  const cogmac::OracleResult oracle = cogmac::oracle_max_sum_rate(e, 3.0, 1.0);
  const double achieved = cogmac::allocation_sum_rate(e, a);
  CHECK(achieved >= oracle.sum_rate_bits - 1e-6);
  CHECK(achieved <= oracle.sum_rate_bits + 1e-6);
  // Budgets still saturate after any clamping.
  CHECK(std::fabs(e.pa * a.p1a + e.pc * a.p1c - 3.0) <= 1e-10);
  CHECK(std::fabs(e.pb * a.p2b + e.pc * a.p2c - 1.0) <= 1e-10);
  CHECK(a.p1c >= -1e-15);
  CHECK(a.p2c >= -1e-15);
}

TEST_CASE("boundary fallback on a frozen custom event profile") {
  // pa dominates and P1 is tiny: the interior p1c goes negative, the first
  // cascade also fails, and the solver lands on the KKT-verified fallback
  // p1a = P1/pa, p2b = p2c = P2/(pb+pc).
  EventProbs e{};
  e.pa = 0.4;
  e.pb = 0.05;
  e.pc = 0.05;
  e.pd = 0.45;
  e.pe = 0.1;
  e.pf = 0.1;
  const PowerAllocation a = cogmac::optimal_allocation(e, 0.1, 1.0);
  CHECK(a.boundary_fallback);
  CHECK(std::fabs(a.p1a - 0.25) <= 1e-12);
  CHECK(std::fabs(a.p1c) <= 1e-15);
  CHECK(std::fabs(a.p2b - 10.0) <= 1e-12);
  CHECK(std::fabs(a.p2c - 10.0) <= 1e-12);
  const double achieved = cogmac::allocation_sum_rate(e, a);
  CHECK(std::fabs(achieved - 0.474714399819) <= 1e-9);
  const cogmac::OracleResult oracle =
      cogmac::oracle_max_sum_rate(e, 0.1, 1.0);
  CHECK(std::fabs(achieved - oracle.sum_rate_bits) <= 1e-6);
}

TEST_CASE("closed form agrees with the oracle across a parameter grid") {
  for (const double mu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (const double rho : {0.0, 0.5, 0.9}) {
      CAPTURE(mu);
      CAPTURE(rho);
      const EventProbs e = events_at(mu, rho);
      for (const auto& [bp1, bp2] :
           std::vector<std::pair<double, double>>{
               {1.0, 1.0}, {0.01, 10.0}, {10.0, 0.01}, {2.5, 0.3}}) {
        CAPTURE(bp1);
        CAPTURE(bp2);
        const PowerAllocation a = cogmac::optimal_allocation(e, bp1, bp2);
        const double achieved = cogmac::allocation_sum_rate(e, a);
        const cogmac::OracleResult oracle =
            cogmac::oracle_max_sum_rate(e, bp1, bp2);
        CHECK(std::fabs(achieved - oracle.sum_rate_bits) <= 1e-6);
        CHECK(achieved >= oracle.sum_rate_bits - 1e-9);
      }
    }
  }
}

TEST_CASE("no-reception event profile") {
  EventProbs e{};  // pa = pb = pc = 0
  e.pd = e.pe = 0.5;
  e.pf = 0.25;
  CHECK_THROWS_AS(cogmac::optimal_allocation(e, 1.0, 1.0),
                  std::domain_error);
  CHECK(cogmac::max_sum_rate(e, 1.0, 1.0) == 0.0);
}

TEST_CASE("state-knowledge gaps saturate at the entropy for long dwells") {
  const cogmac::JointStateDist joint = cogmac::build_joint(0.5, 0.0, cogmac::TableMode::consistent);

  SUBCASE("dwell of one symbol caps each gap at 1/N bits times the event") {
    // Independent switches, each on w.p. 1/2: the solo-heard event has
    // probability 1/8 and H(T1|R) = 1 bit, which ties the 1/N = 1 cap, so
    // d_r1 = d_r2 = 1/8.
    const cogmac::GapSpec g = cogmac::genie_gaps(joint, 1);
    CHECK(std::fabs(g.d_r1 - 0.125) <= 1e-12);
    CHECK(std::fabs(g.d_r2 - 0.125) <= 1e-12);
  }

  SUBCASE("gaps shrink like 1/N once below the entropy") {
    const cogmac::GapSpec g10 = cogmac::genie_gaps(joint, 10);
    const cogmac::GapSpec g20 = cogmac::genie_gaps(joint, 20);
    CHECK(std::fabs(g10.d_r1 - 2.0 * g20.d_r1) <= 1e-12);
    CHECK(std::fabs(g10.d_sum - 2.0 * g20.d_sum) <= 1e-12);
  }

  SUBCASE("gaps vanish as the dwell grows without bound") {
    const cogmac::GapSpec g = cogmac::genie_gaps(joint, 1000000);
    CHECK(g.d_r1 <= 2e-7);
    CHECK(g.d_r2 <= 2e-7);
    CHECK(g.d_sum <= 4e-7);
  }
}

TEST_CASE("inner bound approaches outer-2 for long dwells") {
  const ModelParams params = make_params(0.3, 0.2, 1.0, 1.0, 1000000);
  const RateRegion o2 = cogmac::outer2_region(params, 201);
  const RateRegion in = cogmac::inner_region(params, 201);
  CHECK(cogmac::hausdorff(o2, in) <= 3e-6);
}

TEST_CASE("inner bound subtracts the gaps from the outer-2 pentagon") {
  // At dwell 4, every gap is event_prob * entropy-or-cap; check the support
  // values shift by exactly the right amounts (before any re-clipping).
  const ModelParams params = make_params(0.5, 0.0, 1.0, 1.0, 4);
  const cogmac::JointStateDist joint =
      cogmac::build_joint(params.mu, params.rho, params.table_mode);
  const cogmac::GapSpec g = cogmac::genie_gaps(joint, 4);
  const RateRegion o2 = cogmac::outer2_region(params, 201);
  const RateRegion in = cogmac::inner_region(params, 201);
  CHECK(std::fabs((cogmac::support(o2, 1.0, 0.0) - g.d_r1) -
                  cogmac::support(in, 1.0, 0.0)) <= 1e-12);
  CHECK(std::fabs((cogmac::support(o2, 0.0, 1.0) - g.d_r2) -
                  cogmac::support(in, 0.0, 1.0)) <= 1e-12);
  CHECK(std::fabs((cogmac::support(o2, 1.0, 1.0) - g.d_sum) -
                  cogmac::support(in, 1.0, 1.0)) <= 1e-12);
}

TEST_CASE("pooled sum-rate formula is monotone in the activity parameters") {
  // Non-increasing in mu (more off-time hurts), non-decreasing in rho at
  // fixed mu (alignment concentrates the heard mass).
  double prev = cogmac::max_sum_rate(make_params(0.05, 0.3));
  for (double mu = 0.1; mu <= 0.951; mu += 0.05) {
    const double cur = cogmac::max_sum_rate(make_params(mu, 0.3));
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
  prev = cogmac::max_sum_rate(make_params(0.4, 0.0));
  for (double rho = 0.05; rho <= 0.951; rho += 0.05) {
    const double cur = cogmac::max_sum_rate(make_params(0.4, rho));
    CHECK(cur >= prev - 1e-12);
    prev = cur;
  }
}
