#include "cogmac/region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cogmac {

namespace {

constexpr double kCollinearTol = 1e-12;

double cross(const RatePair& o, const RatePair& a, const RatePair& b) {
  return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

double dist(const RatePair& a, const RatePair& b) {
  return std::hypot(a.r1 - b.r1, a.r2 - b.r2);
}

double point_segment_dist(const RatePair& p, const RatePair& a,
                          const RatePair& b) {
  const double dx = b.r1 - a.r1, dy = b.r2 - a.r2;
  const double len2 = dx * dx + dy * dy;
  if (len2 <= 0.0) return dist(p, a);
  double t = ((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.r1 - (a.r1 + t * dx), p.r2 - (a.r2 + t * dy));
}

double point_polyline_dist(const RatePair& p,
                           const std::vector<RatePair>& poly) {
  if (poly.size() == 1) return dist(p, poly[0]);
  double best = HUGE_VAL;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i)
    best = std::min(best, point_segment_dist(p, poly[i], poly[i + 1]));
  return best;
}

// Directed distance from samples of `a` (vertices and edge midpoints) to the
// polyline `b`.
double directed_hausdorff(const std::vector<RatePair>& a,
                          const std::vector<RatePair>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, point_polyline_dist(a[i], b));
    if (i + 1 < a.size()) {
      const RatePair mid{(a[i].r1 + a[i + 1].r1) / 2,
                         (a[i].r2 + a[i + 1].r2) / 2};
      worst = std::max(worst, point_polyline_dist(mid, b));
    }
  }
  return worst;
}

// Upper-right convex frontier of a point cloud, from (0, r2_max) down to
// (r1_max, 0).  Expects the extreme points to be present in the cloud.
std::vector<RatePair> frontier_hull(std::vector<RatePair> pts) {
  std::sort(pts.begin(), pts.end(), [](const RatePair& a, const RatePair& b) {
    if (a.r1 != b.r1) return a.r1 < b.r1;
    return a.r2 > b.r2;
  });
  std::vector<RatePair> hull;
  for (const RatePair& p : pts) {
    if (!hull.empty() && p.r1 == hull.back().r1 && p.r2 == hull.back().r2)
      continue;
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 2], hull.back(), p) >= -kCollinearTol)
      hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

}  // namespace

void PentagonConstraints::validate() const {
  if (!(std::isfinite(c1) && std::isfinite(c2) && std::isfinite(c12)))
    throw std::domain_error("pentagon constraint is not finite");
  if (c1 < 0 || c2 < 0 || c12 < 0)
    throw std::domain_error("pentagon constraint is negative");
  if (c12 > c1 + c2 + 1e-12)
    throw std::domain_error("pentagon sum constraint exceeds c1 + c2");
  if (c12 < std::max(c1, c2) - 1e-12)
    throw std::domain_error("pentagon sum constraint is below max(c1, c2)");
}

double RateRegion::r1_max() const {
  double m = 0.0;
  for (const auto& v : vertices) m = std::max(m, v.r1);
  return m;
}

double RateRegion::r2_max() const {
  double m = 0.0;
  for (const auto& v : vertices) m = std::max(m, v.r2);
  return m;
}

const char* region_kind_name(RegionKind k) {
  switch (k) {
    case RegionKind::mac: return "mac";
    case RegionKind::outer1: return "outer1";
    case RegionKind::outer2: return "outer2";
    case RegionKind::inner: return "inner";
    case RegionKind::estimated: return "estimated";
  }
  return "?";
}

RateRegion pentagon(const PentagonConstraints& c, RegionKind label) {
  c.validate();
  const double k12 = std::clamp(c.c12, std::max(c.c1, c.c2), c.c1 + c.c2);
  const RatePair cand[4] = {{0.0, c.c2},
                            {k12 - c.c2, c.c2},
                            {c.c1, k12 - c.c1},
                            {c.c1, 0.0}};
  RateRegion r;
  r.label = label;
  for (const RatePair& p : cand) {
    if (!r.vertices.empty()) {
      const RatePair& q = r.vertices.back();
      if (std::abs(p.r1 - q.r1) <= kCollinearTol &&
          std::abs(p.r2 - q.r2) <= kCollinearTol)
        continue;
    }
    r.vertices.push_back(p);
  }
  return r;
}

RateRegion hull_union(std::span<const PentagonConstraints> pents,
                      RegionKind label) {
  if (pents.empty()) throw std::domain_error("hull_union of no pentagons");
  std::vector<RatePair> pts;
  pts.reserve(pents.size() * 4);
  for (const PentagonConstraints& c : pents) {
    const RateRegion p = pentagon(c);
    pts.insert(pts.end(), p.vertices.begin(), p.vertices.end());
  }
  RateRegion r;
  r.label = label;
  r.vertices = frontier_hull(std::move(pts));
  return r;
}

double support(const RateRegion& region, double w1, double w2) {
  if (!(w1 >= 0.0) || !(w2 >= 0.0) || (w1 == 0.0 && w2 == 0.0))
    throw std::domain_error(
        "support direction must be non-negative and nonzero");
  if (region.vertices.empty())
    throw std::domain_error("support of an empty region");
  double best = -HUGE_VAL;
  for (const auto& v : region.vertices)
    best = std::max(best, w1 * v.r1 + w2 * v.r2);
  return best;
}

ContainmentReport contains(const RateRegion& outer, const RateRegion& inner,
                           double tol) {
  if (outer.vertices.empty() || inner.vertices.empty())
    throw std::domain_error("containment check on an empty region");
  const double o1 = outer.r1_max(), o2 = outer.r2_max();
  ContainmentReport rep{true, 0.0, inner.vertices.front()};
  for (const RatePair& p : inner.vertices) {
    double v = std::max(p.r1 - o1, p.r2 - o2);
    for (std::size_t i = 0; i + 1 < outer.vertices.size(); ++i) {
      const RatePair& a = outer.vertices[i];
      const RatePair& b = outer.vertices[i + 1];
      const double len = dist(a, b);
      if (len <= 0.0) continue;
      v = std::max(v, cross(a, b, p) / len);
    }
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.witness = p;
    }
  }
  rep.max_violation = std::max(rep.max_violation, 0.0);
  rep.contained = rep.max_violation <= tol;
  return rep;
}

double hausdorff(const RateRegion& a, const RateRegion& b) {
  if (a.vertices.empty() || b.vertices.empty())
    throw std::domain_error("hausdorff of an empty region");
  return std::max(directed_hausdorff(a.vertices, b.vertices),
                  directed_hausdorff(b.vertices, a.vertices));
}

}  // namespace cogmac
