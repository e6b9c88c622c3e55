#pragma once
// Two-user rate region geometry.
//
// A region is stored as its Pareto frontier: a polyline from (0, r2_max) to
// (r1_max, 0) with r1 non-decreasing and r2 non-increasing, no repeated
// vertices, and near-collinear interior vertices removed.  The region itself
// is everything in the positive quadrant dominated by the frontier.

#include <span>
#include <vector>

namespace cogmac {

struct RatePair {
  double r1, r2;
};

// Pentagon {R1 <= c1, R2 <= c2, R1+R2 <= c12} with
// max(c1,c2) <= c12 <= c1+c2 (validated with 1e-12 slack).
struct PentagonConstraints {
  double c1, c2, c12;
  void validate() const;
};

enum class RegionKind { mac, outer1, outer2, inner, estimated };

struct RateRegion {
  std::vector<RatePair> vertices;
  RegionKind label = RegionKind::mac;

  double r1_max() const;
  double r2_max() const;
};

const char* region_kind_name(RegionKind k);

// Frontier of a single pentagon; degenerate corners collapse (a rectangle
// yields 3 vertices, a point yields 1).
RateRegion pentagon(const PentagonConstraints& c,
                    RegionKind label = RegionKind::mac);

// Frontier of the convex hull of a union of pentagons.
RateRegion hull_union(std::span<const PentagonConstraints> pents,
                      RegionKind label = RegionKind::mac);

// max over the region of w1*r1 + w2*r2; weights must be >= 0, not both 0.
double support(const RateRegion& region, double w1, double w2);

struct ContainmentReport {
  bool contained;
  double max_violation;  // Euclidean distance outside the outer region
  RatePair witness;      // inner vertex realizing max_violation
};

// Checks that every vertex of `inner` satisfies every supporting half-plane
// of `outer` to within tol (violations measured as Euclidean distances).
ContainmentReport contains(const RateRegion& outer, const RateRegion& inner,
                           double tol);

// Symmetric Hausdorff distance between two frontiers, evaluated from vertex
// and edge-midpoint samples against whole polylines.  Exact whenever the
// farther frontier lies outside the other region (the nested-bound cases).
double hausdorff(const RateRegion& a, const RateRegion& b);

}  // namespace cogmac
