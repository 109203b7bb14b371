#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "srgrobust/types.hpp"

namespace srg::geometry {

cplx theta_conjugate(cplx z, double theta);

// Closed subset of a circle, kept as sorted disjoint angle intervals inside [-pi, pi].
// Arcs that cross the seam at pi are split in two.
class ArcSet {
 public:
  using Interval = std::pair<double, double>;

  ArcSet() = default;
  static ArcSet empty() { return {}; }
  static ArcSet full();
  // Arc from a to b counter-clockwise; b - a >= 2 pi gives the full circle.
  static ArcSet arc(double a, double b);
  static ArcSet from_intervals(std::vector<Interval> iv);

  bool is_empty() const { return iv_.empty(); }
  bool is_full() const;
  const std::vector<Interval>& intervals() const { return iv_; }

  bool contains(double phi, double tol = 0.0) const;
  // Angular distance from phi to the set (0 inside, pi for an empty set).
  double distance(double phi) const;

  ArcSet unite(const ArcSet& o) const;
  ArcSet intersect(const ArcSet& o) const;
  ArcSet complement() const;
  // phi -> 2 theta - phi
  ArcSet mirror(double theta) const;
  ArcSet rotate(double d) const;
  // Widen every arc by eps on both ends.
  ArcSet dilate(double eps) const;

  // {|phi - theta|} with phi wrapped to [theta - pi, theta + pi), as merged intervals in [0, pi].
  std::vector<Interval> deviations(double theta) const;
  // Intervals of deviations delta in [0, pi] with theta + delta in the set (side=+1)
  // or theta - delta in the set (side=-1).
  std::vector<Interval> side(double theta, int sign) const;

  double measure() const;

 private:
  std::vector<Interval> iv_;
  void normalize();
};

// A contiguous arc count on each side of the theta-axis.
bool side_connected(const std::vector<ArcSet::Interval>& side, double tol);

// Merge and sort a list of [lo, hi] intervals.
std::vector<ArcSet::Interval> merge_intervals(std::vector<ArcSet::Interval> v, double gap = 0.0);
std::vector<ArcSet::Interval> intersect_intervals(const std::vector<ArcSet::Interval>& a,
                                                  const std::vector<ArcSet::Interval>& b);

enum class RegionKind {
  Empty,
  Whole,
  Disc,
  Cone,
  Sector,
  AnnulusSector,
  HalfPlane,
  PointSet,
  Union,
  Intersection,
  Complement,
  Mirror,
  InverseNegate,
  StarHull,
  CircularHull,
};

struct RadialExtent {
  double lo = 0.0;
  double hi = kInf;
};

struct RegionNode;

// Closed region of the complex plane as a CSG tree over parametric primitives. The
// tree is evaluated circle by circle: circle(rho) returns the exact arc set of the
// region on |z| = rho, which drives membership, angles and hull constructions.
class Region {
 public:
  Region();

  static Region empty();
  static Region whole();
  static Region disc(cplx center, double radius);
  static Region cone(double alpha, double beta);
  static Region sector(double gamma, double alpha, double beta);
  static Region annulus_sector(double gamma_lo, double gamma_hi, std::vector<ArcSet::Interval> arcs);
  static Region half_plane(double theta);
  static Region point_set(std::vector<cplx> pts);
  static Region union_of(std::vector<Region> parts);
  static Region intersection_of(std::vector<Region> parts);
  static Region complement_of(const Region& r);
  static Region mirror_of(const Region& r, double theta);
  static Region inverse_negate_of(const Region& r);
  static Region star_hull_of(const Region& r, int n_gamma = 256);
  static Region circular_hull_of(const Region& r, double theta, int n_gamma = 256);

  RegionKind kind() const;
  double tol() const;
  Region with_tol(double tol) const;

  // Exact arcs of the region on the circle |z| = rho (rho > 0).
  ArcSet circle(double rho) const;
  bool contains_origin() const;
  bool contains(cplx z) const;
  // Signed membership depth: >= 0 inside, approximately minus the distance outside.
  double depth(cplx z) const;
  RadialExtent radial_extent() const;
  // Radii where the arc structure changes; used to seed radial grids.
  std::vector<double> critical_radii() const;
  bool bounded() const { return radial_extent().hi < kInf; }

  const RegionNode& node() const { return *node_; }

 private:
  explicit Region(std::shared_ptr<const RegionNode> n);
  std::shared_ptr<const RegionNode> node_;
  friend struct RegionNode;
};

struct RegionNode {
  RegionKind kind = RegionKind::Empty;
  double tol = kDefaultTol;
  cplx center{0.0, 0.0};
  double radius = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0, gamma_hi = 0.0, theta = 0.0;
  int n_gamma = 256;
  std::vector<ArcSet::Interval> arcs;
  std::vector<cplx> points;
  std::vector<Region> children;
};

struct CircleAngles {
  double gamma = 0.0;
  double psi_min = 0.0;
  double psi_max = 0.0;
};

enum class SymMode { Part, Cover };

Region symmetrize(const Region& x, double theta, SymMode mode);
CircleAngles circle_angles(const Region& x, double theta, double gamma);
Region circular_hull(const Region& x, double theta, int n_gamma = 256);
bool is_theta_symmetric(const Region& x, double theta, int n_gamma = 256);
bool is_theta_circularly_connected(const Region& x, double theta, int n_gamma = 256);
Region starhull(const Region& x, int n_gamma = 256);
Region forbidden_region(const Region& x, int n_gamma = 256);

// Radii grid covering [lo, hi] with n points plus the critical radii of x inside the range.
std::vector<double> radial_grid(const Region& x, double lo, double hi, int n);

}  // namespace srg::geometry
