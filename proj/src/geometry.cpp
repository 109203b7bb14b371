#include "srgrobust/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace srg::geometry {

namespace {

constexpr double kSeamEps = 1e-14;

double angdist(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace

cplx theta_conjugate(cplx z, double theta) {
  const cplx r = expi(theta);
  return r * std::conj(std::conj(r) * z);
}

std::vector<ArcSet::Interval> merge_intervals(std::vector<ArcSet::Interval> v, double gap) {
  std::sort(v.begin(), v.end());
  std::vector<ArcSet::Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.first <= out.back().second + gap) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

std::vector<ArcSet::Interval> intersect_intervals(const std::vector<ArcSet::Interval>& a,
                                                  const std::vector<ArcSet::Interval>& b) {
  std::vector<ArcSet::Interval> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      const double lo = std::max(x.first, y.first);
      const double hi = std::min(x.second, y.second);
      if (lo <= hi) out.emplace_back(lo, hi);
    }
  }
  return merge_intervals(std::move(out));
}

// ---------------------------------------------------------------- ArcSet

ArcSet ArcSet::full() {
  ArcSet s;
  s.iv_ = {{-kPi, kPi}};
  return s;
}

ArcSet ArcSet::arc(double a, double b) {
  ArcSet s;
  if (b < a) return s;
  s.iv_ = {{a, b}};
  s.normalize();
  return s;
}

ArcSet ArcSet::from_intervals(std::vector<Interval> iv) {
  ArcSet s;
  s.iv_ = std::move(iv);
  s.normalize();
  return s;
}

void ArcSet::normalize() {
  std::vector<Interval> raw;
  for (auto [a, b] : iv_) {
    if (b < a) continue;
    if (b - a >= 2.0 * kPi - kSeamEps) {
      iv_ = {{-kPi, kPi}};
      return;
    }
    const double a0 = wrap_angle(a);
    const double b0 = a0 + (b - a);
    if (b0 <= kPi) {
      raw.emplace_back(a0, b0);
    } else {
      raw.emplace_back(a0, kPi);
      raw.emplace_back(-kPi, b0 - 2.0 * kPi);
    }
  }
  iv_ = merge_intervals(std::move(raw));
  if (iv_.size() == 1 && iv_[0].first <= -kPi + kSeamEps && iv_[0].second >= kPi - kSeamEps) {
    iv_ = {{-kPi, kPi}};
  }
}

bool ArcSet::is_full() const {
  return iv_.size() == 1 && iv_[0].first <= -kPi + kSeamEps && iv_[0].second >= kPi - kSeamEps;
}

bool ArcSet::contains(double phi, double tol) const {
  const double p = wrap_angle(phi);
  for (const auto& [a, b] : iv_) {
    for (double q : {p, p + 2.0 * kPi, p - 2.0 * kPi}) {
      if (q >= a - tol && q <= b + tol) return true;
    }
  }
  return false;
}

double ArcSet::distance(double phi) const {
  if (iv_.empty()) return kPi;
  if (contains(phi)) return 0.0;
  double d = kPi;
  for (const auto& [a, b] : iv_) d = std::min({d, angdist(phi, a), angdist(phi, b)});
  return d;
}

ArcSet ArcSet::unite(const ArcSet& o) const {
  ArcSet s;
  s.iv_ = iv_;
  s.iv_.insert(s.iv_.end(), o.iv_.begin(), o.iv_.end());
  s.normalize();
  return s;
}

ArcSet ArcSet::intersect(const ArcSet& o) const {
  ArcSet s;
  s.iv_ = intersect_intervals(iv_, o.iv_);
  s.normalize();
  return s;
}

ArcSet ArcSet::complement() const {
  if (iv_.empty()) return full();
  if (is_full()) return {};
  std::vector<Interval> out;
  double cur = -kPi;
  for (const auto& [a, b] : iv_) {
    if (a > cur) out.emplace_back(cur, a);
    cur = std::max(cur, b);
  }
  if (cur < kPi) out.emplace_back(cur, kPi);
  ArcSet s;
  s.iv_ = std::move(out);
  s.normalize();
  return s;
}

ArcSet ArcSet::mirror(double theta) const {
  std::vector<Interval> out;
  for (const auto& [a, b] : iv_) out.emplace_back(2.0 * theta - b, 2.0 * theta - a);
  return from_intervals(std::move(out));
}

ArcSet ArcSet::rotate(double d) const {
  if (is_full()) return full();
  std::vector<Interval> out;
  for (const auto& [a, b] : iv_) out.emplace_back(a + d, b + d);
  return from_intervals(std::move(out));
}

ArcSet ArcSet::dilate(double eps) const {
  if (is_full() || iv_.empty()) return *this;
  std::vector<Interval> out;
  for (const auto& [a, b] : iv_) out.emplace_back(a - eps, b + eps);
  return from_intervals(std::move(out));
}

std::vector<ArcSet::Interval> ArcSet::side(double theta, int sign) const {
  if (is_full()) return {{0.0, kPi}};
  const ArcSet r = rotate(-theta);
  std::vector<Interval> out;
  for (const auto& [a, b] : r.iv_) {
    if (sign > 0) {
      if (b >= 0.0) out.emplace_back(std::max(a, 0.0), b);
      if (a <= -kPi + kSeamEps) out.emplace_back(kPi, kPi);
    } else {
      if (a <= 0.0) out.emplace_back(-b > 0.0 ? -b : 0.0, -a);
      if (b >= kPi - kSeamEps) out.emplace_back(kPi, kPi);
    }
  }
  for (auto& iv : out) {
    if (iv.first > iv.second) std::swap(iv.first, iv.second);
  }
  return merge_intervals(std::move(out), kSeamEps);
}

std::vector<ArcSet::Interval> ArcSet::deviations(double theta) const {
  auto up = side(theta, +1);
  auto lo = side(theta, -1);
  up.insert(up.end(), lo.begin(), lo.end());
  return merge_intervals(std::move(up), kSeamEps);
}

double ArcSet::measure() const {
  double m = 0.0;
  for (const auto& [a, b] : iv_) m += b - a;
  return m;
}

bool side_connected(const std::vector<ArcSet::Interval>& side, double tol) {
  return merge_intervals(side, tol).size() <= 1;
}

// ---------------------------------------------------------------- Region

namespace {

std::shared_ptr<RegionNode> make(RegionKind k) {
  auto n = std::make_shared<RegionNode>();
  n->kind = k;
  return n;
}

double wedge_ray_distance(double rho, double d) { return d <= kPi / 2 ? rho * std::sin(d) : rho; }

double cone_depth(cplx z, double a, double b) {
  if (b - a >= 2.0 * kPi) return kInf;
  const double rho = std::abs(z);
  if (rho == 0.0) return 0.0;
  const double phi = std::arg(z);
  const double da = angdist(phi, a), db = angdist(phi, b);
  const double dist = std::min(wedge_ray_distance(rho, da), wedge_ray_distance(rho, db));
  return ArcSet::arc(a, b).contains(phi) ? dist : -dist;
}

ArcSet disc_arcs(cplx c, double r, double rho) {
  const double m = std::abs(c);
  if (m == 0.0) return rho <= r ? ArcSet::full() : ArcSet::empty();
  const double k = (rho * rho + m * m - r * r) / (2.0 * rho * m);
  if (k > 1.0 + 1e-14) return ArcSet::empty();
  if (k <= -1.0) return ArcSet::full();
  const double w = std::acos(std::min(k, 1.0));
  const double a = std::arg(c);
  return ArcSet::arc(a - w, a + w);
}

ArcSet generic_arcs(const RegionNode& n, double rho);

bool origin_interior(const Region& r) {
  const RegionNode& n = r.node();
  switch (n.kind) {
    case RegionKind::Whole: return true;
    case RegionKind::Disc: return std::abs(n.center) < n.radius;
    case RegionKind::Cone: return n.beta - n.alpha >= 2.0 * kPi;
    case RegionKind::Sector: return n.beta - n.alpha >= 2.0 * kPi && n.gamma > 0;
    case RegionKind::AnnulusSector:
      return n.gamma == 0.0 && n.gamma_hi > 0.0 &&
             (n.arcs.empty() || ArcSet::from_intervals(n.arcs).is_full());
    case RegionKind::Union:
      return std::any_of(n.children.begin(), n.children.end(), origin_interior);
    case RegionKind::Intersection:
      return std::all_of(n.children.begin(), n.children.end(), origin_interior);
    case RegionKind::Complement: return !n.children[0].contains_origin();
    case RegionKind::Mirror:
    case RegionKind::StarHull:
    case RegionKind::CircularHull: return origin_interior(n.children[0]);
    default: return false;
  }
}

ArcSet star_arcs(const RegionNode& n, double rho) {
  const Region& x = n.children[0];
  const RegionNode& c = x.node();
  if (c.kind == RegionKind::Disc) {
    const double m = std::abs(c.center);
    if (m <= c.radius) return x.circle(rho);
    if (rho > m + c.radius) return ArcSet::empty();
    const double rt = std::sqrt(m * m - c.radius * c.radius);
    if (rho <= rt) {
      const double w = std::asin(c.radius / m);
      const double a = std::arg(c.center);
      return ArcSet::arc(a - w, a + w);
    }
    return x.circle(rho);
  }
  if (c.kind == RegionKind::AnnulusSector) {
    if (rho > c.gamma_hi) return ArcSet::empty();
    return c.arcs.empty() ? ArcSet::full() : ArcSet::from_intervals(c.arcs);
  }
  if (c.kind == RegionKind::PointSet) {
    std::vector<ArcSet::Interval> iv;
    for (cplx p : c.points) {
      if (std::abs(p) + c.tol >= rho) {
        const double w = c.tol / rho;
        iv.emplace_back(std::arg(p) - w, std::arg(p) + w);
      }
    }
    return ArcSet::from_intervals(std::move(iv));
  }
  // Scan outward radii: the star hull on circle rho is the union of the arcs on every
  // circle of radius >= rho.
  const RadialExtent e = x.radial_extent();
  if (rho > e.hi) return ArcSet::empty();
  std::vector<double> crit = x.critical_radii();
  double cap = e.hi;
  if (cap == kInf) {
    double m = rho;
    for (double r : crit) m = std::max(m, r);
    cap = 4.0 * m + 1.0;
  }
  std::vector<double> radii = radial_grid(x, std::max(rho, e.lo), cap, n.n_gamma);
  radii.push_back(rho);
  ArcSet acc;
  for (double r : radii) {
    if (r < rho || r <= 0.0) continue;
    acc = acc.unite(x.circle(r));
    if (acc.is_full()) break;
  }
  return acc;
}

ArcSet hull_arcs(const RegionNode& n, double rho) {
  const ArcSet base = n.children[0].circle(rho);
  if (base.is_empty()) return base;
  const auto dev = base.deviations(n.theta);
  const double lo = dev.front().first, hi = dev.back().second;
  return ArcSet::arc(n.theta + lo, n.theta + hi).unite(ArcSet::arc(n.theta - hi, n.theta - lo));
}

ArcSet generic_arcs(const RegionNode& n, double rho) {
  switch (n.kind) {
    case RegionKind::Empty: return ArcSet::empty();
    case RegionKind::Whole: return ArcSet::full();
    case RegionKind::Disc: return disc_arcs(n.center, n.radius, rho);
    case RegionKind::Cone: return ArcSet::arc(n.alpha, n.beta);
    case RegionKind::Sector: return rho <= n.gamma ? ArcSet::arc(n.alpha, n.beta) : ArcSet::empty();
    case RegionKind::AnnulusSector:
      if (rho < n.gamma || rho > n.gamma_hi) return ArcSet::empty();
      return n.arcs.empty() ? ArcSet::full() : ArcSet::from_intervals(n.arcs);
    case RegionKind::HalfPlane: return ArcSet::arc(n.theta - kPi / 2, n.theta + kPi / 2);
    case RegionKind::PointSet: {
      std::vector<ArcSet::Interval> iv;
      for (cplx p : n.points) {
        if (std::abs(std::abs(p) - rho) <= n.tol) {
          const double w = n.tol / rho;
          iv.emplace_back(std::arg(p) - w, std::arg(p) + w);
        }
      }
      return ArcSet::from_intervals(std::move(iv));
    }
    case RegionKind::Union: {
      ArcSet acc;
      for (const auto& c : n.children) acc = acc.unite(c.circle(rho));
      return acc;
    }
    case RegionKind::Intersection: {
      ArcSet acc = ArcSet::full();
      for (const auto& c : n.children) acc = acc.intersect(c.circle(rho));
      return acc;
    }
    case RegionKind::Complement: return n.children[0].circle(rho).complement();
    case RegionKind::Mirror: return n.children[0].circle(rho).mirror(n.theta);
    case RegionKind::InverseNegate: return n.children[0].circle(1.0 / rho).mirror(kPi / 2);
    case RegionKind::StarHull: return star_arcs(n, rho);
    case RegionKind::CircularHull: return hull_arcs(n, rho);
  }
  return ArcSet::empty();
}

}  // namespace

Region::Region() : node_(make(RegionKind::Empty)) {}
Region::Region(std::shared_ptr<const RegionNode> n) : node_(std::move(n)) {}

Region Region::empty() { return Region(make(RegionKind::Empty)); }
Region Region::whole() { return Region(make(RegionKind::Whole)); }

Region Region::disc(cplx center, double radius) {
  if (!(radius >= 0.0)) throw InputError("disc radius must be nonnegative");
  auto n = make(RegionKind::Disc);
  n->center = center;
  n->radius = radius;
  return Region(n);
}

Region Region::cone(double alpha, double beta) {
  if (!(alpha <= beta)) throw InputError("cone requires alpha <= beta");
  auto n = make(RegionKind::Cone);
  n->alpha = alpha;
  n->beta = beta;
  return Region(n);
}

Region Region::sector(double gamma, double alpha, double beta) {
  if (!(alpha <= beta)) throw InputError("sector requires alpha <= beta");
  if (!(gamma > 0.0)) throw InputError("sector requires gamma > 0");
  auto n = make(RegionKind::Sector);
  n->gamma = gamma;
  n->alpha = alpha;
  n->beta = beta;
  return Region(n);
}

Region Region::annulus_sector(double gamma_lo, double gamma_hi, std::vector<ArcSet::Interval> arcs) {
  if (!(gamma_lo >= 0.0 && gamma_lo <= gamma_hi)) throw InputError("annulus requires 0 <= gamma_lo <= gamma_hi");
  auto n = make(RegionKind::AnnulusSector);
  n->gamma = gamma_lo;
  n->gamma_hi = gamma_hi;
  n->arcs = std::move(arcs);
  return Region(n);
}

Region Region::half_plane(double theta) {
  auto n = make(RegionKind::HalfPlane);
  n->theta = theta;
  return Region(n);
}

Region Region::point_set(std::vector<cplx> pts) {
  auto n = make(RegionKind::PointSet);
  n->points = std::move(pts);
  return Region(n);
}

Region Region::union_of(std::vector<Region> parts) {
  auto n = make(RegionKind::Union);
  n->children = std::move(parts);
  return Region(n);
}

Region Region::intersection_of(std::vector<Region> parts) {
  auto n = make(RegionKind::Intersection);
  n->children = std::move(parts);
  return Region(n);
}

Region Region::complement_of(const Region& r) {
  auto n = make(RegionKind::Complement);
  n->children = {r};
  return Region(n);
}

Region Region::mirror_of(const Region& r, double theta) {
  auto n = make(RegionKind::Mirror);
  n->theta = theta;
  n->children = {r};
  return Region(n);
}

Region Region::inverse_negate_of(const Region& r) {
  auto n = make(RegionKind::InverseNegate);
  n->children = {r};
  return Region(n);
}

Region Region::star_hull_of(const Region& r, int n_gamma) {
  switch (r.kind()) {
    case RegionKind::Empty:
    case RegionKind::Whole:
    case RegionKind::Cone:
    case RegionKind::Sector:
    case RegionKind::HalfPlane: return r;
    case RegionKind::Disc:
      if (std::abs(r.node().center) <= r.node().radius) return r;
      break;
    case RegionKind::Union: {
      std::vector<Region> parts;
      for (const auto& c : r.node().children) parts.push_back(star_hull_of(c, n_gamma));
      return union_of(std::move(parts)).with_tol(r.tol());
    }
    case RegionKind::Mirror:
      return mirror_of(star_hull_of(r.node().children[0], n_gamma), r.node().theta).with_tol(r.tol());
    default: break;
  }
  auto n = make(RegionKind::StarHull);
  n->children = {r};
  n->n_gamma = n_gamma;
  n->tol = r.tol();
  return Region(n);
}

Region Region::circular_hull_of(const Region& r, double theta, int n_gamma) {
  auto n = make(RegionKind::CircularHull);
  n->children = {r};
  n->theta = theta;
  n->n_gamma = n_gamma;
  n->tol = r.tol();
  return Region(n);
}

RegionKind Region::kind() const { return node_->kind; }
double Region::tol() const { return node_->tol; }

Region Region::with_tol(double tol) const {
  auto n = std::make_shared<RegionNode>(*node_);
  n->tol = tol;
  return Region(n);
}

ArcSet Region::circle(double rho) const {
  if (!(rho > 0.0)) return contains_origin() ? ArcSet::full() : ArcSet::empty();
  return generic_arcs(*node_, rho);
}

bool Region::contains_origin() const {
  const RegionNode& n = *node_;
  switch (n.kind) {
    case RegionKind::Empty: return false;
    case RegionKind::Whole:
    case RegionKind::Cone:
    case RegionKind::Sector:
    case RegionKind::HalfPlane: return true;
    case RegionKind::Disc: return std::abs(n.center) <= n.radius + n.tol;
    case RegionKind::AnnulusSector: return n.gamma <= n.tol;
    case RegionKind::PointSet:
      return std::any_of(n.points.begin(), n.points.end(), [&](cplx p) { return std::abs(p) <= n.tol; });
    case RegionKind::Union:
      return std::any_of(n.children.begin(), n.children.end(), [](const Region& c) { return c.contains_origin(); });
    case RegionKind::Intersection:
      return std::all_of(n.children.begin(), n.children.end(), [](const Region& c) { return c.contains_origin(); });
    case RegionKind::Complement: return !origin_interior(n.children[0]);
    case RegionKind::Mirror:
    case RegionKind::CircularHull: return n.children[0].contains_origin();
    case RegionKind::InverseNegate: return !n.children[0].bounded();
    case RegionKind::StarHull: {
      const RadialExtent e = n.children[0].radial_extent();
      return e.lo <= e.hi;
    }
  }
  return false;
}

bool Region::contains(cplx z) const {
  const double t = node_->tol;
  const double rho = std::abs(z);
  if (rho <= t) {
    if (contains_origin()) return true;
    return t > 0.0 && !circle(t).is_empty();
  }
  const double phi = std::arg(z);
  for (double r : {rho, rho - t, rho + t}) {
    if (r <= 0.0) continue;
    if (circle(r).contains(phi, t / r)) return true;
  }
  return false;
}

double Region::depth(cplx z) const {
  const RegionNode& n = *node_;
  switch (n.kind) {
    case RegionKind::Empty: return -kInf;
    case RegionKind::Whole: return kInf;
    case RegionKind::Disc: return n.radius - std::abs(z - n.center);
    case RegionKind::Cone: return cone_depth(z, n.alpha, n.beta);
    case RegionKind::Sector: return std::min(n.gamma - std::abs(z), cone_depth(z, n.alpha, n.beta));
    case RegionKind::HalfPlane: return std::real(std::conj(expi(n.theta)) * z);
    case RegionKind::PointSet: {
      double d = kInf;
      for (cplx p : n.points) d = std::min(d, std::abs(z - p));
      return -d;
    }
    case RegionKind::Union: {
      double d = -kInf;
      for (const auto& c : n.children) d = std::max(d, c.depth(z));
      return d;
    }
    case RegionKind::Intersection: {
      double d = kInf;
      for (const auto& c : n.children) d = std::min(d, c.depth(z));
      return d;
    }
    case RegionKind::Complement: return -n.children[0].depth(z);
    case RegionKind::Mirror: return n.children[0].depth(theta_conjugate(z, n.theta));
    default: break;
  }
  const double rho = std::abs(z);
  if (rho == 0.0) return contains_origin() ? 0.0 : -kInf;
  const ArcSet a = circle(rho);
  const double phi = std::arg(z);
  if (a.contains(phi)) {
    const double d = a.complement().distance(phi);
    return rho * std::min(d, kPi / 2);
  }
  return -rho * std::min(a.distance(phi), kPi / 2);
}

RadialExtent Region::radial_extent() const {
  const RegionNode& n = *node_;
  switch (n.kind) {
    case RegionKind::Empty: return {kInf, 0.0};
    case RegionKind::Whole:
    case RegionKind::Cone:
    case RegionKind::HalfPlane:
    case RegionKind::Complement: return {0.0, kInf};
    case RegionKind::Disc: {
      const double m = std::abs(n.center);
      return {std::max(0.0, m - n.radius), m + n.radius};
    }
    case RegionKind::Sector: return {0.0, n.gamma};
    case RegionKind::AnnulusSector: return {n.gamma, n.gamma_hi};
    case RegionKind::PointSet: {
      if (n.points.empty()) return {kInf, 0.0};
      RadialExtent e{kInf, 0.0};
      for (cplx p : n.points) {
        e.lo = std::min(e.lo, std::abs(p));
        e.hi = std::max(e.hi, std::abs(p));
      }
      return e;
    }
    case RegionKind::Union: {
      RadialExtent e{kInf, 0.0};
      for (const auto& c : n.children) {
        const RadialExtent ce = c.radial_extent();
        if (ce.lo > ce.hi) continue;
        e.lo = std::min(e.lo, ce.lo);
        e.hi = std::max(e.hi, ce.hi);
      }
      return e;
    }
    case RegionKind::Intersection: {
      RadialExtent e{0.0, kInf};
      for (const auto& c : n.children) {
        const RadialExtent ce = c.radial_extent();
        e.lo = std::max(e.lo, ce.lo);
        e.hi = std::min(e.hi, ce.hi);
      }
      return e;
    }
    case RegionKind::Mirror:
    case RegionKind::CircularHull: return n.children[0].radial_extent();
    case RegionKind::InverseNegate: {
      const RadialExtent c = n.children[0].radial_extent();
      if (c.lo > c.hi) return c;
      return {c.hi > 0.0 ? 1.0 / c.hi : kInf, c.lo > 0.0 ? 1.0 / c.lo : kInf};
    }
    case RegionKind::StarHull: {
      const RadialExtent c = n.children[0].radial_extent();
      if (c.lo > c.hi) return c;
      return {0.0, c.hi};
    }
  }
  return {0.0, kInf};
}

std::vector<double> Region::critical_radii() const {
  const RegionNode& n = *node_;
  std::vector<double> out;
  switch (n.kind) {
    case RegionKind::Disc: {
      const double m = std::abs(n.center);
      if (m > n.radius) {
        out.push_back(m - n.radius);
        out.push_back(std::sqrt(m * m - n.radius * n.radius));
      }
      out.push_back(m + n.radius);
      break;
    }
    case RegionKind::Sector: out.push_back(n.gamma); break;
    case RegionKind::AnnulusSector:
      out.push_back(n.gamma);
      out.push_back(n.gamma_hi);
      break;
    case RegionKind::PointSet:
      for (cplx p : n.points) out.push_back(std::abs(p));
      break;
    case RegionKind::InverseNegate:
      for (double r : n.children[0].critical_radii()) {
        if (r > 0.0) out.push_back(1.0 / r);
      }
      break;
    default:
      for (const auto& c : n.children) {
        auto cr = c.critical_radii();
        out.insert(out.end(), cr.begin(), cr.end());
      }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](double r) { return !(r > 0.0) || !std::isfinite(r); }),
            out.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------- operations

std::vector<double> radial_grid(const Region& x, double lo, double hi, int n) {
  std::vector<double> out;
  if (!(lo <= hi)) return out;
  const auto crit = x.critical_radii();
  if (hi == kInf) {
    double m = lo;
    for (double r : crit) m = std::max(m, r);
    hi = 4.0 * m + 1.0;
  }
  n = std::max(n, 2);
  const double l0 = lo > 0.0 ? lo : std::min(1e-9, hi) ;
  for (int i = 0; i < n; ++i) out.push_back(l0 + (hi - l0) * i / (n - 1));
  for (double r : crit) {
    if (r >= lo && r <= hi) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// One arc (possibly seam split) expressed as cones, or a union of cones when the arc
// set is fragmented.
Region arcs_to_cones(const ArcSet& a, double gamma) {
  auto piece = [&](double lo, double hi) {
    return gamma == kInf ? Region::cone(lo, hi) : Region::sector(gamma, lo, hi);
  };
  auto iv = a.intervals();
  if (iv.empty()) return Region::point_set({cplx(0.0, 0.0)});
  if (a.is_full()) return piece(-kPi, kPi);
  if (iv.size() >= 2 && iv.front().first <= -kPi + 1e-14 && iv.back().second >= kPi - 1e-14) {
    const double lo = iv.back().first;
    const double hi = iv.front().second + 2.0 * kPi;
    iv.erase(iv.begin());
    iv.back() = {lo, hi};
  }
  if (iv.size() == 1) return piece(iv[0].first, iv[0].second);
  std::vector<Region> parts;
  for (const auto& [l, h] : iv) parts.push_back(piece(l, h));
  return Region::union_of(std::move(parts));
}

}  // namespace

Region symmetrize(const Region& x, double theta, SymMode mode) {
  const RegionNode& n = x.node();
  if (n.kind == RegionKind::Disc && std::abs(n.center) == 0.0) return x;
  if (n.kind == RegionKind::Whole || n.kind == RegionKind::Empty) return x;
  if (n.kind == RegionKind::Cone || n.kind == RegionKind::Sector) {
    const ArcSet a = ArcSet::arc(n.alpha, n.beta);
    const ArcSet m = a.mirror(theta);
    const ArcSet s = mode == SymMode::Part ? a.intersect(m) : a.unite(m);
    return arcs_to_cones(s, n.kind == RegionKind::Cone ? kInf : n.gamma).with_tol(n.tol);
  }
  const Region mir = Region::mirror_of(x, theta);
  Region r = mode == SymMode::Part ? Region::intersection_of({x, mir}) : Region::union_of({x, mir});
  return r.with_tol(n.tol);
}

CircleAngles circle_angles(const Region& x, double theta, double gamma) {
  if (!(gamma > 0.0)) throw InputError("circle_angles requires gamma > 0");
  const ArcSet a = x.circle(gamma);
  if (a.is_empty()) throw InputError("region does not meet the circle of radius " + std::to_string(gamma));
  const auto dev = a.deviations(theta);
  return {gamma, dev.front().first, dev.back().second};
}

Region circular_hull(const Region& x, double theta, int n_gamma) {
  const RegionNode& n = x.node();
  if ((n.kind == RegionKind::Disc && std::abs(n.center) == 0.0) || n.kind == RegionKind::Whole ||
      n.kind == RegionKind::Empty) {
    return x;
  }
  return Region::circular_hull_of(x, theta, n_gamma);
}

namespace {

std::vector<double> check_radii(const Region& x, int n_gamma) {
  const RadialExtent e = x.radial_extent();
  if (e.lo > e.hi) return {};
  auto g = radial_grid(x, e.lo, e.hi, n_gamma);
  g.erase(std::remove_if(g.begin(), g.end(), [](double r) { return r <= 0.0; }), g.end());
  return g;
}

}  // namespace

bool is_theta_symmetric(const Region& x, double theta, int n_gamma) {
  const double tol = std::max(x.tol(), 1e-12);
  for (double r : check_radii(x, n_gamma)) {
    const ArcSet a = x.circle(r);
    const auto up = merge_intervals(a.side(theta, +1), tol / r);
    const auto dn = merge_intervals(a.side(theta, -1), tol / r);
    if (up.size() != dn.size()) return false;
    for (size_t i = 0; i < up.size(); ++i) {
      if (std::abs(up[i].first - dn[i].first) > tol / r + 1e-12 ||
          std::abs(up[i].second - dn[i].second) > tol / r + 1e-12) {
        return false;
      }
    }
  }
  return true;
}

bool is_theta_circularly_connected(const Region& x, double theta, int n_gamma) {
  const double tol = std::max(x.tol(), 1e-12);
  for (double r : check_radii(x, n_gamma)) {
    const ArcSet a = x.circle(r);
    if (a.is_empty() || a.is_full()) continue;
    if (!side_connected(a.side(theta, +1), tol / r) || !side_connected(a.side(theta, -1), tol / r)) {
      return false;
    }
  }
  return true;
}

Region starhull(const Region& x, int n_gamma) { return Region::star_hull_of(x, n_gamma); }

Region forbidden_region(const Region& x, int n_gamma) {
  return Region::inverse_negate_of(Region::star_hull_of(x, n_gamma)).with_tol(x.tol());
}

}  // namespace srg::geometry
