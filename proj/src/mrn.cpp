#include "srgrobust/mrn.hpp"

#include <algorithm>
#include <cmath>

namespace srg::mrn {

using dw::Interval;
using dw::ShellSlicer;
using geometry::ArcSet;
using geometry::SymMode;

Region Shape::region() const {
  switch (kind) {
    case Disc: return Region::disc(0.0, gamma);
    case Cone: return Region::cone(alpha, beta);
    case Sector: return Region::sector(gamma, alpha, beta);
  }
  return Region::empty();
}

namespace {

cplx det_of(const MatC& a) { return a.rows() == 1 ? a(0, 0) : a.partialPivLu().determinant(); }

cplx det_ipgd(const MatC& g, const MatC& d) {
  const int n = static_cast<int>(g.rows());
  return det_of(MatC::Identity(n, n) + g * d);
}

void check_square(const MatC& g) {
  if (g.rows() != g.cols() || g.rows() < 1) throw InputError("G must be a nonempty square matrix");
}

// Radii covering [a, b] uniformly and logarithmically, plus the critical radii of x.
std::vector<double> scan_radii(const Region& x, double a, double b, int n) {
  std::vector<double> r;
  if (b == kInf) {
    double m = std::max(1.0, a);
    for (double c : x.critical_radii()) m = std::max(m, c);
    b = std::max(1e3 * m, 1e6 * std::max(a, 1e-300));
  }
  const double la = a > 0.0 ? a : 1e-9 * b;
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : double(i) / (n - 1);
    r.push_back(a + (b - a) * t);
    r.push_back(la * std::pow(b / la, t));
  }
  for (double c : x.critical_radii())
    if (c >= a && c <= b) r.push_back(c);
  r.push_back(b);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  r.erase(std::remove_if(r.begin(), r.end(), [](double v) { return !(v > 0.0); }), r.end());
  return r;
}

struct CircleCompare {
  bool valid = false;   // both sets met the circle
  double margin = kInf;  // rho times the angular gap, negative on overlap
  double delta = 0.0;    // deviation inside the overlap (when margin <= 0)
};

CircleCompare compare_circle(const ShellSlicer& sn, const Region& xp, double theta, double rho, double rho_x) {
  CircleCompare out;
  const auto inv = dw::inv_srg_deviation(sn, rho);
  if (!inv) return out;
  const ArcSet arcs = xp.circle(rho_x);
  if (arcs.is_empty()) return out;
  out.valid = true;
  double best_ov = -kInf, best_mid = 0.0, gap = kInf;
  for (const auto& [lo, hi] : arcs.deviations(theta)) {
    const double a = std::max(lo, inv->first), b = std::min(hi, inv->second);
    if (b >= a) {
      if (b - a > best_ov) best_ov = b - a, best_mid = 0.5 * (a + b);
    } else {
      gap = std::min(gap, a - b);
    }
  }
  if (best_ov >= 0.0) {
    out.margin = -rho * best_ov;
    out.delta = best_mid;
  } else {
    out.margin = rho * gap;
  }
  return out;
}

// Radial overlap of the inverse shell [r_lo, r_hi] with the region extent, allowing a
// relative slack so that touching ranges are still compared circle by circle.
struct RadialOverlap {
  double r_lo, r_hi, x_lo, x_hi, a, b;
  bool disjoint() const { return a > b + 1e-9 * std::max(1.0, a); }
  double gap() const { return r_lo > x_hi ? r_lo - x_hi : x_lo - r_hi; }
  double inv(double r) const { return std::clamp(r, r_lo, r_hi); }
  double reg(double r) const { return std::clamp(r, x_lo, x_hi); }
};

RadialOverlap radial_overlap(const MatC& g, const geometry::RadialExtent& ext) {
  const VecR sv = dw::singular_values(g);
  RadialOverlap o;
  o.r_lo = 1.0 / sv.maxCoeff();
  o.r_hi = sv.minCoeff() > 0.0 ? 1.0 / sv.minCoeff() : kInf;
  o.x_lo = ext.lo;
  o.x_hi = ext.hi;
  o.a = std::max(o.r_lo, ext.lo);
  o.b = std::min(o.r_hi, ext.hi);
  if (o.a > o.b && !o.disjoint()) o.a = o.b = std::min(o.a, o.b);
  return o;
}

struct ThetaScan {
  bool zero = false;
  bool empty = false;
  double margin = kInf;
  double rho = 0.0, delta = 0.0;  // most overlapping circle
};

ThetaScan theta_scan(const MatC& g, const Region& xp, double theta) {
  ThetaScan out;
  if (g.norm() == 0.0) {
    out.zero = true;
    return out;
  }
  const auto ext = xp.radial_extent();
  if (ext.lo > ext.hi) {
    out.empty = true;
    return out;
  }
  const RadialOverlap ov = radial_overlap(g, ext);
  if (ov.disjoint()) {
    out.margin = ov.gap();
    out.rho = ov.r_lo > ov.x_hi ? ov.r_lo : ov.r_hi;
    return out;
  }
  const ShellSlicer sn(-g, -theta);
  auto cmp = [&](double r) { return compare_circle(sn, xp, theta, ov.inv(r), ov.reg(r)); };
  const auto radii = scan_radii(xp, ov.a, ov.b, 256);
  std::vector<std::pair<double, double>> vals;
  for (double r : radii) {
    const CircleCompare c = cmp(r);
    if (!c.valid) continue;
    vals.emplace_back(c.margin, r);
    if (c.margin < out.margin) {
      out.margin = c.margin;
      out.rho = r;
      out.delta = c.delta;
    }
  }
  // Local refinement between neighbouring radii around the smallest margins.
  std::sort(vals.begin(), vals.end());
  for (size_t k = 0; k < std::min<size_t>(4, vals.size()); ++k) {
    const double r0 = vals[k].second;
    auto it = std::lower_bound(radii.begin(), radii.end(), r0);
    double lo = it == radii.begin() ? r0 : *(it - 1);
    double hi = (it + 1) == radii.end() ? r0 : *(it + 1);
    for (int i = 0; i < 40 && hi - lo > 1e-12 * hi; ++i) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      const CircleCompare c1 = cmp(m1);
      const CircleCompare c2 = cmp(m2);
      for (const auto& [c, r] : {std::pair{c1, m1}, std::pair{c2, m2}}) {
        if (c.valid && c.margin < out.margin) {
          out.margin = c.margin;
          out.rho = r;
          out.delta = c.delta;
        }
      }
      const double f1 = c1.valid ? c1.margin : kInf, f2 = c2.valid ? c2.margin : kInf;
      if (f1 < f2) hi = m2;
      else lo = m1;
    }
  }
  out.rho = ov.inv(out.rho);
  return out;
}

bool verify_witness(const MatC& g, const MatC& d, const Region& x, double theta) {
  if (std::abs(det_ipgd(g, d)) >= det_threshold(g, d)) return false;
  return theta_member(d, x, theta);
}

std::optional<MatC> witness_from_scan(const MatC& g, const Region& xp, double theta, const ThetaScan& sc) {
  if (!(sc.margin <= 0.0) || sc.rho <= 0.0) return std::nullopt;
  const int n = static_cast<int>(g.rows());
  if (n == 1) {
    if (g(0, 0) == 0.0) return std::nullopt;
    MatC d(1, 1);
    d(0, 0) = -1.0 / g(0, 0);
    return d;
  }
  const ShellSlicer sn(-g, -theta);
  const double nu = 1.0 / (sc.rho * sc.rho);
  const auto y = sn.find_vector(nu, std::cos(sc.delta) * std::sqrt(nu));
  if (!y) return std::nullopt;
  (void)xp;
  return align_witness(g, theta, *y);
}

MrnVerdict finish_theta(const MatC& g, const Region& x, double theta, const ThetaScan& sc, std::string method) {
  MrnVerdict v;
  v.method = std::move(method);
  if (sc.zero) {
    v.holds = true;
    v.margin = kInf;
    v.note = "G = 0: I + G Delta = I for every Delta";
    return v;
  }
  if (sc.empty) {
    v.holds = true;
    v.margin = kInf;
    v.note = "empty uncertainty set";
    return v;
  }
  v.margin = sc.margin;
  v.rho = sc.rho;
  v.boundary = std::abs(sc.margin) <= kBoundaryBand;
  v.holds = sc.margin > 0.0;
  if (sc.margin <= 0.0) {
    const Region xp = geometry::symmetrize(x, theta, SymMode::Part);
    auto w = witness_from_scan(g, xp, theta, sc);
    if (w && verify_witness(g, *w, x, theta)) {
      v.witness = *w;
      v.holds = false;
    } else if (v.boundary) {
      v.note = "boundary-indeterminate: touching sets, no verified witness";
    }
  } else if (v.boundary) {
    v.note = "boundary-indeterminate";
  }
  return v;
}

}  // namespace

double det_threshold(const MatC& g, const MatC& delta) {
  return 1e-8 * std::max(1.0, dw::sigma_max(g) * dw::sigma_max(delta));
}

MatC witness_block_pair(cplx s, double theta, int m, int n) {
  if (m < 1 || m > n - 1) throw InputError("block_pair requires 1 <= m <= n - 1");
  MatC d = MatC::Zero(n, n);
  const cplx st = geometry::theta_conjugate(s, theta);
  for (int i = 0; i < n; ++i) d(i, i) = i < m ? s : st;
  return d;
}

MatC witness_scalar(cplx z, int n, double theta) {
  if (z == 0.0) throw InputError("scalar witness requires z != 0");
  if (n < 1) throw InputError("scalar witness requires n >= 1");
  return -(1.0 / geometry::theta_conjugate(z, theta)) * MatC::Identity(n, n);
}

MatC witness_svd_disc(const MatC& g, double gamma) {
  check_square(g);
  Eigen::JacobiSVD<MatC> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smax = svd.singularValues()(0);
  if (!(gamma > 0.0) || smax * gamma < 1.0 - 1e-12) throw InputError("svd_disc requires sigma_max(G) >= 1/gamma");
  // Every top singular pair is cancelled, so repeated singular values give a full-rank witness.
  int k = 1;
  while (k < svd.singularValues().size() && svd.singularValues()(k) >= smax * (1.0 - 1e-12)) ++k;
  return -(1.0 / smax) * svd.matrixV().leftCols(k) * svd.matrixU().leftCols(k).adjoint();
}

std::optional<MatC> align_witness(const MatC& g, double theta, const VecC& y_in) {
  const int n = static_cast<int>(g.rows());
  const VecC y = y_in / y_in.norm();
  const VecC w = -g * y;
  const double wn = w.norm();
  if (wn == 0.0) return std::nullopt;
  if (n == 1) {
    MatC d(1, 1);
    d(0, 0) = y(0) / w(0);
    return d;
  }
  const dw::DwPoint p = dw::f_inv(dw::dw_point(-g, y));
  const auto [s, st] = dw::project_theta(p, theta);
  const cplx rot = std::conj(expi(theta));
  const double ims = std::imag(rot * s);
  double lam = 0.5;
  if (std::abs(ims) > 1e-300) lam = std::clamp(0.5 * (1.0 + std::imag(rot * p.z) / ims), 0.0, 1.0);
  const MatC d0 = witness_block_pair(s, theta, 1, n);
  VecC q = VecC::Zero(n);
  q(0) = std::sqrt(lam);
  q(1) = std::sqrt(1.0 - lam);

  const VecC wh = w / wn, yp = y / wn;
  const VecC dq = d0 * q;
  auto complete = [n](std::vector<VecC> b) {
    for (int k = 0; k < n && static_cast<int>(b.size()) < n; ++k) {
      VecC e = VecC::Unit(n, k);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& v : b) e -= v * v.dot(e);
      if (e.norm() > 1e-8) b.push_back(e / e.norm());
    }
    MatC m(n, n);
    for (int k = 0; k < n; ++k) m.col(k) = b[k];
    return m;
  };
  std::vector<VecC> src = {wh}, dst = {q};
  VecC s2 = yp - wh * wh.dot(yp);
  VecC t2 = dq - q * q.dot(dq);
  if (s2.norm() > 1e-12 * yp.norm() && t2.norm() > 1e-12 * dq.norm()) {
    src.push_back(s2 / s2.norm());
    dst.push_back(t2 / t2.norm());
  }
  const MatC sb = complete(src), tb = complete(dst);
  const MatC u = tb * sb.adjoint();
  return MatC(u.adjoint() * d0 * u);
}

std::optional<MatC> theta_witness(const MatC& g, const Region& x, double theta) {
  check_square(g);
  const Region xp = geometry::symmetrize(x, theta, SymMode::Part);
  const ThetaScan sc = theta_scan(g, xp, theta);
  if (sc.zero || sc.empty) return std::nullopt;
  auto w = witness_from_scan(g, xp, theta, sc);
  if (w && verify_witness(g, *w, x, theta)) return w;
  return std::nullopt;
}

bool theta_member(const MatC& delta, const Region& x, double theta, double tol) {
  const Region xp = geometry::symmetrize(x, theta, SymMode::Part);
  const VecR sv = dw::singular_values(delta);
  const double smin = sv.minCoeff(), smax = sv.maxCoeff();
  if (smax <= tol) return xp.contains(0.0) || !xp.circle(tol).is_empty();
  const ShellSlicer s(delta, theta);
  std::vector<double> radii;
  const int n = smax - smin > tol ? 64 : 1;
  for (int i = 0; i < n; ++i) radii.push_back(n == 1 ? smax : smin + (smax - smin) * i / (n - 1));
  for (double c : xp.critical_radii())
    if (c > smin && c < smax) radii.push_back(c);
  if (smin <= tol && !(xp.contains(0.0) || !xp.circle(tol).is_empty())) return false;
  for (double r : radii) {
    if (r <= tol) continue;
    const auto dev = dw::srg_deviation(s, r);
    if (!dev) continue;
    ArcSet arcs = xp.circle(r);
    if (r > tol) arcs = arcs.unite(xp.circle(r - tol));
    arcs = arcs.unite(xp.circle(r + tol));
    const double at = tol / r;
    const auto devs = geometry::merge_intervals(arcs.deviations(theta), 2.0 * at);
    bool inside = false;
    for (const auto& [lo, hi] : devs) {
      if (dev->first >= lo - at && dev->second <= hi + at) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

bool general_member(const MatC& delta, const Region& x, double tol, int n_theta) {
  for (int i = 0; i < n_theta; ++i) {
    if (theta_member(delta, x, -kPi + 2.0 * kPi * i / n_theta, tol)) return true;
  }
  // Axes through the eigenvalues catch scalar-like members on a measure-zero axis set.
  Eigen::ComplexEigenSolver<MatC> es(delta);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const cplx l = es.eigenvalues()(i);
    if (std::abs(l) > 0.0 && theta_member(delta, x, std::arg(l), tol)) return true;
  }
  return false;
}

// ---------------------------------------------------------------- checks

MrnVerdict mrn_check_named(const MatC& g, const Shape& shape) {
  check_square(g);
  MrnVerdict v;
  const int n = static_cast<int>(g.rows());
  const double smax = dw::sigma_max(g);
  if (shape.kind == Shape::Disc) {
    if (!(shape.gamma > 0.0)) throw InputError("disc requires gamma > 0");
    v.method = "disc small-gain";
    v.margin = 1.0 / shape.gamma - smax;
    v.holds = v.margin > 0.0;
    v.boundary = std::abs(v.margin) <= kBoundaryBand;
    if (!v.holds) v.witness = witness_svd_disc(g, shape.gamma);
    return v;
  }
  if (!(shape.alpha <= shape.beta)) throw InputError("shape requires alpha <= beta");
  const double m = 0.5 * (shape.alpha + shape.beta);
  const double h = kPi - 0.5 * (shape.beta - shape.alpha);
  if (smax == 0.0) {
    v.method = shape.kind == Shape::Cone ? "cone angle" : "sector gain-angle";
    v.holds = true;
    v.margin = kInf;
    v.note = "G = 0";
    return v;
  }
  if (shape.kind == Shape::Cone) {
    v.method = "cone angle";
    const auto a = dw::theta_angle_bounds(g, -m, 1e-9);
    v.margin = h - a.value;
    v.boundary = std::abs(v.margin) <= kBoundaryBand || (a.lower < h && a.upper >= h);
  } else {
    if (!(shape.gamma > 0.0)) throw InputError("sector requires gamma > 0");
    v.method = "sector gain-angle";
    if (smax < 1.0 / shape.gamma) {
      v.margin = 1.0 / shape.gamma - smax;
    } else {
      const ShellSlicer s(g, -m);
      const auto a = dw::deviation_bounds(s, 1.0 / shape.gamma, smax, 1e-9);
      v.margin = h - a.value;
      v.boundary = a.lower < h && a.upper >= h;
    }
    v.boundary = v.boundary || std::abs(v.margin) <= kBoundaryBand;
  }
  v.holds = v.margin > 0.0;
  if (!v.holds) {
    const Region x = shape.region();
    auto w = theta_witness(g, x, m);
    if (!w && n >= 1) {
      // Fall back to the extreme scalar element when the θ-scan touches only at the boundary.
      const ThetaScan sc = theta_scan(g, x, m);
      if (auto ww = witness_from_scan(g, x, m, sc)) w = ww;
    }
    if (w) v.witness = *w;
  }
  return v;
}

MrnVerdict mrn_check_theta(const MatC& g, const Region& x, double theta) {
  check_square(g);
  const Region xp = geometry::symmetrize(x, theta, SymMode::Part);
  return finish_theta(g, x, theta, theta_scan(g, xp, theta), "theta-SRG separation");
}

MrnVerdict mrn_check_general(const MatC& g, const Region& x, double theta) {
  check_square(g);
  const bool sym = geometry::is_theta_symmetric(x, theta);
  const bool conn = geometry::is_theta_circularly_connected(x, theta);
  const Region hull = geometry::circular_hull(x, theta);
  MrnVerdict v = finish_theta(g, hull, theta, theta_scan(g, hull, theta), "theta-circular-hull separation");
  v.exact = sym && conn && g.rows() >= 2;
  if (!v.exact) {
    v.note = std::string(sym ? "" : "region not theta-symmetric; ") +
             (conn ? "" : "region not theta-circularly connected; ") + "sufficient condition only";
    if (v.witness && !general_member(*v.witness, x)) v.witness.reset();
  }
  return v;
}

MrnVerdict mrn_check_dw_union(const MatC& g, const Region& x, int n_layers) {
  check_square(g);
  MrnVerdict v;
  v.method = "dw-union separation";
  const int n = static_cast<int>(g.rows());
  if (g.norm() == 0.0) {
    v.holds = true;
    v.margin = kInf;
    return v;
  }
  if (n == 1) {
    if (g(0, 0) == 0.0) {
      v.holds = true;
      v.margin = kInf;
      return v;
    }
    const cplx z = -1.0 / g(0, 0);
    v.margin = -x.depth(z);
    v.holds = !x.contains(z);
    v.boundary = std::abs(v.margin) <= kBoundaryBand;
    if (!v.holds) v.witness = MatC::Constant(1, 1, z);
    return v;
  }
  const auto ext = x.radial_extent();
  if (ext.lo > ext.hi) {
    v.holds = true;
    v.margin = kInf;
    return v;
  }
  const RadialOverlap ov = radial_overlap(g, ext);
  if (ov.disjoint()) {
    v.holds = true;
    v.margin = ov.gap();
    return v;
  }
  const MatC mneg = -g;
  const int n_dir = 72;
  v.margin = kInf;
  for (double gam : scan_radii(x, ov.a, ov.b, n_layers / 2)) {
    const dw::DwLayer layer = dw::dw_union_layer(x, dw::UnionMode::General, 0.0, n, ov.reg(gam));
    if (layer.empty()) continue;
    const double nu = 1.0 / (ov.inv(gam) * ov.inv(gam));
    // Support of the inverse slice {conj(z)/nu : z in slice_nu(-G)} in direction d.
    auto h_inv = [&](double phi) {
      const ShellSlicer s(mneg, -phi);
      const auto xr = s.x_range(nu);
      return xr ? xr->second / nu : -kInf;
    };
    auto phi_total = [&](double phi) { return h_inv(phi) + layer.support(-expi(phi)); };
    double best = kInf, best_phi = 0.0;
    for (int k = 0; k < n_dir; ++k) {
      const double phi = -kPi + 2.0 * kPi * k / n_dir;
      const double f = phi_total(phi);
      if (f < best) best = f, best_phi = phi;
    }
    double lo = best_phi - 2.0 * kPi / n_dir, hi = best_phi + 2.0 * kPi / n_dir;
    for (int i = 0; i < 50; ++i) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      const double f1 = phi_total(m1), f2 = phi_total(m2);
      best = std::min({best, f1, f2});
      if (f1 < f2) hi = m2;
      else lo = m1;
    }
    v.margin = std::min(v.margin, -best);
  }
  // No witness is produced here, so touching sets are not declared separated.
  v.holds = v.margin > kBoundaryBand;
  v.boundary = std::abs(v.margin) <= kBoundaryBand;
  return v;
}

// ---------------------------------------------------------------- brute force

namespace {

MatC hermitian_basis_element(int n, int k) {
  MatC e = MatC::Zero(n, n);
  if (k < n) {
    e(k, k) = 1.0;
    return e;
  }
  k -= n;
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, idx += 2) {
      if (k == idx) {
        e(i, j) = e(j, i) = 1.0 / std::sqrt(2.0);
        return e;
      }
      if (k == idx + 1) {
        e(i, j) = cplx(0, 1.0 / std::sqrt(2.0));
        e(j, i) = cplx(0, -1.0 / std::sqrt(2.0));
        return e;
      }
    }
  return e;
}

MatC expi_herm(const MatC& h) {
  Eigen::SelfAdjointEigenSolver<MatC> es(h);
  VecC d(h.rows());
  for (int i = 0; i < h.rows(); ++i) d(i) = expi(es.eigenvalues()(i));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<double> general_thetas(const Region& x) {
  std::vector<double> t;
  for (int i = 0; i < 64; ++i) t.push_back(-kPi + 2.0 * kPi * i / 64);
  const auto e = x.radial_extent();
  if (e.lo <= e.hi) {
    std::vector<double> radii = x.critical_radii();
    const double hi = e.hi < kInf ? e.hi : std::max(1.0, 4.0 * (radii.empty() ? 1.0 : radii.back()));
    for (int i = 1; i <= 8; ++i) radii.push_back(e.lo + (hi - e.lo) * i / 8.0);
    for (double r : radii) {
      if (!(r > 0.0)) continue;
      const ArcSet arcs = x.circle(r);
      for (const auto& [a, b] : arcs.intervals()) {
        t.push_back(a);
        t.push_back(b);
        t.push_back(0.5 * (a + b));
      }
    }
  }
  for (cplx p : x.node().points) t.push_back(std::arg(p));
  return t;
}

struct Sampler {
  Region xp;
  std::vector<double> radii;
  double theta;
};

std::optional<cplx> sample_point(const Sampler& s, Rng& rng) {
  if (s.radii.empty()) return std::nullopt;
  std::uniform_int_distribution<size_t> pick(0, s.radii.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int tries = 0; tries < 20; ++tries) {
    const double r = s.radii[pick(rng)];
    const ArcSet arcs = s.xp.circle(r);
    if (arcs.is_empty()) continue;
    const auto& iv = arcs.intervals();
    const auto& [a, b] = iv[std::uniform_int_distribution<size_t>(0, iv.size() - 1)(rng)];
    const double c = u(rng);
    double phi = a + (b - a) * u(rng);
    if (c < 0.15) phi = a;
    else if (c < 0.3) phi = b;
    return std::polar(r, phi);
  }
  return std::nullopt;
}

}  // namespace

std::optional<MatC> singular_unitary(const MatC& g, const MatC& delta, const MatC& u0, int iters) {
  const int n = static_cast<int>(g.rows());
  const int np = n * n;
  std::vector<MatC> basis;
  for (int k = 0; k < np; ++k) basis.push_back(hermitian_basis_element(n, k));
  const double thr = det_threshold(g, delta);
  auto f = [&](const MatC& u) { return det_ipgd(g, u.adjoint() * delta * u); };
  MatC u = u0;
  cplx fu = f(u);
  for (int it = 0; it < iters; ++it) {
    if (std::abs(fu) < thr) return u;
    Eigen::MatrixXd j(2, np);
    const double h = 1e-7;
    for (int k = 0; k < np; ++k) {
      const cplx fk = f(u * expi_herm(h * basis[k]));
      j(0, k) = (fk - fu).real() / h;
      j(1, k) = (fk - fu).imag() / h;
    }
    const Eigen::Vector2d r(fu.real(), fu.imag());
    const Eigen::Matrix2d jj = j * j.transpose();
    if (std::abs(jj.determinant()) < 1e-300) break;
    Eigen::VectorXd step = -j.transpose() * jj.ldlt().solve(r);
    if (step.norm() > 0.5) step *= 0.5 / step.norm();
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls) {
      MatC hm = MatC::Zero(n, n);
      for (int k = 0; k < np; ++k) hm += step(k) * basis[k];
      const MatC un = u * expi_herm(hm);
      const cplx fn = f(un);
      if (std::abs(fn) < std::abs(fu)) {
        u = un;
        fu = fn;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  if (std::abs(fu) < thr) return u;
  return std::nullopt;
}

MrnVerdict mrn_bruteforce(const MatC& g, const UncertaintySpec& spec, int n_samples, int n_unitaries, Rng& rng) {
  check_square(g);
  const int n = static_cast<int>(g.rows());
  MrnVerdict v;
  v.method = "bruteforce";
  v.holds = true;
  v.min_det = kInf;
  const std::vector<double> thetas =
      spec.mode == Mode::ThetaFixed ? std::vector<double>{spec.theta} : general_thetas(spec.region);
  const int per_theta = std::max(1, n_samples / static_cast<int>(thetas.size()));
  const double smax_g = dw::sigma_max(g);

  std::vector<MatC> unitaries = {MatC::Identity(n, n)};
  for (int i = 0; i < n_unitaries; ++i) unitaries.push_back(dw::haar_unitary(n, rng));

  Eigen::ComplexEigenSolver<MatC> eg(g);
  auto record = [&](const MatC& d, cplx det, double theta) {
    const double a = std::abs(det);
    v.min_det = std::min(v.min_det, a);
    if (a < det_threshold(g, d) && theta_member(d, spec.region, theta)) {
      v.holds = false;
      v.witness = d;
      return true;
    }
    return false;
  };

  for (double th : thetas) {
    Sampler smp{geometry::symmetrize(spec.region, th, SymMode::Part), {}, th};
    const auto e = smp.xp.radial_extent();
    if (e.lo > e.hi) continue;
    // (i) scalar multiples: exact roots z = -1/lambda_i(G).
    for (int i = 0; i < n; ++i) {
      const cplx l = eg.eigenvalues()(i);
      if (std::abs(l) == 0.0) continue;
      const cplx z = -1.0 / l;
      if (smp.xp.contains(z) && record(z * MatC::Identity(n, n), det_ipgd(g, z * MatC::Identity(n, n)), th))
        return v;
    }
    double hi = e.hi;
    std::vector<double> crit = smp.xp.critical_radii();
    if (hi == kInf) {
      hi = 1e3;
      for (double c : crit) hi = std::max(hi, 4.0 * c);
      const double smin_g = dw::sigma_min(g);
      if (smin_g > 0.0) hi = std::max(hi, 4.0 / smin_g);
    }
    const double lo = e.lo > 0.0 ? e.lo : std::min(1e-3, 1e-3 * hi);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 64; ++i) smp.radii.push_back(lo * std::pow(hi / lo, u01(rng)));
    for (int i = 0; i < 64; ++i) smp.radii.push_back(lo + (hi - lo) * u01(rng));
    for (double c : crit)
      if (c >= lo && c <= hi) smp.radii.push_back(c);
    if (smax_g > 0.0) {
      for (double sv : dw::singular_values(g))
        if (sv > 0.0 && 1.0 / sv >= lo && 1.0 / sv <= hi) smp.radii.push_back(1.0 / sv);
    }
    smp.radii.push_back(lo);
    if (e.hi < kInf) smp.radii.push_back(e.hi);

    if (n == 1) {
      for (int k = 0; k < per_theta; ++k) {
        auto s = sample_point(smp, rng);
        if (!s) break;
        const MatC d = MatC::Constant(1, 1, *s);
        if (record(d, det_ipgd(g, d), th)) return v;
      }
      continue;
    }

    struct Cand {
      double det;
      cplx s;
      int m;
      int u;
    };
    std::vector<Cand> cands;
    for (int k = 0; k < per_theta; ++k) {
      auto s0 = sample_point(smp, rng);
      if (!s0) break;
      const int m = 1 + k % (n - 1);
      const int ui = k % static_cast<int>(unitaries.size());
      const MatC& u = unitaries[ui];
      auto fdet = [&](cplx s) { return det_ipgd(g, u.adjoint() * witness_block_pair(s, th, m, n) * u); };
      cplx fs = fdet(*s0);
      const MatC d0 = u.adjoint() * witness_block_pair(*s0, th, m, n) * u;
      if (record(d0, fs, th)) return v;
      cands.push_back({std::abs(fs), *s0, m, ui});
      // (ii) Newton on s for a fixed conjugation, on a subset of the starts.
      if (k % 8 != 0) continue;
      cplx s = *s0;
      for (int it = 0; it < 25; ++it) {
        const double hstep = 1e-7 * std::max(1.0, std::abs(s));
        const cplx fr = fdet(s + hstep), fi = fdet(s + cplx(0, hstep));
        Eigen::Matrix2d j;
        j << (fr - fs).real() / hstep, (fi - fs).real() / hstep, (fr - fs).imag() / hstep, (fi - fs).imag() / hstep;
        if (std::abs(j.determinant()) < 1e-300) break;
        const Eigen::Vector2d ds = -j.partialPivLu().solve(Eigen::Vector2d(fs.real(), fs.imag()));
        s += cplx(ds(0), ds(1));
        fs = fdet(s);
        if (!std::isfinite(std::abs(fs))) break;
        if (std::abs(fs) < 1e-10) break;
      }
      if (std::isfinite(std::abs(s)) && smp.xp.contains(s)) {
        const MatC d = u.adjoint() * witness_block_pair(s, th, m, n) * u;
        if (record(d, det_ipgd(g, d), th)) return v;
      }
    }
    // (iii) unitary search for the most promising samples.
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.det < b.det; });
    const size_t top = std::min<size_t>(cands.size(), 24);
    std::vector<size_t> picks;
    for (size_t i = 0; i < top; ++i) picks.push_back(i);
    std::uniform_int_distribution<size_t> any(0, cands.empty() ? 0 : cands.size() - 1);
    for (int i = 0; i < 24 && !cands.empty(); ++i) picks.push_back(any(rng));
    for (size_t i : picks) {
      const Cand& c = cands[i];
      const MatC d0 = witness_block_pair(c.s, th, c.m, n);
      for (int start = 0; start < 2; ++start) {
        const MatC u0 = start == 0 ? unitaries[c.u] : dw::haar_unitary(n, rng);
        if (auto u = singular_unitary(g, d0, u0, 40)) {
          const MatC d = u->adjoint() * d0 * *u;
          if (record(d, det_ipgd(g, d), th)) return v;
        }
      }
    }
  }
  v.margin = v.min_det;
  return v;
}

}  // namespace srg::mrn
