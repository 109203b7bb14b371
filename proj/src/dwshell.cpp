#include "srgrobust/dwshell.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace srg::dw {

using geometry::ArcSet;
using geometry::Region;

namespace {

MatC herm(const MatC& a) { return (a + a.adjoint()) / 2.0; }

struct TopEig {
  double value;
  VecC vec;
};

TopEig top_eig(const MatC& a) {
  Eigen::SelfAdjointEigenSolver<MatC> es(a);
  const int n = static_cast<int>(a.rows());
  return {es.eigenvalues()(n - 1), es.eigenvectors().col(n - 1)};
}

double lambda_max(const MatC& a) {
  if (a.rows() == 1) return std::real(a(0, 0));
  Eigen::SelfAdjointEigenSolver<MatC> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(a.rows() - 1);
}

double rq(const MatC& a, const VecC& u) { return std::real(u.dot(a * u)) / u.squaredNorm(); }

template <class T>
void dedupe(std::vector<T>& v, auto key) {
  std::map<std::array<long long, 3>, T> seen;
  for (const auto& x : v) seen.emplace(key(x), x);
  v.clear();
  for (auto& [k, x] : seen) v.push_back(x);
}

long long bucket(double v) { return std::llround(v * 1e12); }

}  // namespace

VecR singular_values(const MatC& m) {
  Eigen::JacobiSVD<MatC> svd(m);
  VecR s = svd.singularValues();
  std::sort(s.data(), s.data() + s.size());
  return s;
}

double sigma_max(const MatC& m) { return singular_values(m).maxCoeff(); }
double sigma_min(const MatC& m) { return singular_values(m).minCoeff(); }

VecC random_unit_vector(int n, Rng& rng) {
  std::normal_distribution<double> g;
  VecC u(n);
  do {
    for (int i = 0; i < n; ++i) u(i) = cplx(g(rng), g(rng));
  } while (u.norm() == 0.0);
  return u / u.norm();
}

MatC haar_unitary(int n, Rng& rng) {
  std::normal_distribution<double> g;
  MatC z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cplx(g(rng), g(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<MatC> qr(z);
  MatC q = qr.householderQ();
  const MatC r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

std::vector<std::array<double, 3>> fibonacci_sphere(int n) {
  std::vector<std::array<double, 3>> out;
  const double ga = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back({r * std::cos(ga * i), r * std::sin(ga * i), z});
  }
  return out;
}

DwPoint dw_point(const MatC& m, const VecC& u) {
  const double n2 = u.squaredNorm();
  const VecC mu = m * u;
  return {u.dot(mu) / n2, mu.squaredNorm() / n2};
}

namespace {

MatC support_matrix(const MatC& m, double a, double b, double c) {
  const MatC hre = herm(m);
  const MatC him = (m - m.adjoint()) / cplx(0.0, 2.0);
  return a * hre + b * him + c * (m.adjoint() * m);
}

}  // namespace

DwPointCloud dw_sample(const MatC& m, int n_random, int n_directions, Rng& rng) {
  DwPointCloud cloud;
  cloud.kind = CloudKind::Shell;
  const int n = static_cast<int>(m.rows());
  const int nr = n == 2 ? 10 * n_random : n_random;
  for (int i = 0; i < nr; ++i) cloud.points.push_back(dw_point(m, random_unit_vector(n, rng)));
  for (const auto& d : fibonacci_sphere(n_directions)) {
    const TopEig t = top_eig(support_matrix(m, d[0], d[1], d[2]));
    cloud.points.push_back(dw_point(m, t.vec));
  }
  dedupe(cloud.points, [](const DwPoint& p) {
    return std::array<long long, 3>{bucket(p.z.real()), bucket(p.z.imag()), bucket(p.nu)};
  });
  return cloud;
}

double dw_support(const MatC& m, double a, double b, double c) {
  if (a == 0.0 && b == 0.0 && c == 0.0) throw InputError("support direction must be nonzero");
  return lambda_max(support_matrix(m, a, b, c));
}

double dw_inverse_support(const MatC& m, double a, double b, double c) {
  return dw_support(m.inverse(), a, b, c);
}

DwPoint f_inv(const DwPoint& p) {
  if (!(p.nu > 0.0)) throw InputError("f_inv is undefined at nu = 0");
  return {std::conj(p.z) / p.nu, 1.0 / p.nu};
}

std::pair<cplx, cplx> project_theta(const DwPoint& p, double theta) {
  const cplx r = expi(theta);
  const double x = std::real(std::conj(r) * p.z);
  const double y = std::sqrt(std::max(0.0, p.nu - x * x));
  return {r * cplx(x, y), r * cplx(x, -y)};
}

std::pair<cplx, cplx> srg_theta_pair(const MatC& m, const VecC& u, double theta) {
  const VecC mu = m * u;
  const double un = u.norm(), mn = mu.norm();
  if (mn == 0.0) return {0.0, 0.0};
  const double gain = mn / un;
  const double c = std::clamp(std::real(std::conj(expi(theta)) * u.dot(mu)) / (un * mn), -1.0, 1.0);
  const double psi = std::acos(c);
  return {expi(theta) * std::polar(gain, psi), expi(theta) * std::polar(gain, -psi)};
}

namespace {

std::vector<cplx> project_cloud(const DwPointCloud& c, double theta) {
  std::vector<cplx> out;
  for (const auto& p : c.points) {
    auto [a, b] = project_theta(p, theta);
    out.push_back(a);
    out.push_back(b);
  }
  dedupe(out, [](cplx z) { return std::array<long long, 3>{bucket(z.real()), bucket(z.imag()), 0}; });
  return out;
}

}  // namespace

std::vector<cplx> srg_theta_sample(const MatC& m, double theta, int n_random, int n_directions, Rng& rng) {
  return project_cloud(dw_sample(m, n_random, n_directions, rng), theta);
}

std::vector<cplx> inv_srg_theta_sample(const MatC& m, double theta, int n_random, int n_directions, Rng& rng) {
  const double smax = sigma_max(m);
  if (smax == 0.0) throw InputError("inverse SRG of the zero matrix is undefined");
  DwPointCloud c = dw_sample(m, n_random, n_directions, rng);
  DwPointCloud inv;
  inv.kind = CloudKind::InverseShell;
  for (const auto& p : c.points) {
    if (p.nu > 1e-12 * smax * smax) inv.points.push_back(f_inv(p));
  }
  return project_cloud(inv, theta);
}

// ---------------------------------------------------------------- slicer

ShellSlicer::ShellSlicer(const MatC& m, double theta) : theta_(theta) {
  h_ = herm(std::conj(expi(theta)) * m);
  k_ = herm(m.adjoint() * m);
  const VecR s = singular_values(m);
  nu_min_ = s.minCoeff() * s.minCoeff();
  nu_max_ = s.maxCoeff() * s.maxCoeff();
  scale_ = std::max(nu_max_, 1e-300);
}

double ShellSlicer::extreme(double nu, int sign, double* c_opt) const {
  const int n = dim();
  const double band = 1e-10 * scale_;
  const bool at_lo = nu <= nu_min_ + band, at_hi = nu >= nu_max_ - band;
  if (n == 1 || at_lo || at_hi) {
    // Compress onto the extreme eigenspace of K.
    Eigen::SelfAdjointEigenSolver<MatC> es(k_);
    const double target = at_lo ? nu_min_ : nu_max_;
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (std::abs(es.eigenvalues()(i) - target) <= 1e-9 * scale_) idx.push_back(i);
    }
    MatC v(n, static_cast<int>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) v.col(static_cast<int>(j)) = es.eigenvectors().col(idx[j]);
    const MatC hc = herm(v.adjoint() * (double(sign) * h_) * v);
    if (c_opt) *c_opt = at_lo ? -kInf : kInf;
    return lambda_max(hc);
  }
  const MatC kk = k_ - nu * MatC::Identity(n, n);
  const MatC hs = double(sign) * h_;
  auto slope = [&](double c) {
    const TopEig t = top_eig(hs + c * kk);
    return rq(kk, t.vec);
  };
  const double hn = std::max(h_.norm(), 1e-300);
  const double gap = std::min(nu - nu_min_, nu_max_ - nu);
  double step = hn / gap;
  double lo = 0.0, hi = 0.0;
  const double g0 = slope(0.0);
  if (g0 < 0.0) {
    hi = step;
    for (int i = 0; i < 200 && slope(hi) < 0.0; ++i) {
      lo = hi;
      hi *= 2.0;
    }
  } else if (g0 > 0.0) {
    lo = -step;
    for (int i = 0; i < 200 && slope(lo) > 0.0; ++i) {
      hi = lo;
      lo *= 2.0;
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(std::abs(lo), std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  double best = kInf, cbest = lo;
  for (double c : {lo, 0.5 * (lo + hi), hi}) {
    const double v = lambda_max(hs + c * kk);
    if (v < best) {
      best = v;
      cbest = c;
    }
  }
  if (c_opt) *c_opt = cbest;
  return best;
}

std::optional<Interval> ShellSlicer::x_range(double nu) const {
  const double band = 1e-10 * scale_;
  if (nu < nu_min_ - band || nu > nu_max_ + band) return std::nullopt;
  nu = std::clamp(nu, nu_min_, nu_max_);
  const double xmax = extreme(nu, +1, nullptr);
  const double xmin = -extreme(nu, -1, nullptr);
  return Interval{std::min(xmin, xmax), std::max(xmin, xmax)};
}

std::optional<VecC> ShellSlicer::find_vector(double nu, double x) const {
  const int n = dim();
  if (n == 1) return VecC::Ones(1);
  nu = std::clamp(nu, nu_min_, nu_max_);
  // Candidate directions: extreme eigenvectors around the dual optimum for both sides.
  std::vector<VecC> cand;
  const MatC kk = k_ - nu * MatC::Identity(n, n);
  for (int sign : {+1, -1}) {
    double c = 0.0;
    extreme(nu, sign, &c);
    const MatC hs = double(sign) * h_;
    std::vector<double> cs;
    if (std::isfinite(c)) {
      const double d = std::max(1e-6 * std::abs(c), 1e-9);
      cs = {c - d, c, c + d, c - 1e3 * d, c + 1e3 * d};
    } else {
      cs = {c < 0 ? -1e12 : 1e12};
    }
    for (double ci : cs) {
      Eigen::SelfAdjointEigenSolver<MatC> es(hs + ci * kk);
      const double top = es.eigenvalues()(n - 1);
      for (int i = n - 1; i >= 0; --i) {
        if (top - es.eigenvalues()(i) > 1e-8 * std::max(1.0, std::abs(top))) break;
        cand.push_back(es.eigenvectors().col(i));
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<MatC> ek(k_);
  cand.push_back(ek.eigenvectors().col(0));
  cand.push_back(ek.eigenvectors().col(n - 1));

  auto basis_of = [&](const std::vector<VecC>& vs) {
    MatC a(n, static_cast<int>(vs.size()));
    for (size_t i = 0; i < vs.size(); ++i) a.col(static_cast<int>(i)) = vs[i];
    Eigen::JacobiSVD<MatC> svd(a, Eigen::ComputeThinU);
    int r = 0;
    const double s0 = svd.singularValues()(0);
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-10 * s0) ++r;
    return MatC(svd.matrixU().leftCols(r));
  };

  const double sc = std::max({scale_, h_.norm(), 1e-300});
  Rng rng(12345);
  auto solve_in = [&](const MatC& v) -> std::optional<VecC> {
    const int k = static_cast<int>(v.cols());
    const MatC hv = herm(v.adjoint() * h_ * v);
    const MatC kv = herm(v.adjoint() * k_ * v);
    for (int start = 0; start < 40; ++start) {
      VecC a = start < k ? VecC(VecC::Unit(k, start)) : random_unit_vector(k, rng);
      double lambda = 1e-3;
      for (int it = 0; it < 300; ++it) {
        a /= a.norm();
        const double fh = rq(hv, a), fk = rq(kv, a);
        const double r1 = fk - nu, r2 = fh - x;
        if (std::hypot(r1, r2) <= 1e-13 * sc) {
          VecC y = v * a;
          return VecC(y / y.norm());
        }
        const VecC gk = 2.0 * (kv * a - fk * a), gh = 2.0 * (hv * a - fh * a);
        // Real Jacobian over (Re a, Im a).
        Eigen::MatrixXd j(2, 2 * k);
        for (int i = 0; i < k; ++i) {
          j(0, i) = gk(i).real();
          j(0, k + i) = gk(i).imag();
          j(1, i) = gh(i).real();
          j(1, k + i) = gh(i).imag();
        }
        const Eigen::Vector2d r(r1, r2);
        const double cost = r.squaredNorm();
        bool improved = false;
        for (int tries = 0; tries < 30; ++tries) {
          Eigen::Matrix2d jj = j * j.transpose();
          jj += lambda * (jj.trace() / 2.0 + 1e-30) * Eigen::Matrix2d::Identity();
          const Eigen::VectorXd step = -j.transpose() * jj.ldlt().solve(r);
          VecC an = a;
          for (int i = 0; i < k; ++i) an(i) += cplx(step(i), step(k + i));
          an /= an.norm();
          const double c2 = std::pow(rq(kv, an) - nu, 2) + std::pow(rq(hv, an) - x, 2);
          if (c2 < cost) {
            a = an;
            lambda = std::max(lambda / 4.0, 1e-12);
            improved = true;
            break;
          }
          lambda *= 4.0;
        }
        if (!improved) break;
      }
    }
    return std::nullopt;
  };

  if (auto y = solve_in(basis_of(cand))) return y;
  return solve_in(MatC::Identity(n, n));
}

std::optional<Interval> srg_deviation(const ShellSlicer& s, double rho) {
  const auto xr = s.x_range(rho * rho);
  if (!xr) return std::nullopt;
  if (rho == 0.0) return Interval{0.0, 0.0};
  const double lo = std::acos(std::clamp(xr->second / rho, -1.0, 1.0));
  const double hi = std::acos(std::clamp(xr->first / rho, -1.0, 1.0));
  return Interval{lo, hi};
}

std::optional<Interval> inv_srg_deviation(const ShellSlicer& s_neg, double rho) {
  if (!(rho > 0.0)) return std::nullopt;
  const double nu = 1.0 / (rho * rho);
  const auto xr = s_neg.x_range(nu);
  if (!xr) return std::nullopt;
  const double sq = std::sqrt(nu);
  const double lo = std::acos(std::clamp(xr->second / sq, -1.0, 1.0));
  const double hi = std::acos(std::clamp(xr->first / sq, -1.0, 1.0));
  return Interval{lo, hi};
}

// ---------------------------------------------------------------- theta-angle

namespace {

struct Tangent {
  double nu, value, slope;  // lower bound line for x_min: value + slope (nu' - nu)
  bool valid;
};

Tangent tangent_at(const ShellSlicer& s, double nu) {
  double c = 0.0;
  // x_min(nu) = -min_c lambda_max(-H + c (K - nu)); any c gives a global lower line.
  const int n = s.dim();
  const MatC kk = s.k() - nu * MatC::Identity(n, n);
  Tangent t{nu, 0.0, 0.0, false};
  const double band = 1e-10 * std::max(s.nu_max(), 1e-300);
  if (n == 1 || nu <= s.nu_min() + band || nu >= s.nu_max() - band) {
    const auto xr = s.x_range(nu);
    t.value = xr ? xr->first : 0.0;
    return t;
  }
  // Recover the dual multiplier by a fresh bisection through x_range's machinery.
  const MatC hs = -s.h();
  auto slope = [&](double cc) {
    Eigen::SelfAdjointEigenSolver<MatC> es(hs + cc * kk);
    const VecC u = es.eigenvectors().col(n - 1);
    return std::real(u.dot(kk * u));
  };
  const double gap = std::min(nu - s.nu_min(), s.nu_max() - nu);
  double step = std::max(s.h().norm(), 1e-300) / gap, lo = 0.0, hi = 0.0;
  const double g0 = slope(0.0);
  if (g0 < 0.0) {
    hi = step;
    for (int i = 0; i < 200 && slope(hi) < 0.0; ++i) lo = hi, hi *= 2.0;
  } else if (g0 > 0.0) {
    lo = -step;
    for (int i = 0; i < 200 && slope(lo) > 0.0; ++i) hi = lo, lo *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(std::abs(lo), std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  c = 0.5 * (lo + hi);
  Eigen::SelfAdjointEigenSolver<MatC> es(hs + c * kk, Eigen::EigenvaluesOnly);
  // -lambda_max(-H + c(K - nu')) = -lambda_max(-H + c(K - nu)) + c (nu' - nu)
  t.value = -es.eigenvalues()(n - 1);
  t.slope = c;
  t.valid = true;
  return t;
}

// Lower bound of x_min(nu)/sqrt(nu) on [a.nu, b.nu] from the two tangent lines.
double ratio_lower_bound(const Tangent& a, const Tangent& b) {
  std::vector<std::pair<double, double>> lines;  // (intercept, slope) of x = p + q nu
  if (a.valid) lines.emplace_back(a.value - a.slope * a.nu, a.slope);
  if (b.valid) lines.emplace_back(b.value - b.slope * b.nu, b.slope);
  if (lines.empty()) return -1.0;
  auto h = [&](double nu) {
    double m = -kInf;
    for (auto [p, q] : lines) m = std::max(m, p + q * nu);
    return std::max(m / std::sqrt(nu), -1.0);
  };
  std::vector<double> cand = {a.nu, b.nu};
  if (lines.size() == 2 && lines[0].second != lines[1].second) {
    const double x = (lines[1].first - lines[0].first) / (lines[0].second - lines[1].second);
    if (x > a.nu && x < b.nu) cand.push_back(x);
  }
  for (auto [p, q] : lines) {
    if (q != 0.0 && p / q > a.nu && p / q < b.nu) cand.push_back(p / q);
  }
  double m = kInf;
  for (double nu : cand) m = std::min(m, h(nu));
  return m;
}

}  // namespace

ThetaAngle deviation_bounds(const ShellSlicer& s, double rho_lo, double rho_hi, double tol) {
  ThetaAngle out;
  if (s.zero()) return out;
  double nlo = std::max(rho_lo * rho_lo, s.nu_min());
  double nhi = std::min(rho_hi * rho_hi, s.nu_max());
  if (nlo > nhi) return {-1.0, -1.0, -1.0};
  if (nlo <= 0.0) nlo = std::min(1e-12 * s.nu_max(), nhi);
  auto angle = [](const Tangent& t) { return std::acos(std::clamp(t.value / std::sqrt(t.nu), -1.0, 1.0)); };

  std::vector<Tangent> pts;
  const int n0 = nhi > nlo ? 256 : 1;
  for (int i = 0; i < n0; ++i) {
    const double r = std::sqrt(nlo) + (std::sqrt(nhi) - std::sqrt(nlo)) * (n0 == 1 ? 0.0 : double(i) / (n0 - 1));
    pts.push_back(tangent_at(s, r * r));
  }
  if (s.nu_min() == 0.0 && nhi > nlo) {
    for (double f = 1e-1; f > 1e-6; f /= 10.0) pts.push_back(tangent_at(s, std::max(nlo, f * f * nhi)));
  }
  // Refine around the sampled maximum and where the certified gap is wide.
  for (int round = 0; round < 40; ++round) {
    std::sort(pts.begin(), pts.end(), [](const Tangent& a, const Tangent& b) { return a.nu < b.nu; });
    out.lower = 0.0;
    for (const auto& t : pts) out.lower = std::max(out.lower, angle(t));
    out.value = out.lower;
    out.upper = out.lower;
    std::vector<double> split;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      const double lb = ratio_lower_bound(pts[i], pts[i + 1]);
      const double ub = std::acos(std::clamp(lb, -1.0, 1.0));
      out.upper = std::max(out.upper, ub);
      if (ub > out.lower + tol && pts[i + 1].nu - pts[i].nu > 1e-14 * nhi) {
        split.push_back(0.5 * (pts[i].nu + pts[i + 1].nu));
      }
    }
    if (split.empty() || pts.size() > 20000) break;
    for (double nu : split) pts.push_back(tangent_at(s, nu));
  }
  return out;
}

ThetaAngle theta_angle_bounds(const MatC& m, double theta, double tol) {
  if (m.norm() == 0.0) return {};
  const ShellSlicer s(m, theta);
  return deviation_bounds(s, 0.0, kInf, tol);
}

double theta_angle(const MatC& m, double theta, double tol) { return theta_angle_bounds(m, theta, tol).value; }

// ---------------------------------------------------------------- separation

double dw_separation_margin(const MatC& g, const MatC& delta, int n_directions) {
  const MatC ginv = (-g).inverse();
  auto phi = [&](const std::array<double, 3>& d) {
    return lambda_max(support_matrix(delta, d[0], d[1], d[2])) +
           lambda_max(support_matrix(ginv, -d[0], -d[1], -d[2]));
  };
  auto normed = [](std::array<double, 3> d) {
    const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    for (auto& v : d) v /= n;
    return d;
  };
  std::vector<std::pair<double, std::array<double, 3>>> vals;
  for (const auto& d : fibonacci_sphere(n_directions)) vals.emplace_back(phi(d), d);
  std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double best = vals.front().first;
  for (size_t s = 0; s < std::min<size_t>(6, vals.size()); ++s) {
    auto [f, d] = vals[s];
    double step = 0.05;
    for (int it = 0; it < 4000 && step > 1e-10; ++it) {
      bool moved = false;
      for (int ax = 0; ax < 3; ++ax) {
        for (double sg : {-1.0, 1.0}) {
          auto e = d;
          e[ax] += sg * step;
          e = normed(e);
          const double fe = phi(e);
          if (fe < f) {
            f = fe;
            d = e;
            moved = true;
          }
        }
      }
      if (!moved) step /= 2.0;
    }
    best = std::min(best, f);
  }
  return -best;
}

// ---------------------------------------------------------------- layers

bool DwLayer::contains(cplx z, double tol) const {
  if (arcs.is_empty()) return false;
  if (gamma == 0.0) return std::abs(z) <= tol;
  if (scalar) {
    if (std::abs(std::abs(z) - gamma) > tol) return false;
    return arcs.contains(std::arg(z), tol / gamma);
  }
  if (std::abs(z) > gamma + tol) return false;
  if (mode == UnionMode::Theta) {
    const double re = std::real(std::conj(expi(theta)) * z);
    for (const auto& [lo, hi] : devs) {
      if (re >= gamma * std::cos(hi) - tol && re <= gamma * std::cos(lo) + tol) return true;
    }
    return false;
  }
  if (arcs.is_full()) return true;
  const ArcSet gaps = arcs.complement();
  auto iv = gaps.intervals();
  // Rejoin a gap split at the seam.
  if (iv.size() >= 2 && iv.front().first <= -kPi + 1e-14 && iv.back().second >= kPi - 1e-14) {
    iv.front().first = iv.back().first - 2.0 * kPi;
    iv.pop_back();
  }
  for (const auto& [a, b] : iv) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    if (std::real(z * std::conj(expi(mid))) > gamma * std::cos(half) + tol) return false;
  }
  return true;
}

double DwLayer::support(cplx d) const {
  if (arcs.is_empty()) return -kInf;
  const double dist = arcs.distance(std::arg(d));
  return gamma * std::abs(d) * std::cos(dist);
}

DwLayer dw_union_layer(const Region& x, UnionMode mode, double theta, int n, double gamma) {
  DwLayer l;
  l.gamma = gamma;
  l.mode = mode;
  l.theta = theta;
  l.scalar = n == 1;
  const Region act = mode == UnionMode::Theta ? geometry::symmetrize(x, theta, geometry::SymMode::Part) : x;
  if (gamma <= 0.0) {
    l.arcs = act.contains_origin() ? ArcSet::full() : ArcSet::empty();
  } else {
    l.arcs = act.circle(gamma);
  }
  l.devs = l.arcs.deviations(theta);
  return l;
}

std::vector<DwLayer> dw_union_region(const Region& x, UnionMode mode, double theta, int gamma_grid, int n) {
  const Region act = mode == UnionMode::Theta ? geometry::symmetrize(x, theta, geometry::SymMode::Part) : x;
  const auto e = act.radial_extent();
  std::vector<DwLayer> out;
  for (double g : geometry::radial_grid(act, e.lo, e.hi, gamma_grid)) {
    DwLayer l = dw_union_layer(x, mode, theta, n, g);
    if (!l.empty()) out.push_back(std::move(l));
  }
  return out;
}

bool dw_union_contains(const Region& x, UnionMode mode, double theta, int n, const DwPoint& p, double tol) {
  if (p.nu < std::norm(p.z) - tol) return false;
  const double g = std::sqrt(std::max(p.nu, 0.0));
  const Region xt = x.with_tol(std::max(x.tol(), tol));
  DwLayer l = dw_union_layer(xt, mode, theta, n, g);
  if (l.empty() && g > 0.0) {
    // Accept a layer within tol in radius.
    for (double gg : {g - tol, g + tol}) {
      if (gg > 0.0) {
        l = dw_union_layer(xt, mode, theta, n, gg);
        if (!l.empty()) break;
      }
    }
  }
  return l.contains(p.z, tol);
}

void write_cloud_csv(const DwPointCloud& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << "re_z,im_z,nu\n";
  char buf[128];
  for (const auto& p : c.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.z.real(), p.z.imag(), p.nu);
    f << buf;
  }
}

}  // namespace srg::dw
