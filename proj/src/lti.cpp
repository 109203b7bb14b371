#include "srgrobust/lti.hpp"

#include <algorithm>
#include <cmath>

#include "srgrobust/dwshell.hpp"
#include "srgrobust/lmi.hpp"

namespace srg::lti {

void StateSpace::validate() const {
  if (a.rows() < 1 || a.rows() != a.cols()) throw InputError("A must be square with at least one state");
  if (b.rows() != a.rows()) throw InputError("B must have as many rows as A");
  if (c.cols() != a.rows()) throw InputError("C must have as many columns as A");
  if (d.rows() != c.rows() || d.cols() != b.cols()) throw InputError("D must be (outputs x inputs)");
  if (d.rows() != d.cols() || d.rows() < 1) throw InputError("the system must be square (n inputs = n outputs)");
  if (!a.allFinite() || !b.allFinite() || !c.allFinite() || !d.allFinite())
    throw InputError("state-space matrices must be finite");
  const auto ev = a.eigenvalues();
  for (int i = 0; i < ev.size(); ++i)
    if (!(ev(i).real() < 0.0)) throw InputError("A is not Hurwitz");
}

StateSpace StateSpace::static_gain(const MatR& d) {
  const int n = static_cast<int>(d.rows());
  return {-MatR::Identity(1, 1), MatR::Zero(1, n), MatR::Zero(n, 1), d};
}

StateSpace random_stable(int nx, int n, dw::Rng& rng) {
  if (nx < 1 || n < 1) throw InputError("random_stable: dimensions must be positive");
  std::normal_distribution<double> g;
  auto gauss = [&](int r, int c) {
    MatR m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = g(rng);
    return m;
  };
  StateSpace s{gauss(nx, nx), gauss(nx, n), gauss(n, nx), gauss(n, n)};
  const auto ev = s.a.eigenvalues();
  double re = -kInf;
  for (int i = 0; i < ev.size(); ++i) re = std::max(re, ev(i).real());
  std::uniform_real_distribution<double> u(0.1, 1.0);
  s.a -= (re + u(rng)) * MatR::Identity(nx, nx);
  return s;
}

FrequencyGrid FrequencyGrid::log(double lo, double hi, int n, bool with_ends) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw InputError("log grid requires 0 < lo < hi and n >= 2");
  FrequencyGrid g;
  if (with_ends) g.omegas.push_back(0.0);
  for (int i = 0; i < n; ++i) g.omegas.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  if (with_ends) g.omegas.push_back(kInf);
  return g;
}

MatC freq_response(const StateSpace& sys, double omega) {
  if (omega < 0.0) throw InputError("frequency must be nonnegative");
  if (std::isinf(omega)) return sys.d.cast<cplx>();
  const int nx = sys.nx();
  const MatC m = cplx(0.0, omega) * MatC::Identity(nx, nx) - sys.a.cast<cplx>();
  return sys.c.cast<cplx>() * m.partialPivLu().solve(sys.b.cast<cplx>()) + sys.d.cast<cplx>();
}

double hinf_norm_grid(const StateSpace& sys, int n_points) {
  auto gain = [&](double w) { return dw::sigma_max(freq_response(sys, w)); };
  double best = std::max(gain(0.0), gain(kInf));
  // Grid over the span of the system's time constants, widened by four decades on each side.
  const auto ev = sys.a.eigenvalues();
  double wlo = kInf, whi = 0.0;
  for (int i = 0; i < ev.size(); ++i) {
    const double m = std::abs(ev(i));
    wlo = std::min(wlo, m);
    whi = std::max(whi, m);
  }
  wlo = std::max(wlo, 1e-12) * 1e-4;
  whi = std::max(whi, 1e-12) * 1e4;
  const int n = std::max(3, n_points);
  std::vector<double> lw(n), val(n);
  for (int i = 0; i < n; ++i) {
    lw[i] = std::log(wlo) + (std::log(whi) - std::log(wlo)) * i / (n - 1);
    val[i] = gain(std::exp(lw[i]));
    best = std::max(best, val[i]);
  }
  for (int i = 0; i < ev.size(); ++i) {
    const double w = std::abs(ev(i).imag());
    if (w > 0.0) best = std::max(best, gain(w));
  }
  // Golden-section refinement of the largest interior local maxima of the sampled curve.
  std::vector<int> peaks;
  for (int i = 1; i + 1 < n; ++i)
    if (val[i] >= val[i - 1] && val[i] >= val[i + 1]) peaks.push_back(i);
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return val[a] > val[b]; });
  if (peaks.size() > 8) peaks.resize(8);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int p : peaks) {
    double a = lw[p - 1], b = lw[p + 1];
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = gain(std::exp(x1)), f2 = gain(std::exp(x2));
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
      if (f1 < f2) {
        a = x1, x1 = x2, f1 = f2;
        x2 = a + phi * (b - a);
        f2 = gain(std::exp(x2));
      } else {
        b = x2, x2 = x1, f2 = f1;
        x1 = b - phi * (b - a);
        f1 = gain(std::exp(x1));
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

HinfResult hinf_norm_detail(const StateSpace& sys, double tol) {
  sys.validate();
  HinfResult out;
  out.value = lmi::min_r_gain(sys, tol).r;
  out.grid = hinf_norm_grid(sys, 10000);
  out.consistent = out.grid <= out.value + std::max(tol, 1e-4 * out.value);
  return out;
}

double hinf_norm(const StateSpace& sys, double tol) { return hinf_norm_detail(sys, tol).value; }

AngleResult hinf_theta_angle(const StateSpace& sys, double theta, double tol) {
  sys.validate();
  if (!(tol > 0.0)) throw InputError("tol must be positive");
  AngleResult out;
  // Grid lower bound.
  const FrequencyGrid g = FrequencyGrid::log(1e-4, 1e4, 800);
  for (double w : g.omegas) {
    const MatC m = freq_response(sys, w);
    if (dw::sigma_max(m) <= 1e-14) continue;
    out.lower = std::max(out.lower, dw::theta_angle(m, theta));
  }
  // LMI upper bound: uncertified above pi/2, else bisection over inscribed cone discs.
  const auto hp = lmi::half_plane(sys, theta);
  if (!hp.feasible) {
    out.upper = kPi;
    out.value = out.lower;
    out.certified = kPi - out.lower <= tol;
    return out;
  }
  const double h = hinf_norm_grid(sys, 256);
  double lo = 0.0, hi = kPi / 2;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0) break;
    if (lmi::c_range_for_phi(sys, theta, mid, 1e-6, h)) hi = mid;
    else lo = mid;
  }
  out.upper = std::max(hi, out.lower);
  out.certified = out.upper - out.lower <= tol;
  out.value = out.certified ? out.upper : out.lower;
  return out;
}

namespace {

void grid_warnings(RsVerdict& v) {
  const auto& d = v.detail;
  for (size_t i = 1; i + 1 < d.size(); ++i) {
    if (!std::isfinite(d[i].margin) || !std::isfinite(d[i - 1].margin) || !std::isfinite(d[i + 1].margin)) continue;
    const double jump = std::max(std::abs(d[i].margin - d[i - 1].margin), std::abs(d[i + 1].margin - d[i].margin));
    if (d[i].holds && jump > d[i].margin) {
      v.warnings.push_back("grid-too-coarse near omega=" + std::to_string(d[i].omega));
      break;
    }
  }
}

// Scale-free separation: the inverse-plane distance relative to the radius where it is attained.
mrn::MrnVerdict relative(mrn::MrnVerdict m) {
  if (m.rho > 0.0 && std::isfinite(m.rho) && std::isfinite(m.margin)) m.margin /= m.rho;
  return m;
}

template <class F>
RsVerdict sweep(const StateSpace& sys, const FrequencyGrid& grid, const std::string& method, F&& check) {
  sys.validate();
  if (grid.omegas.empty()) throw InputError("empty frequency grid");
  RsVerdict v;
  v.method = method;
  v.robustly_stable = true;
  for (double w : grid.omegas) {
    const MatC g = freq_response(sys, w);
    const mrn::MrnVerdict m = check(g, w);
    v.detail.push_back({w, m.margin, m.holds});
    if (m.margin < v.margin) {
      v.margin = m.margin;
      v.worst_frequency = w;
    }
    if (!m.holds) v.robustly_stable = false;
  }
  if (!v.robustly_stable && v.margin > 0.0) v.margin = 0.0;
  v.note = "sufficient at grid resolution";
  grid_warnings(v);
  return v;
}

}  // namespace

RsVerdict rs_check_theta(const StateSpace& sys, const RegionFn& x, const AngleFn& theta, const FrequencyGrid& grid) {
  return sweep(sys, grid, "theta-SRG frequencywise separation", [&](const MatC& g, double w) {
    const Region xw = x(w);
    const double th = theta(w);
    if (!geometry::is_theta_symmetric(xw, th)) throw InputError("X(omega) is not theta(omega)-symmetric");
    return relative(mrn::mrn_check_theta(g, geometry::starhull(xw), th));
  });
}

RsVerdict rs_check_general(const StateSpace& sys, const RegionFn& x, const AngleFn& vartheta,
                           const FrequencyGrid& grid) {
  return sweep(sys, grid, "circular-hull frequencywise separation", [&](const MatC& g, double w) {
    const double th = vartheta(w);
    return relative(mrn::mrn_check_theta(g, geometry::starhull(geometry::circular_hull(x(w), th)), th));
  });
}

RsVerdict rs_check_named(const StateSpace& sys, const mrn::Shape& shape, const FrequencyGrid& grid) {
  return sweep(sys, grid, "named-shape frequencywise containment",
               [&](const MatC& g, double) { return mrn::mrn_check_named(g, shape); });
}

}  // namespace srg::lti
