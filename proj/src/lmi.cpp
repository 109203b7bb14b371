#include "srgrobust/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace srg::lmi {

namespace {

constexpr double kBox = 1e5;
// Tighter strictness margin for the gain minimisation, whose optimum is always a boundary point.
constexpr double kGainMargin = 1e-9;

MatC hermitian_basis(int n, int k) {
  MatC e = MatC::Zero(n, n);
  if (k < n) {
    e(k, k) = 1.0;
    return e;
  }
  k -= n;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      if (k == 0) {
        e(p, q) = e(q, p) = 1.0;
        return e;
      }
      if (k == 1) {
        e(p, q) = cplx(0, 1);
        e(q, p) = cplx(0, -1);
        return e;
      }
      k -= 2;
    }
  return e;
}

MatC assemble_hermitian(const VecR& v, int offset, int n) {
  MatC m = MatC::Zero(n, n);
  for (int k = 0; k < n * n; ++k) m += v(offset + k) * hermitian_basis(n, k);
  return m;
}

double lambda_max(const MatC& h) {
  const MatC s = 0.5 * (h + h.adjoint());
  return Eigen::SelfAdjointEigenSolver<MatC>(s, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

double lambda_min(const MatC& h) {
  if (h.size() == 0) return 0.0;
  const MatC s = 0.5 * (h + h.adjoint());
  return Eigen::SelfAdjointEigenSolver<MatC>(s, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double default_scale(const StateSpace& sys) {
  MatR cd(sys.n(), sys.nx() + sys.n());
  cd << sys.c, sys.d;
  const double s = cd.norm();
  return s > 0.0 ? s * s : 1.0;
}

// Scale for gain-like problems: square of a cheap gain estimate.
double gain_scale(const StateSpace& sys) {
  const double g = lti::hinf_norm_grid(sys, 64);
  return g > 0.0 ? g * g : default_scale(sys);
}

struct Layout {
  int nx, n, q, ns;
  int nvar_x() const { return nx * nx; }
  int ix(int k) const { return k; }
  int iy(int k) const { return nx * nx + k; }
  int is(int k) const { return 2 * nx * nx + k; }
  int size() const { return 2 * nx * nx + ns; }
};

// Complex affine map: main block as a function of the variables.
struct MainBlock {
  MatC m0;
  std::vector<MatC> coef;  // one per variable of the layout
};

MainBlock build_main(const StateSpace& sys, const MiProblem& prob, const Layout& lay, double kappa) {
  const int nn = lay.nx + lay.n, q = lay.q;
  const int dim = q + nn;
  const double sk = std::sqrt(kappa);
  MainBlock mb;
  mb.m0 = MatC::Zero(dim, dim);
  mb.m0.bottomRightCorner(nn, nn) = prob.theta0 / kappa;
  if (q > 0) {
    mb.m0.topLeftCorner(q, q) = -MatC::Identity(q, q);
    mb.m0.bottomLeftCorner(nn, q) = prob.w0 / sk;
    mb.m0.topRightCorner(q, nn) = prob.w0.adjoint() / sk;
  }
  mb.coef.assign(lay.size(), MatC::Zero(dim, dim));
  const MatC zero = MatC::Zero(lay.nx, lay.nx);
  for (int k = 0; k < lay.nvar_x(); ++k) {
    const MatC e = hermitian_basis(lay.nx, k);
    mb.coef[lay.ix(k)].bottomRightCorner(nn, nn) = mi_lhs(sys, e, zero);
    mb.coef[lay.iy(k)].bottomRightCorner(nn, nn) = mi_lhs(sys, zero, e);
  }
  for (int k = 0; k < lay.ns; ++k) {
    MatC& c = mb.coef[lay.is(k)];
    if (k < static_cast<int>(prob.theta_k.size())) c.bottomRightCorner(nn, nn) = prob.theta_k[k] / kappa;
    if (q > 0 && k < static_cast<int>(prob.w_k.size())) {
      c.bottomLeftCorner(nn, q) = prob.w_k[k] / sk;
      c.topRightCorner(q, nn) = prob.w_k[k].adjoint() / sk;
    }
  }
  return mb;
}

struct SolveOut {
  sdp::Result res;
  VecR v;
  double t = 0.0;
};

// phase1: min t with main <= t I; otherwise main <= level I and the objective.
SolveOut run(const MainBlock& mb, const MiProblem& prob, const Layout& lay, bool phase1, double level) {
  sdp::Problem p;
  const int main_blk = p.add_block(2 * static_cast<int>(mb.m0.rows()));
  const int y_blk = p.add_block(2 * lay.nx);
  const int n_box = 2 * lay.size() + (phase1 ? 1 : 0);
  const int lp_blk = p.add_block(-n_box);
  p.c[main_blk] = -real_embedding(mb.m0);
  if (!phase1) p.c[main_blk] += level * MatR::Identity(p.c[main_blk].rows(), p.c[main_blk].rows());
  MatR& lpc = p.c[lp_blk];
  for (int i = 0; i < lay.size(); ++i) {
    double lo = -kBox, hi = kBox;
    if (i >= lay.is(0)) std::tie(lo, hi) = prob.bounds[i - lay.is(0)];
    const double obj = (!phase1 && i >= lay.is(0) && prob.objective.size() > 0) ? -prob.objective(i - lay.is(0)) : 0.0;
    const int v = p.add_var(obj);
    p.add_coef(v, main_blk, real_embedding(mb.coef[i]));
    if (i >= lay.iy(0) && i < lay.is(0)) p.add_coef(v, y_blk, -real_embedding(hermitian_basis(lay.nx, i - lay.iy(0))));
    // Rows normalised by the bound magnitude so every LP entry of C is O(1).
    const double sh = std::max(1.0, std::abs(hi)), sl = std::max(1.0, std::abs(lo));
    MatR lp = MatR::Zero(n_box, 1);
    lp(2 * i, 0) = 1.0 / sh;
    lp(2 * i + 1, 0) = -1.0 / sl;
    lpc(2 * i, 0) = hi / sh;
    lpc(2 * i + 1, 0) = -lo / sl;
    p.add_coef(v, lp_blk, lp);
  }
  int tv = -1;
  if (phase1) {
    tv = p.add_var(-1.0);
    const int d = static_cast<int>(p.c[main_blk].rows());
    p.add_coef(tv, main_blk, -MatR::Identity(d, d));
    // t >= -1 keeps the phase-1 optimum off the variable box when the inequality is strict.
    MatR lp = MatR::Zero(n_box, 1);
    lp(n_box - 1, 0) = -1.0;
    lpc(n_box - 1, 0) = 1.0;
    p.add_coef(tv, lp_blk, lp);
  }
  sdp::Options opt;
  opt.trace = std::getenv("SRGROBUST_SDP_ITER") != nullptr;
  SolveOut out;
  out.res = sdp::solve(p, opt);
  out.v = out.res.y.head(lay.size());
  out.t = phase1 ? out.res.y(tv) : level;
  if (trace_enabled()) {
    std::fprintf(stderr,
                 "{\"solver_trace\":{\"label\":\"%s\",\"phase\":%d,\"vars\":%d,\"main_dim\":%d,\"iterations\":%d,"
                 "\"status\":\"%s\",\"slack\":%.6e,\"gap\":%.3e}}\n",
                 prob.label.c_str(), phase1 ? 1 : 2, p.n_vars(), static_cast<int>(p.c[main_blk].rows()),
                 out.res.iterations, sdp::status_name(out.res.status).c_str(), out.t, out.res.rel_gap);
  }
  return out;
}

bool usable(const sdp::Result& r) {
  return r.status == sdp::Status::Optimal || (r.rel_gap < 1e-6 && r.dual_infeas < 1e-7);
}

}  // namespace

bool trace_enabled() {
  const char* e = std::getenv("SRGROBUST_SOLVER_TRACE");
  return e && std::string(e) == "1";
}

ThetaBlock theta_d(double theta, double c, double r, const StateSpace& sys) {
  const bool ci = std::isinf(c), ri = std::isinf(r);
  if (ci != ri) throw InputError("theta_d: c and r must be both finite or both infinite");
  if (c < 0.0 || r < 0.0) throw InputError("theta_d: c and r must be nonnegative");
  const int nx = sys.nx(), n = sys.n();
  ThetaBlock tb{theta, c, r, MatC::Zero(nx + n, nx + n)};
  const cplx e = expi(theta);
  if (ci) {
    tb.matrix.topRightCorner(nx, n) = -e * sys.c.transpose().cast<cplx>();
    tb.matrix.bottomLeftCorner(n, nx) = -std::conj(e) * sys.c.cast<cplx>();
    tb.matrix.bottomRightCorner(n, n) = -(e * sys.d.transpose().cast<cplx>() + std::conj(e) * sys.d.cast<cplx>());
    return tb;
  }
  MatC row(n, nx + n);
  row << sys.c.cast<cplx>(), sys.d.cast<cplx>() - c * e * MatC::Identity(n, n);
  tb.matrix = row.adjoint() * row;
  tb.matrix.bottomRightCorner(n, n) -= r * r * MatC::Identity(n, n);
  return tb;
}

MatC mi_lhs(const StateSpace& sys, const MatC& x, const MatC& y) {
  const int nx = sys.nx(), n = sys.n();
  const MatC a = sys.a.cast<cplx>(), b = sys.b.cast<cplx>();
  const MatC p = x + cplx(0, 1) * y, pm = x - cplx(0, 1) * y;
  MatC out = MatC::Zero(nx + n, nx + n);
  out.topLeftCorner(nx, nx) = a.transpose() * p + pm * a;
  out.topRightCorner(nx, n) = pm * b;
  out.bottomLeftCorner(n, nx) = b.transpose() * p;
  return out;
}

MatR real_embedding(const MatC& h) {
  const int k = static_cast<int>(h.rows());
  MatR out(2 * k, 2 * k);
  const MatR re = 0.5 * (h.real() + h.real().transpose());
  const MatR im = 0.5 * (h.imag() - h.imag().transpose());
  out << re, -im, im, re;
  return out;
}

double verify(const StateSpace& sys, const MiProblem& prob, const LmiCertificate& cert) {
  MatC th = prob.theta0;
  MatC w = prob.w0;
  for (int k = 0; k < cert.aux.size(); ++k) {
    if (k < static_cast<int>(prob.theta_k.size())) th += cert.aux(k) * prob.theta_k[k];
    if (w.size() > 0 && k < static_cast<int>(prob.w_k.size())) w += cert.aux(k) * prob.w_k[k];
  }
  if (w.size() > 0) th += w * w.adjoint();
  return lambda_max(mi_lhs(sys, cert.x, cert.y) + th / cert.scale);
}

LmiCertificate mi_feasible(const StateSpace& sys, const MiProblem& prob, double margin) {
  sys.validate();
  const int nn = sys.nx() + sys.n();
  if (prob.theta0.rows() != nn || prob.theta0.cols() != nn) throw InputError("mi_feasible: theta block has wrong size");
  if (prob.bounds.size() < prob.theta_k.size() || prob.bounds.size() < prob.w_k.size())
    throw InputError("mi_feasible: every free scalar needs bounds");
  Layout lay{sys.nx(), sys.n(), prob.w0.size() > 0 ? static_cast<int>(prob.w0.cols()) : 0,
             static_cast<int>(prob.bounds.size())};
  double kappa = prob.scale;
  if (!(kappa > 0.0)) {
    const double t0 = prob.theta0.norm();
    kappa = t0 > 0.0 ? t0 : default_scale(sys);
  }
  const MainBlock mb = build_main(sys, prob, lay, kappa);

  LmiCertificate cert;
  cert.scale = kappa;
  auto fill = [&](LmiCertificate& c, const VecR& v) {
    c.x = assemble_hermitian(v, lay.ix(0), lay.nx);
    c.y = assemble_hermitian(v, lay.iy(0), lay.nx);
    c.aux = v.segment(lay.is(0), lay.ns);
    c.bound_active = v.head(2 * lay.nvar_x()).cwiseAbs().maxCoeff() > 0.9 * kBox;
  };

  const SolveOut p1 = run(mb, prob, lay, true, 0.0);
  cert.iterations = p1.res.iterations;
  cert.phase1 = p1.t;
  if (!usable(p1.res)) {
    cert.status = CertStatus::Numerical;
    cert.note = "phase-1 solve: " + sdp::status_name(p1.res.status);
    fill(cert, p1.v);
    return cert;
  }
  fill(cert, p1.v);
  if (p1.t > margin) {
    cert.status = CertStatus::Infeasible;
    cert.slack_margin = verify(sys, prob, cert);
    return cert;
  }
  const bool strict = p1.t < -2.0 * margin;
  if (!strict) cert.note = "boundary-indeterminate: feasible only within the margin band";
  const double bound = strict ? -0.5 * margin : 2.0 * margin + std::max(0.0, p1.t);
  auto passes = [&](LmiCertificate& c) {
    c.slack_margin = verify(sys, prob, c);
    return c.slack_margin <= bound && lambda_min(c.y) >= -1e-8 * std::max(1.0, c.y.norm());
  };
  auto append = [&](const std::string& s) { cert.note += (cert.note.empty() ? "" : "; ") + s; };
  cert.feasible = true;
  cert.status = CertStatus::Feasible;
  if (prob.objective.size() > 0) {
    const double level = strict ? -margin : p1.t + margin;
    const SolveOut p2 = run(mb, prob, lay, false, level);
    cert.iterations += p2.res.iterations;
    // A phase-2 iterate is kept whenever it passes re-verification; the solver status only
    // records how close to optimal it is.
    LmiCertificate trial = cert;
    fill(trial, p2.v);
    if (passes(trial)) {
      cert = std::move(trial);
      if (!usable(p2.res)) append("phase-2 solve stopped early (" + sdp::status_name(p2.res.status) + "), objective approximate");
      return cert;
    }
    append("phase-2 solve: " + sdp::status_name(p2.res.status) + ", phase-1 point kept");
    cert.status = CertStatus::Numerical;
  }
  if (!passes(cert)) {
    cert.status = CertStatus::Numerical;
    append("certificate re-verification failed");
  }
  return cert;
}

GainResult min_r_gain(const StateSpace& sys, double tol) {
  (void)tol;
  sys.validate();
  GainResult out;
  if (sys.c.norm() == 0.0 && sys.d.norm() == 0.0) {
    out.r = 0.0;
    out.cert.feasible = true;
    out.cert.status = CertStatus::Feasible;
    out.cert.x = MatC::Zero(sys.nx(), sys.nx());
    out.cert.y = MatC::Zero(sys.nx(), sys.nx());
    out.cert.note = "zero system";
    return out;
  }
  const int nx = sys.nx(), n = sys.n();
  const double kappa = gain_scale(sys);
  MiProblem prob;
  prob.theta0 = theta_d(0.0, 0.0, 0.0, sys).matrix;
  MatC zk = MatC::Zero(nx + n, nx + n);
  zk.bottomRightCorner(n, n) = -MatC::Identity(n, n);
  prob.theta_k = {zk};
  prob.bounds = {{0.0, 1e4 * kappa}};
  prob.objective = VecR::Ones(1);
  prob.scale = kappa;
  prob.label = "min_r_gain";
  out.cert = mi_feasible(sys, prob, kGainMargin);
  if (!out.cert.feasible) throw SolverError("min_r_gain: " + out.cert.note);
  out.r = std::sqrt(std::max(0.0, out.cert.aux(0)));
  return out;
}

LmiCertificate half_plane(const StateSpace& sys, double theta) {
  MiProblem prob;
  prob.theta0 = theta_d(theta, kInf, kInf, sys).matrix;
  prob.scale = std::sqrt(gain_scale(sys));
  prob.label = "half_plane";
  return mi_feasible(sys, prob);
}

LmiCertificate disc_feasible(const StateSpace& sys, double theta, double c, double r) {
  MiProblem prob;
  prob.theta0 = theta_d(theta, c, r, sys).matrix;
  prob.scale = std::max({gain_scale(sys), c * c, r * r});
  prob.label = "disc";
  return mi_feasible(sys, prob);
}

std::optional<CRange> c_range_for_phi(const StateSpace& sys, double theta, double phi, double tol, double hinf) {
  (void)tol;
  if (!(phi > 0.0) || phi > kPi / 2 + 1e-15) throw InputError("c_range_for_phi: phi must lie in (0, pi/2]");
  sys.validate();
  const int nx = sys.nx(), n = sys.n(), nn = nx + n;
  if (!(hinf > 0.0)) hinf = std::sqrt(gain_scale(sys));
  const double c_max = 1e6 * std::max(hinf, 1e-12);
  const cplx e = expi(theta);
  // Linear part of Theta_d(theta, c, c sin phi) minus the W W* term [0; c cos phi I][...]*.
  MiProblem prob;
  MatC row(n, nn);
  row << sys.c.cast<cplx>(), sys.d.cast<cplx>();
  prob.theta0 = row.adjoint() * row;
  MatC lin = MatC::Zero(nn, nn);
  lin.topRightCorner(nx, n) = -e * sys.c.transpose().cast<cplx>();
  lin.bottomLeftCorner(n, nx) = -std::conj(e) * sys.c.cast<cplx>();
  lin.bottomRightCorner(n, n) = -(e * sys.d.transpose().cast<cplx>() + std::conj(e) * sys.d.cast<cplx>());
  prob.theta_k = {lin};
  prob.w0 = MatC::Zero(nn, n);
  MatC w = MatC::Zero(nn, n);
  w.bottomRows(n) = std::cos(phi) * MatC::Identity(n, n);
  prob.w_k = {w};
  prob.bounds = {{0.0, c_max}};
  prob.scale = hinf * hinf > 0.0 ? hinf * hinf : 1.0;
  CRange out;
  prob.objective = VecR::Ones(1);
  prob.label = "c_min";
  const LmiCertificate lo = mi_feasible(sys, prob);
  if (!lo.feasible) return std::nullopt;
  prob.objective = -VecR::Ones(1);
  prob.label = "c_max";
  const LmiCertificate hi = mi_feasible(sys, prob);
  if (!hi.feasible) return std::nullopt;
  out.c_lo = lo.aux(0);
  out.c_hi = hi.aux(0);
  out.unbounded = out.c_hi >= 0.999 * c_max;
  if (out.c_lo > out.c_hi) std::swap(out.c_lo, out.c_hi);
  return out;
}

std::optional<double> max_lambda_mixed(const StateSpace& sys, double r, const ThetaBlock& angle, double tol) {
  (void)tol;
  sys.validate();
  const ThetaBlock gain = theta_d(0.0, 0.0, r, sys);
  MiProblem prob;
  prob.theta0 = gain.matrix;
  prob.theta_k = {angle.matrix - gain.matrix};
  prob.bounds = {{0.0, 1.0}};
  prob.objective = -VecR::Ones(1);
  prob.scale = std::max(gain_scale(sys), r * r);
  prob.label = "max_lambda";
  const LmiCertificate cert = mi_feasible(sys, prob);
  if (!cert.feasible) return std::nullopt;
  return std::clamp(cert.aux(0), 0.0, 1.0);
}

}  // namespace srg::lmi
