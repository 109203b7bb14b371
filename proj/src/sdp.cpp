#include "srgrobust/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace srg::sdp {

int Problem::add_block(int size) {
  blocks.push_back(size);
  const int s = std::abs(size);
  c.push_back(size < 0 ? MatR::Zero(s, 1) : MatR::Zero(s, s));
  return static_cast<int>(blocks.size()) - 1;
}

int Problem::add_var(double objective) {
  a.emplace_back();
  b.conservativeResize(b.size() + 1);
  b(b.size() - 1) = objective;
  return static_cast<int>(a.size()) - 1;
}

void Problem::add_coef(int var, int block, const MatR& coef) {
  for (auto& e : a[var]) {
    if (e.block == block) {
      e.a += coef;
      return;
    }
  }
  a[var].push_back({block, coef});
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::MaxIter: return "max-iterations";
    case Status::Numerical: return "numerical-failure";
  }
  return "unknown";
}

namespace {

using Blocks = std::vector<MatR>;

struct Work {
  const Problem& p;
  std::vector<bool> diag;
  int total = 0;

  explicit Work(const Problem& pr) : p(pr) {
    for (int s : p.blocks) {
      diag.push_back(s < 0);
      total += std::abs(s);
    }
  }

  Blocks zeros() const {
    Blocks out;
    for (size_t k = 0; k < p.blocks.size(); ++k) out.push_back(MatR::Zero(p.c[k].rows(), p.c[k].cols()));
    return out;
  }
  Blocks identity(double s) const {
    Blocks out = zeros();
    for (size_t k = 0; k < out.size(); ++k) {
      if (diag[k]) out[k].setConstant(s);
      else out[k] = s * MatR::Identity(out[k].rows(), out[k].rows());
    }
    return out;
  }
  Blocks aty(const VecR& y) const {
    Blocks out = zeros();
    for (int i = 0; i < p.n_vars(); ++i)
      if (y(i) != 0.0)
        for (const auto& e : p.a[i]) out[e.block] += y(i) * e.a;
    return out;
  }
  VecR aop(const Blocks& x) const {
    VecR out(p.n_vars());
    for (int i = 0; i < p.n_vars(); ++i) {
      double s = 0.0;
      for (const auto& e : p.a[i]) s += (e.a.array() * x[e.block].array()).sum();
      out(i) = s;
    }
    return out;
  }
  double inner(const Blocks& x, const Blocks& z) const {
    double s = 0.0;
    for (size_t k = 0; k < x.size(); ++k) s += (x[k].array() * z[k].array()).sum();
    return s;
  }
  double norm(const Blocks& x) const { return std::sqrt(inner(x, x)); }
};

Blocks add(const Blocks& a, const Blocks& b, double s = 1.0) {
  Blocks out = a;
  for (size_t k = 0; k < a.size(); ++k) out[k] += s * b[k];
  return out;
}

bool inverse_blocks(const Work& w, const Blocks& z, Blocks& inv) {
  inv = z;
  for (size_t k = 0; k < z.size(); ++k) {
    if (w.diag[k]) {
      if ((z[k].array() <= 0.0).any()) return false;
      inv[k] = z[k].array().inverse().matrix();
    } else {
      Eigen::LLT<MatR> llt(z[k]);
      if (llt.info() != Eigen::Success) return false;
      inv[k] = llt.solve(MatR::Identity(z[k].rows(), z[k].rows()));
      inv[k] = (0.5 * (inv[k] + inv[k].transpose())).eval();
    }
  }
  return true;
}

// Largest step keeping x + alpha dx positive definite.
double max_step(const Work& w, const Blocks& x, const Blocks& dx) {
  double alpha = kInf;
  for (size_t k = 0; k < x.size(); ++k) {
    if (w.diag[k]) {
      for (int i = 0; i < x[k].rows(); ++i)
        if (dx[k](i, 0) < 0.0) alpha = std::min(alpha, -x[k](i, 0) / dx[k](i, 0));
    } else {
      Eigen::LLT<MatR> llt(x[k]);
      if (llt.info() != Eigen::Success) return 0.0;
      const MatR l = llt.matrixL();
      MatR t = l.triangularView<Eigen::Lower>().solve(dx[k]);
      t = l.triangularView<Eigen::Lower>().solve(t.transpose().eval()).transpose().eval();
      t = (0.5 * (t + t.transpose())).eval();
      const double lmin = Eigen::SelfAdjointEigenSolver<MatR>(t, Eigen::EigenvaluesOnly).eigenvalues()(0);
      if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
    }
  }
  return alpha;
}

}  // namespace

Result solve(const Problem& p, const Options& opt) {
  Work w(p);
  const int m = p.n_vars();
  Result res;
  res.y = VecR::Zero(m);

  // Per-block infeasible starting point in the style of SDPT3.
  const double norm_c = w.norm(p.c), norm_b = p.b.norm();
  Blocks x = w.identity(1.0), z = w.identity(1.0);
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    const double nk = std::abs(p.blocks[k]), snk = std::sqrt(nk);
    double xi = std::max(10.0, snk), eta = std::max(10.0, snk);
    double amax = 0.0;
    for (int i = 0; i < m; ++i)
      for (const auto& e : p.a[i])
        if (e.block == int(k)) {
          const double an = e.a.norm();
          amax = std::max(amax, an);
          xi = std::max(xi, nk * (1.0 + std::abs(p.b(i))) / (1.0 + an));
        }
    eta = std::max(eta, (1.0 + std::max(p.c[k].norm(), amax)) / snk);
    x[k] *= xi;
    z[k] *= eta;
  }
  VecR y = VecR::Zero(m);

  auto finish = [&](Status st, int it) {
    res.status = st;
    res.y = y;
    res.x = x;
    res.iterations = it;
    res.primal_obj = w.inner(p.c, x);
    res.dual_obj = p.b.dot(y);
    return res;
  };

  for (int it = 0; it < opt.max_iter; ++it) {
    const VecR rp = p.b - w.aop(x);
    const Blocks rd = add(add(p.c, z, -1.0), w.aty(y), -1.0);
    const double mu = w.inner(x, z) / w.total;
    const double pobj = w.inner(p.c, x), dobj = p.b.dot(y);
    res.rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    res.primal_infeas = rp.norm() / (1.0 + norm_b);
    res.dual_infeas = w.norm(rd) / (1.0 + norm_c);
    if (opt.trace)
      std::fprintf(stderr, "sdp it=%d pobj=%.10e dobj=%.10e gap=%.2e pinf=%.2e dinf=%.2e mu=%.2e\n", it, pobj, dobj,
                   res.rel_gap, res.primal_infeas, res.dual_infeas, mu);
    if (res.rel_gap < opt.tol_gap && res.primal_infeas < opt.tol_feas && res.dual_infeas < opt.tol_feas)
      return finish(Status::Optimal, it);

    Blocks zinv;
    if (!inverse_blocks(w, z, zinv)) return finish(Status::Numerical, it);

    // Schur complement M_ij = tr(A_i Z^-1 A_j X).
    MatR mm = MatR::Zero(m, m);
    std::vector<std::vector<MatR>> g(m);
    for (int j = 0; j < m; ++j) {
      for (const auto& e : p.a[j]) {
        const int k = e.block;
        if (w.diag[k]) g[j].push_back((zinv[k].array() * e.a.array() * x[k].array()).matrix());
        else g[j].push_back(zinv[k] * e.a * x[k]);
      }
    }
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        double s = 0.0;
        for (const auto& ei : p.a[i]) {
          for (size_t q = 0; q < p.a[j].size(); ++q) {
            if (p.a[j][q].block != ei.block) continue;
            s += (ei.a.array() * g[j][q].array()).sum();
          }
        }
        mm(i, j) = mm(j, i) = s;
      }
    }
    Eigen::LLT<MatR> mchol(mm);
    if (mchol.info() != Eigen::Success) {
      const double reg = 1e-14 * std::max(1.0, mm.diagonal().maxCoeff());
      mchol.compute(mm + reg * MatR::Identity(m, m));
      if (mchol.info() != Eigen::Success) return finish(Status::Numerical, it);
    }

    // Z^-1 Rd X, shared by predictor and corrector.
    Blocks zrx = w.zeros();
    for (size_t k = 0; k < x.size(); ++k) {
      if (w.diag[k]) zrx[k] = (zinv[k].array() * rd[k].array() * x[k].array()).matrix();
      else zrx[k] = zinv[k] * rd[k] * x[k];
    }

    auto direction = [&](double smu, const Blocks* rc, VecR& dy, Blocks& dx, Blocks& dz) {
      Blocks t = w.zeros();  // Z^-1 (smu I - Rc)
      for (size_t k = 0; k < x.size(); ++k) {
        if (w.diag[k]) {
          t[k] = zinv[k] * smu;
          if (rc) t[k] -= (zinv[k].array() * (*rc)[k].array()).matrix();
        } else {
          t[k] = smu * zinv[k];
          if (rc) t[k] -= zinv[k] * (*rc)[k];
        }
      }
      const VecR rhs = p.b - w.aop(t) + w.aop(zrx);
      dy = mchol.solve(rhs);
      for (int k = 0; k < 2; ++k) dy += mchol.solve(rhs - mm * dy);
      dz = add(rd, w.aty(dy), -1.0);
      dx = w.zeros();
      for (size_t k = 0; k < x.size(); ++k) {
        if (w.diag[k]) {
          dx[k] = t[k] - x[k] - (zinv[k].array() * dz[k].array() * x[k].array()).matrix();
        } else {
          dx[k] = t[k] - x[k] - zinv[k] * dz[k] * x[k];
          dx[k] = (0.5 * (dx[k] + dx[k].transpose())).eval();
        }
      }
    };

    VecR dy_a;
    Blocks dx_a, dz_a;
    direction(0.0, nullptr, dy_a, dx_a, dz_a);
    const double ap_a = std::min(1.0, max_step(w, x, dx_a));
    const double ad_a = std::min(1.0, max_step(w, z, dz_a));
    const double mu_a = w.inner(add(x, dx_a, ap_a), add(z, dz_a, ad_a)) / w.total;
    const double sigma = std::clamp(std::pow(std::max(mu_a, 0.0) / mu, 3.0), 0.0, 1.0);

    Blocks rc = w.zeros();
    for (size_t k = 0; k < x.size(); ++k) {
      if (w.diag[k]) rc[k] = (dz_a[k].array() * dx_a[k].array()).matrix();
      else rc[k] = dz_a[k] * dx_a[k];
    }
    VecR dy;
    Blocks dx, dz;
    direction(sigma * mu, &rc, dy, dx, dz);
    const double ap = std::min(1.0, 0.95 * max_step(w, x, dx));
    const double ad = std::min(1.0, 0.95 * max_step(w, z, dz));
    if (!(ap > 0.0) || !(ad > 0.0) || !std::isfinite(dy.norm())) return finish(Status::Numerical, it);
    if (ap < 1e-10 && ad < 1e-10) return finish(Status::Numerical, it);
    x = add(x, dx, ap);
    z = add(z, dz, ad);
    y += ad * dy;
  }
  return finish(Status::MaxIter, opt.max_iter);
}

}  // namespace srg::sdp
