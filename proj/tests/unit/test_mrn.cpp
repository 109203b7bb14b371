#include "doctest.h"
#include "srgrobust/mrn.hpp"

using namespace srg;
using namespace srg::mrn;
using geometry::Region;

namespace {

MatC random_matrix(int n, dw::Rng& rng, double s = 1.0) {
  std::normal_distribution<double> g;
  MatC m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = s * cplx(g(rng), g(rng));
  return m;
}

cplx det_ipgd(const MatC& g, const MatC& d) {
  return (MatC::Identity(g.rows(), g.rows()) + g * d).determinant();
}

void check_witness(const MatC& g, const MrnVerdict& v, const Region& x, double theta) {
  REQUIRE(v.witness.has_value());
  CHECK(std::abs(det_ipgd(g, *v.witness)) < det_threshold(g, *v.witness));
  CHECK(theta_member(*v.witness, x, theta));
}

}  // namespace

TEST_CASE("named shape examples") {
  const MatC i2 = MatC::Identity(2, 2);
  auto v = mrn_check_named(0.5 * i2, Shape::disc(1.0));
  CHECK(v.holds);
  CHECK(v.margin == doctest::Approx(0.5));

  v = mrn_check_named(0.5 * i2, Shape::disc(2.0));
  CHECK_FALSE(v.holds);
  CHECK(v.boundary);
  REQUIRE(v.witness);
  CHECK((*v.witness + 2.0 * i2).norm() < 1e-12);
  CHECK(std::abs(det_ipgd(0.5 * i2, *v.witness)) < 1e-12);

  v = mrn_check_named(2.0 * i2, Shape::sector(1.0, -kPi / 4, kPi / 4));
  CHECK(v.holds);
  CHECK(v.margin == doctest::Approx(kPi - kPi / 4).epsilon(1e-6));

  v = mrn_check_named(MatC::Zero(2, 2), Shape::cone(-kPi / 4, kPi / 4));
  CHECK(v.holds);
  CHECK_THROWS_AS(mrn_check_named(MatC::Zero(2, 3), Shape::disc(1.0)), InputError);
  CHECK_THROWS_AS(mrn_check_named(i2, Shape::cone(1.0, 0.0)), InputError);
}

TEST_CASE("named cone check against the theta angle") {
  const MatC i2 = MatC::Identity(2, 2);
  // psi(I) = 0 < 3 pi / 4
  auto v = mrn_check_named(i2, Shape::cone(-kPi / 4, kPi / 4));
  CHECK(v.holds);
  CHECK(v.margin == doctest::Approx(3 * kPi / 4).epsilon(1e-6));
  // -I has angle pi about 0: singular for Delta = I in the cone.
  v = mrn_check_named(-i2, Shape::cone(-kPi / 4, kPi / 4));
  CHECK_FALSE(v.holds);
  check_witness(-i2, v, Region::cone(-kPi / 4, kPi / 4), 0.0);
}

TEST_CASE("theta check examples") {
  const MatC i2 = MatC::Identity(2, 2);
  const Region d13 = Region::disc(3.0, 1.0);
  auto v = mrn_check_theta(i2 / 3.0, d13, 0.0);
  CHECK(v.holds);
  CHECK(v.margin > 1.0);

  v = mrn_check_theta(-i2 / 3.0, d13, 0.0);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK((*v.witness - 3.0 * i2).norm() < 1e-6);
  check_witness(-i2 / 3.0, v, d13, 0.0);

  v = mrn_check_theta(i2, Region::cone(-kPi / 4, kPi / 4), 0.0);
  CHECK(v.holds);

  v = mrn_check_theta(MatC::Zero(2, 2), d13, 0.0);
  CHECK(v.holds);
  CHECK(v.method == "theta-SRG separation");
  CHECK_FALSE(v.note.empty());
}

TEST_CASE("witness constructions") {
  const MatC bp = witness_block_pair(cplx(1, 1), 0.0, 1, 2);
  CHECK(std::abs(bp(0, 0) - cplx(1, 1)) < 1e-15);
  CHECK(std::abs(bp(1, 1) - cplx(1, -1)) < 1e-15);
  CHECK(std::abs(bp(0, 1)) == 0.0);
  CHECK_THROWS_AS(witness_block_pair(1.0, 0.0, 2, 2), InputError);

  const MatC sd = witness_svd_disc(0.5 * MatC::Identity(2, 2), 2.0);
  CHECK(dw::sigma_max(sd) == doctest::Approx(2.0));
  CHECK(std::abs(det_ipgd(0.5 * MatC::Identity(2, 2), sd)) < 1e-12);
  CHECK_THROWS_AS(witness_svd_disc(0.1 * MatC::Identity(2, 2), 2.0), InputError);

  const MatC sc = witness_scalar(cplx(0, 2), 3);
  CHECK((sc - cplx(0, -0.5) * MatC::Identity(3, 3)).norm() < 1e-15);
  CHECK_THROWS_AS(witness_scalar(0.0, 2), InputError);

  dw::Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 3;
    const MatC g = random_matrix(n, rng);
    const Eigen::JacobiSVD<MatC> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const MatC d = witness_svd_disc(g, 1.0 / svd.singularValues()(0));
    CHECK(std::abs(det_ipgd(g, d)) < 1e-9);
  }
}

TEST_CASE("block pair theta-SRG is the pair itself") {
  dw::Rng rng(3);
  const cplx s = std::polar(1.7, 0.9);
  for (double theta : {0.0, 0.4, -1.2}) {
    const MatC d = witness_block_pair(s, theta, 1, 3);
    const auto pts = dw::srg_theta_sample(d, theta, 500, 64, rng);
    const cplx st = geometry::theta_conjugate(s, theta);
    for (cplx z : pts) CHECK(std::min(std::abs(z - s), std::abs(z - st)) < 1e-9);
  }
}

TEST_CASE("aligned witnesses are singular members") {
  dw::Rng rng(11);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 3;
    const MatC g = random_matrix(n, rng);
    const double theta = ang(rng);
    const VecC y = dw::random_unit_vector(n, rng);
    const auto d = align_witness(g, theta, y);
    REQUIRE(d);
    CHECK(std::abs(det_ipgd(g, *d)) < 1e-9 * std::max(1.0, dw::sigma_max(g) * dw::sigma_max(*d)));
    const dw::DwPoint p = dw::f_inv(dw::dw_point(-g, y));
    const auto [s, st] = dw::project_theta(p, theta);
    const Region x = Region::point_set({s, st});
    CHECK(theta_member(*d, x, theta));
  }
}

TEST_CASE("disc check agrees with the svd witness oracle") {
  dw::Rng rng(5);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  int agree = 0, total = 0;
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 3;
    const MatC g = random_matrix(n, rng, u(rng));
    double gamma = u(rng);
    if (std::abs(dw::sigma_max(g) - 1.0 / gamma) <= 1e-3) continue;
    const auto v = mrn_check_named(g, Shape::disc(gamma));
    UncertaintySpec spec{Region::disc(0.0, gamma), Mode::ThetaFixed, 0.0, n};
    auto b = mrn_bruteforce(g, spec, 400, 8, rng);
    bool oracle_fails = !b.holds;
    if (dw::sigma_max(g) >= 1.0 / gamma) {
      const MatC d = witness_svd_disc(g, gamma);
      oracle_fails = oracle_fails || std::abs(det_ipgd(g, d)) < det_threshold(g, d);
    }
    ++total;
    agree += (v.holds == !oracle_fails);
    if (!v.holds) check_witness(g, v, spec.region, 0.0);
  }
  CHECK(agree == total);
}

TEST_CASE("cone and sector checks agree with brute force") {
  dw::Rng rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 2;
    const MatC g = random_matrix(n, rng, 0.3 + 1.5 * std::abs(u(rng)));
    const double a = 0.8 * u(rng), w = 0.3 + std::abs(u(rng));
    const Shape sh = t % 2 ? Shape::cone(a - w, a + w) : Shape::sector(0.5 + std::abs(u(rng)), a - w, a + w);
    const auto v = mrn_check_named(g, sh);
    if (v.boundary || std::abs(v.margin) < 1e-3) continue;
    UncertaintySpec spec{sh.region(), Mode::ThetaFixed, a, n};
    if (v.holds) {
      const auto b = mrn_bruteforce(g, spec, 600, 8, rng);
      CHECK(b.holds);
    } else {
      check_witness(g, v, sh.region(), a);
    }
    const auto vt = mrn_check_theta(g, sh.region(), a);
    CHECK(vt.holds == v.holds);
    ++checked;
  }
  CHECK(checked > 15);
}

TEST_CASE("theta check against brute force on random discs") {
  dw::Rng rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int fails = 0, holds = 0;
  for (int t = 0; t < 30; ++t) {
    const int n = 2;
    const MatC g = random_matrix(n, rng, 0.6);
    const Region x = Region::disc(cplx(2.0 * u(rng), 2.0 * u(rng)), 0.3 + std::abs(u(rng)));
    const double theta = u(rng);
    const auto v = mrn_check_theta(g, x, theta);
    if (v.boundary || std::abs(v.margin) < 1e-3) continue;
    if (v.holds) {
      ++holds;
      UncertaintySpec spec{x, Mode::ThetaFixed, theta, n};
      CHECK(mrn_bruteforce(g, spec, 600, 8, rng).holds);
    } else {
      ++fails;
      check_witness(g, v, x, theta);
    }
  }
  CHECK(holds > 0);
  CHECK(fails > 0);
}

TEST_CASE("sufficient general check on symmetric connected sets matches the theta check") {
  dw::Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const MatC g = random_matrix(2, rng);
    const Region x = Region::sector(1.5, -0.6, 0.6);
    const auto a = mrn_check_theta(g, x, 0.0);
    const auto b = mrn_check_general(g, x, 0.0);
    CHECK(b.exact);
    CHECK(a.holds == b.holds);
    CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-9));
  }
}

TEST_CASE("asymmetric point counterexample") {
  const cplx z = std::polar(2.0, kPi / 3);
  const Region x = Region::point_set({z});
  const MatC g = -(1.0 / std::conj(z)) * MatC::Identity(2, 2);
  const auto gen = mrn_check_general(g, x, 0.0);
  CHECK_FALSE(gen.holds);
  CHECK_FALSE(gen.exact);
  CHECK_FALSE(gen.witness.has_value());
  CHECK(mrn_check_dw_union(g, x).holds);
  dw::Rng rng(2);
  CHECK(mrn_bruteforce(g, {x, Mode::General, 0.0, 2}, 4000, 16, rng).holds);
}

TEST_CASE("same-side gap counterexample") {
  const double gamma = 1.5;
  const Region x = Region::annulus_sector(gamma, gamma, {{0.2, 0.5}, {0.9, 1.2}});
  const cplx z = std::polar(gamma, 0.7);
  const MatC g = -(1.0 / z) * MatC::Identity(2, 2);
  const auto gen = mrn_check_general(g, x, 0.0);
  CHECK_FALSE(gen.holds);
  CHECK_FALSE(gen.exact);
  CHECK_FALSE(gen.witness.has_value());
  CHECK(mrn_check_dw_union(g, x).holds);
  dw::Rng rng(8);
  CHECK(mrn_bruteforce(g, {x, Mode::General, 0.0, 2}, 4000, 16, rng).holds);
}

TEST_CASE("dw union check detects singular members") {
  const MatC i2 = MatC::Identity(2, 2);
  const Region x = Region::point_set({std::polar(2.0, kPi / 3)});
  const auto v = mrn_check_dw_union(-(1.0 / std::polar(2.0, kPi / 3)) * i2, x);
  CHECK_FALSE(v.holds);
  const auto w = mrn_check_dw_union(0.5 * i2, Region::disc(0.0, 1.0));
  CHECK(w.holds);
  CHECK(w.margin > 0.0);
  const auto f = mrn_check_dw_union(0.5 * i2, Region::disc(0.0, 2.5));
  CHECK_FALSE(f.holds);
}

TEST_CASE("theta and general membership differ without symmetry or connectivity") {
  const cplx z = std::polar(2.0, kPi / 3);
  const MatC zi = z * MatC::Identity(2, 2);
  const Region pt = Region::point_set({z});
  CHECK(general_member(zi, pt));
  CHECK_FALSE(theta_member(zi, pt, 0.0));

  const std::vector<geometry::ArcSet::Interval> arcs = {{0.2, 0.5}, {0.9, 1.2}, {-0.5, -0.2}, {-1.2, -0.9}};
  const Region two = Region::annulus_sector(1.0, 1.0, arcs);
  MatC d = MatC::Zero(2, 2);
  d(0, 0) = expi(0.3);
  d(1, 1) = expi(1.0);
  CHECK(general_member(d, two));
  CHECK_FALSE(theta_member(d, two, 0.0));

  const Region sec = Region::sector(1.0, -0.7, 0.7);
  dw::Rng rng(6);
  std::uniform_real_distribution<double> r(0.0, 1.0), a(-0.7, 0.7);
  for (int t = 0; t < 20; ++t) {
    const MatC u = dw::haar_unitary(2, rng);
    MatC dd = MatC::Zero(2, 2);
    dd(0, 0) = std::polar(r(rng), a(rng));
    dd(1, 1) = std::polar(r(rng), a(rng));
    const MatC m = u.adjoint() * dd * u;
    CHECK(general_member(m, sec) == theta_member(m, sec, 0.0));
  }
}

TEST_CASE("cover, region and part verdicts are ordered") {
  dw::Rng rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 12; ++t) {
    const MatC g = random_matrix(2, rng, 0.8);
    const Region x = Region::disc(cplx(1.5 * u(rng), 1.5 * u(rng)), 0.4 + 0.5 * std::abs(u(rng)));
    const Region cover = geometry::symmetrize(x, 0.0, geometry::SymMode::Cover);
    const Region part = geometry::symmetrize(x, 0.0, geometry::SymMode::Part);
    const auto vc = mrn_check_theta(g, cover, 0.0);
    const auto vp = mrn_check_theta(g, part, 0.0);
    if (vc.holds) CHECK(vp.holds);
    if (std::isfinite(vp.margin)) CHECK(vc.margin <= vp.margin + 1e-9);
  }
}

TEST_CASE("singular unitary search finds witnesses for intersecting shells") {
  dw::Rng rng(17);
  int found = 0;
  for (int t = 0; t < 10; ++t) {
    const MatC g = random_matrix(2, rng);
    const VecC y = dw::random_unit_vector(2, rng);
    const auto [s, st] = dw::project_theta(dw::f_inv(dw::dw_point(-g, y)), 0.0);
    const MatC d0 = witness_block_pair(s, 0.0, 1, 2);
    for (int k = 0; k < 8; ++k) {
      if (singular_unitary(g, d0, dw::haar_unitary(2, rng))) {
        ++found;
        break;
      }
    }
  }
  CHECK(found == 10);
}
