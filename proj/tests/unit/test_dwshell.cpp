#include "doctest.h"
#include "srgrobust/dwshell.hpp"

using namespace srg;
using namespace srg::dw;
using geometry::Region;

namespace {

MatC diag(std::initializer_list<cplx> d) {
  MatC m = MatC::Zero(d.size(), d.size());
  int i = 0;
  for (cplx v : d) m(i, i) = v, ++i;
  return m;
}

MatC random_matrix(int n, Rng& rng, double s = 1.0) {
  std::normal_distribution<double> g;
  MatC m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = s * cplx(g(rng), g(rng));
  return m;
}

bool has_point(const std::vector<cplx>& v, cplx z, double tol = 1e-9) {
  for (cplx w : v)
    if (std::abs(w - z) < tol) return true;
  return false;
}

}  // namespace

TEST_CASE("dw_sample examples") {
  Rng rng(1);
  auto c = dw_sample(MatC::Constant(1, 1, 2.0), 100, 64, rng);
  REQUIRE(c.points.size() == 1);
  CHECK(std::abs(c.points[0].z - 2.0) < 1e-15);
  CHECK(c.points[0].nu == doctest::Approx(4.0));
  c = dw_sample(MatC::Identity(2, 2), 100, 64, rng);
  REQUIRE(c.points.size() == 1);
  CHECK(std::abs(c.points[0].z - 1.0) < 1e-12);
  c = dw_sample(diag({1.0, cplx(0, 1)}), 200, 64, rng);
  for (const auto& p : c.points) {
    CHECK(p.nu == doctest::Approx(1.0));
    CHECK(std::abs(p.z.real() + p.z.imag() - 1.0) < 1e-12);
    CHECK(p.z.real() >= -1e-12);
    CHECK(p.z.imag() >= -1e-12);
  }
}

TEST_CASE("dw_support examples") {
  CHECK(dw_support(MatC::Identity(2, 2), 1, 0, 1) == doctest::Approx(2));
  CHECK(dw_support(diag({1.0, -1.0}), 1, 0, 0) == doctest::Approx(1));
  MatC m = MatC::Zero(2, 2);
  m(0, 1) = 2;
  CHECK(dw_support(m, 0, 0, 1) == doctest::Approx(4));
  CHECK_THROWS_AS(dw_support(m, 0, 0, 0), InputError);
}

TEST_CASE("f_inv and project_theta examples") {
  auto p = f_inv({2.0, 4.0});
  CHECK(std::abs(p.z - 0.5) < 1e-15);
  CHECK(p.nu == 0.25);
  p = f_inv({cplx(0, 1), 1.0});
  CHECK(std::abs(p.z - cplx(0, -1)) < 1e-15);
  CHECK_THROWS_AS(f_inv({0.0, 0.0}), InputError);

  auto [a, b] = project_theta({0.0, 1.0}, 0);
  CHECK(std::abs(a - cplx(0, 1)) < 1e-15);
  CHECK(std::abs(b - cplx(0, -1)) < 1e-15);
  std::tie(a, b) = project_theta({1.0, 1.0}, 0);
  CHECK(std::abs(a - 1.0) < 1e-15);
  CHECK(std::abs(b - 1.0) < 1e-15);
  std::tie(a, b) = project_theta({1.0, 2.0}, kPi / 2);
  CHECK(std::min(std::abs(a - std::sqrt(2.0)), std::abs(a + std::sqrt(2.0))) < 1e-12);
  CHECK(std::abs(a + b) < 1e-12);
}

TEST_CASE("theta-SRG sample examples") {
  Rng rng(2);
  auto s = srg_theta_sample(MatC::Identity(2, 2), 0.0, 50, 32, rng);
  for (cplx z : s) CHECK(std::abs(z - 1.0) < 1e-12);
  // Away from theta = 0 the pair is 1 and its theta-conjugate.
  s = srg_theta_sample(MatC::Identity(2, 2), 0.7, 50, 32, rng);
  for (cplx z : s) CHECK(std::min(std::abs(z - 1.0), std::abs(z - expi(1.4))) < 1e-12);
  s = srg_theta_sample(expi(kPi / 3) * MatC::Identity(2, 2), 0, 50, 32, rng);
  for (cplx z : s) CHECK(std::min(std::abs(z - expi(kPi / 3)), std::abs(z - expi(-kPi / 3))) < 1e-9);
  // The listed vectors of diag(1, i): e1, e2 and (1,1)/sqrt 2.
  const MatC d = diag({1.0, cplx(0, 1)});
  for (VecC u : {VecC(VecC::Unit(2, 0)), VecC(VecC::Unit(2, 1)), VecC(VecC::Ones(2) / std::sqrt(2.0))}) {
    auto [z1, z2] = project_theta(dw_point(d, u), 0);
    auto [w1, w2] = srg_theta_pair(d, u, 0);
    CHECK(std::abs(z1 - w1) < 1e-12);
    CHECK(std::abs(z2 - w2) < 1e-12);
  }
  auto [z1, z2] = srg_theta_pair(d, VecC::Ones(2) / std::sqrt(2.0), 0);
  CHECK(std::abs(z1 - expi(kPi / 3)) < 1e-12);
  CHECK(std::abs(z2 - expi(-kPi / 3)) < 1e-12);
  auto [e1, e2] = srg_theta_pair(d, VecC::Unit(2, 1), 0);
  CHECK(std::abs(e1 - cplx(0, 1)) < 1e-12);
  CHECK(std::abs(e2 - cplx(0, -1)) < 1e-12);
}

TEST_CASE("inverse theta-SRG examples") {
  Rng rng(3);
  auto s = inv_srg_theta_sample(2.0 * MatC::Identity(2, 2), 0, 50, 32, rng);
  for (cplx z : s) CHECK(std::abs(z - 0.5) < 1e-12);
  s = inv_srg_theta_sample(cplx(0, 1) * MatC::Identity(2, 2), 0, 50, 32, rng);
  for (cplx z : s) CHECK(std::min(std::abs(z - cplx(0, -1)), std::abs(z - cplx(0, 1))) < 1e-12);
  s = inv_srg_theta_sample(diag({2.0, cplx(1, 1)}), 0, 50, 64, rng);
  CHECK(has_point(s, 0.5, 1e-6));
  CHECK(has_point(s, cplx(0.5, -0.5), 1e-6));
  CHECK_THROWS_AS(inv_srg_theta_sample(MatC::Zero(2, 2), 0, 10, 10, rng), InputError);
}

TEST_CASE("paraboloidal bound and projection consistency") {
  Rng rng(4);
  std::uniform_real_distribution<double> th(-kPi, kPi);
  for (int i = 0; i < 20000; ++i) {
    const int n = 1 + i % 5;
    const MatC m = random_matrix(n, rng);
    const VecC u = random_unit_vector(n, rng);
    const DwPoint p = dw_point(m, u);
    REQUIRE(p.nu >= std::norm(p.z) - 1e-9);
    const double t = th(rng);
    auto [a, b] = project_theta(p, t);
    auto [c, d] = srg_theta_pair(m, u, t);
    REQUIRE(std::abs(a - c) < 1e-12 * std::max(1.0, std::abs(a)));
    REQUIRE(std::abs(b - d) < 1e-12 * std::max(1.0, std::abs(b)));
    // Scaling.
    auto [e, f] = srg_theta_pair(2.5 * m, u, t);
    REQUIRE(std::abs(e - 2.5 * c) < 1e-12 * std::max(1.0, std::abs(e)));
  }
}

TEST_CASE("unitary invariance of the support function") {
  Rng rng(5);
  const auto dirs = fibonacci_sphere(200);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 3;
    const MatC m = random_matrix(n, rng);
    const MatC u = haar_unitary(n, rng);
    REQUIRE((u.adjoint() * u - MatC::Identity(n, n)).norm() < 1e-12);
    const MatC mm = u.adjoint() * m * u;
    for (const auto& d : dirs) {
      REQUIRE(std::abs(dw_support(m, d[0], d[1], d[2]) - dw_support(mm, d[0], d[1], d[2])) < 1e-9);
    }
  }
}

TEST_CASE("normal matrix shells lie in the hull of eigen-lift points") {
  Rng rng(6);
  const auto dirs = fibonacci_sphere(300);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 3;
    std::normal_distribution<double> g;
    std::vector<cplx> lam;
    MatC d = MatC::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = cplx(g(rng), g(rng)), lam.push_back(d(i, i));
    const MatC u = haar_unitary(n, rng);
    const MatC m = u.adjoint() * d * u;
    for (const auto& dir : dirs) {
      double hull = -kInf;
      for (cplx l : lam) hull = std::max(hull, dir[0] * l.real() + dir[1] * l.imag() + dir[2] * std::norm(l));
      REQUIRE(std::abs(dw_support(m, dir[0], dir[1], dir[2]) - hull) < 1e-9);
    }
  }
}

TEST_CASE("inverse identity") {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + t % 4;
    const MatC m = random_matrix(n, rng) + 3.0 * MatC::Identity(n, n);
    const MatC mi = m.inverse();
    const double th = 0.3 * t;
    for (int k = 0; k < 20; ++k) {
      const VecC u = random_unit_vector(n, rng);
      auto [a, b] = project_theta(f_inv(dw_point(m, u)), th);
      // The matching vector for the inverse is w = M u.
      auto [c, d] = srg_theta_pair(mi, m * u, th);
      REQUIRE(std::min(std::abs(a - c), std::abs(a - d)) < 1e-9);
      REQUIRE(std::min(std::abs(b - c), std::abs(b - d)) < 1e-9);
    }
  }
}

TEST_CASE("slicer matches sampled slices") {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 3;
    const MatC m = random_matrix(n, rng);
    const double th = -1.0 + 0.1 * t;
    const ShellSlicer s(m, th);
    const ShellSlicer* sp = &s;
    // Every sampled point lies inside the exact deviation interval of its circle.
    for (int k = 0; k < 300; ++k) {
      const VecC u = random_unit_vector(n, rng);
      auto [z, w] = srg_theta_pair(m, u, th);
      const double rho = std::abs(z);
      const auto dev = srg_deviation(*sp, rho);
      REQUIRE(dev);
      const double d = std::abs(wrap_angle(std::arg(z) - th));
      REQUIRE(d >= dev->first - 1e-6);
      REQUIRE(d <= dev->second + 1e-6);
    }
    // find_vector reproduces targets inside the slice.
    const double nu = 0.5 * (s.nu_min() + s.nu_max());
    const auto xr = s.x_range(nu);
    REQUIRE(xr);
    for (double f : {0.0, 0.3, 1.0}) {
      const double x = xr->first + f * (xr->second - xr->first);
      const auto y = s.find_vector(nu, x);
      REQUIRE(y);
      CHECK(std::abs(std::real(y->dot(s.k() * *y)) - nu) < 1e-9 * s.nu_max());
      CHECK(std::abs(std::real(y->dot(s.h() * *y)) - x) < 1e-9 * s.nu_max());
    }
  }
}

TEST_CASE("theta_angle examples") {
  CHECK(theta_angle(MatC::Identity(2, 2), 0) == doctest::Approx(0).epsilon(1e-9));
  CHECK(theta_angle(expi(kPi / 3) * MatC::Identity(2, 2), 0) == doctest::Approx(kPi / 3));
  const auto b = theta_angle_bounds(diag({1.0, cplx(0, 1)}), 0);
  CHECK(b.value == doctest::Approx(kPi / 2));
  CHECK(b.upper >= b.lower);
}

TEST_CASE("theta_angle agrees with brute force and brackets it") {
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 3;
    const MatC m = random_matrix(n, rng) + 2.0 * MatC::Identity(n, n);
    const double th = 0.2 * (t % 7) - 0.6;
    const auto b = theta_angle_bounds(m, th, 1e-6);
    double brute = 0.0;
    for (int k = 0; k < 20000; ++k) {
      auto [z, w] = srg_theta_pair(m, random_unit_vector(n, rng), th);
      brute = std::max(brute, std::abs(wrap_angle(std::arg(z) - th)));
    }
    REQUIRE(b.upper >= brute - 1e-9);
    REQUIRE(b.upper - b.lower <= 1e-5);
    REQUIRE(b.value >= brute - 5e-2);
  }
}

TEST_CASE("dw_union_region layer examples") {
  const Region d = Region::disc(0, 1.5);
  for (const auto& l : dw_union_region(d, UnionMode::Theta, 0.4, 32, 2)) {
    CHECK(l.contains(0.0));
    CHECK(l.contains(std::polar(l.gamma, 1.0)));
    CHECK_FALSE(l.contains(std::polar(l.gamma + 1e-3, 1.0)));
  }
  // Cone about its bisector: layer at nu = gamma^2 is the chord band Re w >= gamma cos(b - a)/2.
  const double a = 0.2, b = 1.0, th = 0.6;
  const auto layers = dw_union_region(Region::cone(a, b), UnionMode::Theta, th, 16, 2);
  REQUIRE(!layers.empty());
  for (const auto& l : layers) {
    const double g = l.gamma;
    const cplx in = expi(th) * cplx(g * (std::cos(0.4) + 1e-6), 0.0);
    const cplx out = expi(th) * cplx(g * (std::cos(0.4) - 1e-6), 0.0);
    if (g < 1e-6) continue;
    CHECK(l.contains(in, 1e-9));
    CHECK_FALSE(l.contains(out, 1e-9));
  }
  // Sector is the intersection of the two.
  const auto sl = dw_union_layer(Region::sector(2.0, a, b), UnionMode::Theta, th, 2, 2.5);
  CHECK(sl.empty());
  // Scalar case keeps only the circle.
  const auto l1 = dw_union_layer(Region::disc(0, 1), UnionMode::Theta, 0, 1, 0.5);
  CHECK(l1.contains(std::polar(0.5, 2.0)));
  CHECK_FALSE(l1.contains(0.2));
}
