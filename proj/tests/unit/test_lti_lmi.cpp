#include "doctest.h"
#include "srgrobust/lmi.hpp"
#include "srgrobust/lti.hpp"

using namespace srg;
using namespace srg::lti;
using geometry::Region;

namespace {

StateSpace first_order(double k, double d = 0.0) {
  return {MatR::Constant(1, 1, -1.0), MatR::Constant(1, 1, 1.0), MatR::Constant(1, 1, k), MatR::Constant(1, 1, d)};
}

StateSpace example_system() {
  StateSpace s;
  s.a = MatR::Zero(3, 3);
  s.a.diagonal() << -3, -2, -1;
  s.b.resize(3, 2);
  s.b << 1, 0, 1, 0, 0, 1;
  s.c.resize(2, 3);
  s.c << 1, 0, 0, 0, -1, -1;
  s.d.resize(2, 2);
  s.d << 0, 0, 0.5, 1;
  return s;
}

// Dense-grid value of sup_w sigma_max(G(jw) - c e^{i theta} I), including w = 0 and infinity.
double grid_disc_radius(const StateSpace& sys, double theta, double c, int n = 4000) {
  const MatC shift = c * expi(theta) * MatC::Identity(sys.n(), sys.n());
  double best = dw::sigma_max(freq_response(sys, kInf) - shift);
  best = std::max(best, dw::sigma_max(freq_response(sys, 0.0) - shift));
  for (int i = 0; i < n; ++i) {
    const double w = std::pow(10.0, -4.0 + 9.0 * i / (n - 1));
    best = std::max(best, dw::sigma_max(freq_response(sys, w) - shift));
  }
  return best;
}

}  // namespace

TEST_CASE("frequency response examples") {
  const StateSpace ex = example_system();
  MatC g0(2, 2);
  g0 << 1.0 / 3.0, 0.0, 0.0, 0.0;
  CHECK((freq_response(ex, 0.0) - g0).norm() < 1e-14);
  CHECK((freq_response(ex, kInf) - ex.d.cast<cplx>()).norm() == 0.0);
  CHECK(std::abs(freq_response(first_order(1.0), 1.0)(0, 0) - cplx(0.5, -0.5)) < 1e-15);
  CHECK_THROWS_AS(freq_response(ex, -1.0), InputError);
}

TEST_CASE("state-space validation") {
  StateSpace s = first_order(1.0);
  s.a(0, 0) = 0.0;
  CHECK_THROWS_AS(s.validate(), InputError);
  s = first_order(1.0);
  s.b = MatR::Zero(2, 1);
  CHECK_THROWS_AS(s.validate(), InputError);
  const StateSpace g = StateSpace::static_gain(MatR::Identity(2, 2));
  CHECK_NOTHROW(g.validate());
  CHECK((freq_response(g, 3.0) - MatC::Identity(2, 2)).norm() == 0.0);
  dw::Rng rng(5);
  for (int i = 0; i < 20; ++i) CHECK_NOTHROW(random_stable(1 + i % 6, 1 + i % 3, rng).validate());
}

TEST_CASE("frequency grid") {
  const FrequencyGrid g = FrequencyGrid::standard();
  REQUIRE(g.omegas.size() == 402);
  CHECK(g.omegas.front() == 0.0);
  CHECK(std::isinf(g.omegas.back()));
  for (size_t i = 1; i < g.omegas.size(); ++i) CHECK(g.omegas[i] > g.omegas[i - 1]);
  CHECK(g.omegas[1] == doctest::Approx(1e-3));
  CHECK(g.omegas[400] == doctest::Approx(1e3));
}

TEST_CASE("theta blocks") {
  const StateSpace ex = example_system();
  const int nx = 3, n = 2;
  const MatC c = ex.c.cast<cplx>(), d = ex.d.cast<cplx>();
  const double r = 0.7;
  auto tb = lmi::theta_d(0.0, 0.0, r, ex);
  MatC want(nx + n, nx + n);
  want << c.adjoint() * c, c.adjoint() * d, d.adjoint() * c, d.adjoint() * d - r * r * MatC::Identity(n, n);
  CHECK((tb.matrix - want).norm() < 1e-14);

  tb = lmi::theta_d(0.0, kInf, kInf, ex);
  want.setZero();
  want.topRightCorner(nx, n) = -c.transpose();
  want.bottomLeftCorner(n, nx) = -c;
  want.bottomRightCorner(n, n) = -(d.transpose() + d);
  CHECK((tb.matrix - want).norm() < 1e-14);

  tb = lmi::theta_d(kPi, kInf, kInf, ex);
  CHECK((tb.matrix + want).norm() < 1e-14);

  tb = lmi::theta_d(0.4, 1.3, 0.2, ex);
  CHECK((tb.matrix - tb.matrix.adjoint()).norm() < 1e-12);
  CHECK_THROWS_AS(lmi::theta_d(0.0, kInf, 1.0, ex), InputError);
  CHECK_THROWS_AS(lmi::theta_d(0.0, -1.0, 1.0, ex), InputError);
}

TEST_CASE("real embedding preserves definiteness") {
  dw::Rng rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 5;
    MatC m(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m(i, j) = cplx(g(rng), g(rng));
    const MatC h = m + m.adjoint();
    const VecR ec = Eigen::SelfAdjointEigenSolver<MatC>(h).eigenvalues();
    const VecR er = Eigen::SelfAdjointEigenSolver<MatR>(lmi::real_embedding(h)).eigenvalues();
    for (int i = 0; i < k; ++i) {
      CHECK(er(2 * i) == doctest::Approx(ec(i)).epsilon(1e-10));
      CHECK(er(2 * i + 1) == doctest::Approx(ec(i)).epsilon(1e-10));
    }
  }
}

TEST_CASE("gain computation") {
  CHECK(hinf_norm(first_order(1.0)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(hinf_norm(first_order(1.0, 1.0)) == doctest::Approx(2.0).epsilon(1e-6));
  const HinfResult ex = hinf_norm_detail(example_system());
  CHECK(ex.consistent);
  CHECK(ex.value == doctest::Approx(ex.grid).epsilon(1e-4));
  CHECK(hinf_norm(StateSpace::static_gain(MatR::Zero(2, 2))) == 0.0);

  dw::Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const StateSpace s = random_stable(1 + i % 6, 1 + i % 3, rng);
    const HinfResult h = hinf_norm_detail(s);
    CHECK(h.consistent);
    CHECK(std::abs(h.value - h.grid) <= std::max(1e-6, 1e-4 * h.value));
  }
}

TEST_CASE("single disc feasibility on a first-order plant") {
  const StateSpace s = first_order(1.0);
  CHECK(lmi::disc_feasible(s, 0.0, 0.5, 0.51).feasible);
  const auto in = lmi::disc_feasible(s, 0.0, 0.5, 0.49);
  CHECK_FALSE(in.feasible);
  CHECK(in.status == lmi::CertStatus::Infeasible);
  // Positive real up to the boundary at infinite frequency.
  CHECK(lmi::half_plane(s, 0.0).feasible);
  CHECK_FALSE(lmi::half_plane(s, kPi).feasible);

  // Bisection on r reproduces the Nyquist circle radius.
  double lo = 0.3, hi = 0.7;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (lmi::disc_feasible(s, 0.0, 0.5, mid).feasible ? hi : lo) = mid;
  }
  CHECK(std::abs(hi - 0.5) < 1e-3);
}

TEST_CASE("certificates re-verify independently") {
  const StateSpace s = first_order(1.0, 1.0);
  const auto cert = lmi::disc_feasible(s, 0.0, 1.5, 0.6);
  REQUIRE(cert.feasible);
  CHECK(cert.status == lmi::CertStatus::Feasible);
  lmi::MiProblem prob;
  prob.theta0 = lmi::theta_d(0.0, 1.5, 0.6, s).matrix;
  CHECK(lmi::verify(s, prob, cert) <= -0.5 * lmi::kMargin);
  CHECK(Eigen::SelfAdjointEigenSolver<MatC>(cert.y).eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("c range for an inscribed cone disc") {
  const StateSpace s2 = first_order(1.0, 1.0);
  const auto cr = lmi::c_range_for_phi(s2, 0.0, kPi / 6);
  REQUIRE(cr);
  CHECK(std::abs(cr->c_lo - 4.0 / 3.0) < 1e-3);
  CHECK(std::abs(cr->c_hi - 2.0) < 1e-3);
  CHECK_FALSE(cr->unbounded);
  CHECK_FALSE(lmi::c_range_for_phi(first_order(1.0), 0.0, kPi / 4));
  CHECK_FALSE(lmi::c_range_for_phi(s2, kPi, 0.5));
  const auto half = lmi::c_range_for_phi(s2, 0.0, kPi / 2);
  REQUIRE(half);
  CHECK(half->unbounded);
  CHECK_THROWS_AS(lmi::c_range_for_phi(s2, 0.0, 0.0), InputError);
}

TEST_CASE("mixed gain-angle multiplier") {
  const StateSpace s1 = first_order(1.0), s2 = first_order(1.0, 1.0);
  auto l = lmi::max_lambda_mixed(s2, 2.0 + 1e-3, lmi::theta_d(0.0, kInf, kInf, s2));
  REQUIRE(l);
  CHECK(*l == doctest::Approx(1.0).epsilon(1e-6));
  l = lmi::max_lambda_mixed(s1, 1.0 + 1e-3, lmi::theta_d(kPi, kInf, kInf, s1));
  REQUIRE(l);
  CHECK(*l < 1e-2);
  // Scalar S-procedure oracle: (1 - l)(r^2 - |G|^2) - 2 l Re G >= 0 at w = 0 forces l <= (r^2 - 1) / (r^2 + 1).
  const double r2 = (1.0 + 1e-3) * (1.0 + 1e-3);
  CHECK(*l <= (r2 - 1.0) / (r2 + 1.0) + 1e-5);
  CHECK_FALSE(lmi::max_lambda_mixed(s1, 0.5, lmi::theta_d(kPi, kInf, kInf, s1)));
}

TEST_CASE("angle computation") {
  const auto a0 = hinf_theta_angle(StateSpace::static_gain(MatR::Identity(2, 2)), 0.0, 1e-3);
  CHECK(a0.certified);
  CHECK(a0.value < 1e-3);
  const auto a1 = hinf_theta_angle(first_order(1.0), 0.0, 1e-2);
  CHECK(std::abs(a1.value - kPi / 2) < 1e-2);
  CHECK(a1.upper >= a1.lower);
  const auto a2 = hinf_theta_angle(first_order(1.0, 1.0), 0.0, 1e-3);
  CHECK(a2.certified);
  CHECK(std::abs(a2.value - std::asin(1.0 / 3.0)) < 1e-3);
  // Not positive real: the half-plane test fails and the upper bound is uncertified.
  const auto a3 = hinf_theta_angle(first_order(-1.0), 0.0, 1e-3);
  CHECK(a3.upper == kPi);
  CHECK(a3.lower == doctest::Approx(kPi).epsilon(1e-3));
}

TEST_CASE("LMI disc feasibility agrees with the grid") {
  dw::Rng rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int agree = 0, total = 0;
  for (int i = 0; i < 12; ++i) {
    const StateSpace s = random_stable(1 + i % 6, 1 + i % 3, rng);
    const double theta = -kPi + 2 * kPi * u(rng);
    const double c = 2.0 * u(rng);
    const double rg = grid_disc_radius(s, theta, c);
    for (double f : {0.9, 1.1}) {
      const auto cert = lmi::disc_feasible(s, theta, c, f * rg);
      REQUIRE(cert.status != lmi::CertStatus::Numerical);
      ++total;
      agree += cert.feasible == (f > 1.0);
    }
  }
  CHECK(agree == total);
}

TEST_CASE("robust stability examples") {
  const FrequencyGrid grid = FrequencyGrid::standard();
  auto v = rs_check_theta(
      first_order(0.5), [](double) { return Region::disc(0.0, 1.0); }, [](double) { return 0.0; }, grid);
  CHECK(v.robustly_stable);
  CHECK(v.margin == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(v.margin > 0.0);
  CHECK(v.detail.size() == grid.omegas.size());
  CHECK(v.note == "sufficient at grid resolution");

  const StateSpace ident = StateSpace::static_gain(MatR::Identity(2, 2));
  v = rs_check_theta(
      ident, [](double) { return Region::cone(-kPi / 4, kPi / 4); }, [](double) { return 0.0; }, grid);
  CHECK(v.robustly_stable);

  v = rs_check_theta(
      first_order(-1.0), [](double) { return Region::disc(0.0, 1.0); }, [](double) { return 0.0; }, grid);
  CHECK_FALSE(v.robustly_stable);
  CHECK(v.worst_frequency == 0.0);
  CHECK(std::abs(v.margin) < 1e-6);

  CHECK_THROWS_AS(rs_check_theta(
                      ident, [](double) { return Region::disc(cplx(0.0, 0.5), 0.1); }, [](double) { return 0.0; },
                      grid),
                  InputError);
}

TEST_CASE("named robust stability and the gain") {
  const FrequencyGrid grid = FrequencyGrid::standard();
  CHECK(rs_check_named(first_order(0.5), mrn::Shape::disc(1.0), grid).robustly_stable);
  CHECK(rs_check_named(StateSpace::static_gain(MatR::Identity(2, 2)), mrn::Shape::cone(-kPi / 4, kPi / 4), grid)
            .robustly_stable);
  const auto sec = rs_check_named(first_order(1.0, 1.0), mrn::Shape::sector(0.4, -kPi / 6, kPi / 6), grid);
  CHECK(sec.robustly_stable == (sec.margin > 0.0));

  dw::Rng rng(23);
  for (int i = 0; i < 8; ++i) {
    const StateSpace s = random_stable(1 + i % 4, 1 + i % 2, rng);
    const double h = hinf_norm(s);
    for (double f : {0.8, 1.2}) {
      const double gamma = f / h;
      const bool rs = rs_check_named(s, mrn::Shape::disc(gamma), grid).robustly_stable;
      CHECK(rs == (h < 1.0 / gamma - 1e-6));
    }
  }
}

TEST_CASE("general check coincides with the theta check on symmetric connected regions") {
  const FrequencyGrid grid = FrequencyGrid::log(1e-2, 1e2, 60);
  const StateSpace s = first_order(1.0, 1.0);
  auto region = [](double) { return Region::sector(0.3, -kPi / 5, kPi / 5); };
  auto zero = [](double) { return 0.0; };
  const auto a = rs_check_theta(s, region, zero, grid);
  const auto b = rs_check_general(s, region, zero, grid);
  CHECK(a.robustly_stable == b.robustly_stable);
  CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-6));

  // An off-axis point set is inflated to a conjugate pair by the hull.
  auto pts = [](double) { return Region::point_set({cplx(-0.2, 0.95)}); };
  const auto raw = rs_check_general(StateSpace::static_gain(MatR::Identity(1, 1)), pts, zero, grid);
  const auto disc = rs_check_general(
      first_order(0.5), [](double) { return Region::disc(0.0, 1.0); }, [](double) { return 1.0; }, grid);
  CHECK(disc.robustly_stable);
  CHECK(raw.robustly_stable);
}
