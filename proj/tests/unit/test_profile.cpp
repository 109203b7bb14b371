#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "srgrobust/profile.hpp"

using namespace srg;
using namespace srg::profile;

namespace {

StateSpace first_order(double k, double d = 0.0) {
  return {MatR::Constant(1, 1, -1.0), MatR::Constant(1, 1, 1.0), MatR::Constant(1, 1, k), MatR::Constant(1, 1, d)};
}

// Smallest half-angle about theta covering every Nyquist point of a scalar plant outside D_gamma.
double scalar_cone_oracle(const StateSpace& sys, double theta, double gamma) {
  double best = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double w = i == 20000 ? kInf : std::pow(10.0, -4.0 + 8.0 * i / 19999.0);
    const cplx z = lti::freq_response(sys, w)(0, 0);
    if (std::abs(z) > gamma) best = std::max(best, std::abs(std::arg(z * expi(-theta))));
  }
  return best;
}

ThetaProfile small_profile() {
  ThetaProfile p;
  p.meta.n_theta = 2;
  p.meta.n_gamma = 4;
  p.meta.err = 1e-3;
  p.meta.hinf = 2.0;
  ProfileSlice a;
  a.theta = -kPi;
  a.flag = kFlagDegenerate;
  a.gamma = {0.0, 2.0, 2.0};
  a.phi = {kPi / 2, kPi / 2, kPi};
  a.lambda = {0.0, 0.0, 0.0};
  ProfileSlice b;
  b.theta = 0.1;
  b.gamma = {0.5, 1.0 / 3.0, 1.5, 2.0};
  b.phi = {0.3, std::nextafter(0.2, 1.0), 0.1, 0.0};
  b.lambda = {1.0, 0.7, 1e-300, 0.0};
  b.note = "x";
  p.slices = {a, b};
  return p;
}

}  // namespace

TEST_CASE("phi_bst root") {
  CHECK(solve_phi_bst(1.0) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(solve_phi_bst(1.0 + std::sqrt(2.0)) == doctest::Approx(kPi / 4).epsilon(1e-10));
  for (double p : {0.1, 0.7, 1.3}) CHECK(solve_phi_bst((1 + std::sin(p)) / std::cos(p)) == doctest::Approx(p).epsilon(1e-9));
  CHECK_THROWS_AS(solve_phi_bst(0.5), InputError);
}

TEST_CASE("refine_brackets examples") {
  Brackets b = refine_brackets({1.0, 1.0, 1.0}, {0.4, 0.0, 0.0}, {0.5, 0.0, 0.0}, 1);
  CHECK(b.wst == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(b.bst == doctest::Approx(0.0).epsilon(1e-10));
  CHECK_FALSE(b.wst_clamped);

  b = refine_brackets({1.0, 1.0, 1.0 + std::sqrt(2.0)}, {1.2, 0.0, 0.0}, {0.5, 0.0, 0.0}, 1);
  CHECK(b.bst == doctest::Approx(kPi / 4).epsilon(1e-10));
  CHECK(b.wst == doctest::Approx(1.2));

  // Zero multiplier leaves the full bracket.
  b = refine_brackets({1.0, 1.5, 2.0}, {0.4, 0.0, 0.0}, {0.0, 0.0, 0.0}, 1);
  CHECK(b.bst == 0.0);
  CHECK(b.wst == doctest::Approx(kPi / 2));

  // An arccos argument above one is clamped and the bracket is kept ordered.
  b = refine_brackets({1.0, 1.5, 4.0}, {0.05, 0.0, 0.0}, {1.0, 0.0, 0.0}, 1);
  CHECK(b.wst_clamped);
  CHECK(b.wst == 0.0);
  CHECK(b.bst_clamped);
  CHECK(b.bst <= b.wst);

  CHECK_THROWS_AS(refine_brackets({1.0, 2.0}, {0.0, 0.0}, {1.0, 0.0}, 2), InputError);
}

TEST_CASE("complementary profile examples") {
  ThetaProfile p;
  ProfileSlice s;
  s.theta = 0.2;
  s.gamma = {1.0, 2.0, 0.0};
  s.phi = {kPi / 2, kPi / 4, kPi};
  s.lambda = {0.0, 0.0, 0.0};
  p.slices = {s};
  const auto c = complementary_profile(p);
  CHECK(c.slices[0].theta == 0.2);
  CHECK(c.slices[0].gamma[0] == 1.0);
  CHECK(c.slices[0].phi[0] == doctest::Approx(kPi / 2));
  CHECK(c.slices[0].gamma[1] == 0.5);
  CHECK(c.slices[0].phi[1] == doctest::Approx(3 * kPi / 4));
  CHECK(std::isinf(c.slices[0].gamma[2]));
  CHECK(c.slices[0].phi[2] == 0.0);
}

TEST_CASE("first-order plant slices") {
  const auto sys = first_order(1.0);
  Options opt;
  opt.n_gamma = 8;
  ProfileMeta counts;

  // Nyquist circle through the origin: pure-gain floor, then the arccos(gamma) cone-fit curve.
  const auto s0 = compute_slice(sys, 0.0, 1.0, opt, counts);
  CHECK(s0.flag == kFlagConic);
  CHECK(s0.gamma[0] < 2e-3);
  CHECK(s0.lambda[0] > 0.85);
  CHECK(s0.phi[0] == doctest::Approx(kPi / 2));
  for (int k = 1; k + 1 < opt.n_gamma; ++k) {
    CHECK(s0.phi[k] == doctest::Approx(std::acos(s0.gamma[k])).epsilon(2e-3));
    CHECK(s0.phi[k] >= scalar_cone_oracle(sys, 0.0, s0.gamma[k]) - opt.err);
  }
  CHECK(s0.gamma.back() == 1.0);
  CHECK(s0.phi.back() == 0.0);

  const auto sp = compute_slice(sys, kPi, 1.0, opt, counts);
  CHECK(sp.flag == kFlagDegenerate);
  CHECK(sp.gamma == std::vector<double>{0.0, 1.0, 1.0});
  CHECK(sp.phi == std::vector<double>{kPi / 2, kPi / 2, kPi});
  CHECK(sp.lambda == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("regular slice is sound against the cone-fit oracle") {
  const auto sys = first_order(1.0, 1.0);  // (s + 2) / (s + 1)
  Options opt;
  opt.n_gamma = 8;
  ProfileMeta counts;
  for (double theta : {0.0, 0.3}) {
    const auto s = compute_slice(sys, theta, 2.0, opt, counts);
    CHECK(s.flag == kFlagRegular);
    CHECK(s.phi0 >= scalar_cone_oracle(sys, theta, 0.0) - opt.err);
    CHECK(s.phi0 <= scalar_cone_oracle(sys, theta, 0.0) + 2 * opt.err);
    CHECK(s.lambda[0] == 1.0);
    for (int k = 0; k < opt.n_gamma; ++k) {
      CHECK(s.phi[k] >= scalar_cone_oracle(sys, theta, s.gamma[k]) - opt.err);
      if (k > 0) CHECK(s.gamma[k] >= s.gamma[k - 1]);
    }
  }
  // Step 2 at theta = 0: the disc of centre 1.5 and radius 0.5 fits the cone of half-angle asin(1/3).
  const auto s = compute_slice(sys, 0.0, 2.0, opt, counts);
  CHECK(s.phi0 == doctest::Approx(std::asin(1.0 / 3.0)).epsilon(3e-3));
  CHECK(s.c_theta == doctest::Approx(1.5).epsilon(1e-2));
  CHECK(s.gamma[0] == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("profile assembly") {
  Options opt;
  opt.n_theta = 4;
  opt.n_gamma = 5;
  const auto p = compute_profile(first_order(1.0), opt);
  REQUIRE(p.slices.size() == 4);
  CHECK(p.slices[0].theta == -kPi);
  CHECK(p.slices[2].theta == 0.0);
  CHECK(p.meta.hinf == doctest::Approx(1.0).epsilon(1e-6));
  for (const auto& s : p.slices) {
    CHECK(s.gamma.back() == p.meta.hinf);
    for (double f : s.phi) CHECK((f >= 0.0 && f <= kPi));
    for (double l : s.lambda) CHECK((l >= 0.0 && l <= 1.0));
  }
  size_t rows = 0;
  for (const auto& s : p.slices) rows += s.gamma.size();
  CHECK(p.rows() == rows);

  opt.n_gamma = 2;
  CHECK_THROWS_AS(compute_profile(first_order(1.0), opt), InputError);
  opt.n_gamma = 5;
  opt.err = 0.0;
  CHECK_THROWS_AS(compute_profile(first_order(1.0), opt), InputError);
}

TEST_CASE("export round trip") {
  const auto p = small_profile();
  const std::string csv = to_csv(p);
  CHECK(csv.rfind("theta,k,gamma,phi,lambda,flag\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 7);
  CHECK(csv.find("degenerate-gain-only") != std::string::npos);
  CHECK(same_surface(from_csv(csv), p));
  CHECK(to_csv(from_csv(csv)) == csv);

  const std::string js = to_json(p);
  const auto q = from_json(js);
  CHECK(same_surface(q, p));
  CHECK(q.meta.hinf == 2.0);
  CHECK(q.slices[1].note == "x");
  CHECK(to_json(q) == js);

  auto c = complementary_profile(p);
  CHECK(same_surface(from_json(to_json(c)), c));

  auto r = p;
  r.slices[1].phi[1] = 0.2;
  CHECK_FALSE(same_surface(r, p));

  const auto dir = std::filesystem::temp_directory_path();
  for (const char* name : {"srgrobust_profile_test.csv", "srgrobust_profile_test.json"}) {
    const std::string path = (dir / name).string();
    export_profile(p, format_from_path(path), path);
    CHECK(same_surface(import_profile(path), p));
    std::remove(path.c_str());
  }
  CHECK_THROWS_AS(format_from_path("p.txt"), InputError);
  CHECK_THROWS_AS(from_csv("bad\n"), InputError);
  CHECK_THROWS_AS(from_csv("theta,k,gamma,phi,lambda,flag\n0,2,1,1,1,regular\n"), InputError);
  CHECK_THROWS_AS(from_json("{"), InputError);
}
