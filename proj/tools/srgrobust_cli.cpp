#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "srgrobust/dwshell.hpp"
#include "srgrobust/io.hpp"
#include "srgrobust/lti.hpp"
#include "srgrobust/mrn.hpp"
#include "srgrobust/plot.hpp"
#include "srgrobust/profile.hpp"

using namespace srg;
using io::Json;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInput = 2, kSolver = 3 };

struct Config {
  std::string matrix, ss, region, profile, shape, mode = "theta", grid = "log:1e-3:1e3:400", out, plot;
  double gamma = 1.0, alpha = 0.0, beta = 0.0, theta = 0.0, tol = 1e-3;
  int directions = 1024, samples = -1, ntheta = 64, ngamma = 16, threads = 0;
  uint64_t seed = 1;
  bool assert_verdict = false;
};

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (!out.empty()) io::write_text(out, text);
  std::cout << text;
}

mrn::Shape named_shape(const Config& c) {
  if (c.shape == "disc") return mrn::Shape::disc(c.gamma);
  if (c.shape == "cone") return mrn::Shape::cone(c.alpha, c.beta);
  if (c.shape == "sector") return mrn::Shape::sector(c.gamma, c.alpha, c.beta);
  throw InputError("unknown shape '" + c.shape + "' (expected disc, cone or sector)");
}

void require(const std::string& v, const char* flag) {
  if (v.empty()) throw InputError(std::string("missing required option ") + flag);
}

void need_shape_or_region(const Config& c) {
  if (c.shape.empty() == c.region.empty()) throw InputError("give exactly one of --shape or --region");
  if (!c.region.empty() && c.mode != "theta" && c.mode != "general")
    throw InputError("--mode must be theta or general");
}

int run_srg(const Config& c) {
  require(c.matrix, "--matrix");
  const MatC g = io::matrix_from_json(io::load_json(c.matrix));
  if (g.rows() != g.cols() || g.rows() == 0) throw InputError("matrix must be square and nonempty");
  dw::Rng rng(c.seed);
  const int n_random = c.samples < 0 ? 2000 : c.samples;
  const auto pts = dw::srg_theta_sample(g, c.theta, n_random, c.directions, rng);
  if (!c.out.empty()) {
    std::string csv = "re,im\n";
    for (const auto& z : pts) csv += io::fmt(z.real()) + "," + io::fmt(z.imag()) + "\n";
    io::write_text(c.out, csv);
  }
  if (!c.plot.empty()) io::write_text(c.plot, plot::points_svg(pts, "theta-SRG, theta = " + io::fmt(c.theta)));
  Json j;
  j["theta"] = c.theta;
  j["points"] = pts.size();
  j["sigma_min"] = dw::sigma_min(g);
  j["sigma_max"] = dw::sigma_max(g);
  j["theta_angle"] = dw::theta_angle(g, c.theta);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int run_dwshell(const Config& c) {
  require(c.matrix, "--matrix");
  const MatC g = io::matrix_from_json(io::load_json(c.matrix));
  if (g.rows() != g.cols() || g.rows() == 0) throw InputError("matrix must be square and nonempty");
  dw::Rng rng(c.seed);
  const auto cloud = dw::dw_sample(g, c.samples < 0 ? 0 : c.samples, c.directions, rng);
  if (!c.out.empty()) dw::write_cloud_csv(cloud, c.out);
  double slack = kInf;
  for (const auto& p : cloud.points) slack = std::min(slack, p.nu - std::norm(p.z));
  Json j;
  j["points"] = cloud.points.size();
  j["min_nu_minus_abs2"] = cloud.points.empty() ? Json("inf") : Json(slack);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int run_mrn(const Config& c) {
  require(c.matrix, "--matrix");
  need_shape_or_region(c);
  const MatC g = io::matrix_from_json(io::load_json(c.matrix));
  if (g.rows() != g.cols() || g.rows() == 0) throw InputError("matrix must be square and nonempty");
  mrn::MrnVerdict v;
  geometry::Region x;
  const bool general = !c.region.empty() && c.mode == "general";
  if (!c.shape.empty()) {
    const auto s = named_shape(c);
    v = mrn::mrn_check_named(g, s);
    x = s.region();
  } else {
    x = io::region_from_json(io::load_json(c.region));
    v = general ? mrn::mrn_check_general(g, x, c.theta) : mrn::mrn_check_theta(g, x, c.theta);
  }
  Json j = io::verdict_to_json(v);
  if (c.samples > 0) {
    dw::Rng rng(c.seed);
    mrn::UncertaintySpec spec{x, general ? mrn::Mode::General : mrn::Mode::ThetaFixed, c.theta, int(g.rows())};
    j["bruteforce"] = io::verdict_to_json(mrn::mrn_bruteforce(g, spec, c.samples, 64, rng));
  }
  emit(j, c.out);
  return c.assert_verdict && !v.holds ? kNegative : kOk;
}

int run_rs(const Config& c) {
  require(c.ss, "--ss");
  need_shape_or_region(c);
  const auto sys = io::state_space_from_json(io::load_json(c.ss));
  const auto grid = io::parse_grid(c.grid);
  lti::RsVerdict v;
  if (!c.shape.empty()) {
    v = lti::rs_check_named(sys, named_shape(c), grid);
  } else {
    const auto x = io::region_from_json(io::load_json(c.region));
    const double t = c.theta;
    auto xf = [x](double) { return x; };
    auto tf = [t](double) { return t; };
    v = c.mode == "general" ? lti::rs_check_general(sys, xf, tf, grid) : lti::rs_check_theta(sys, xf, tf, grid);
  }
  Json j = io::verdict_to_json(v);
  if (!c.out.empty()) io::write_text(c.out, j.dump(2) + "\n");
  j.erase("detail");
  std::cout << j.dump(2) << "\n";
  return c.assert_verdict && !v.robustly_stable ? kNegative : kOk;
}

void write_profile_plots(const profile::ThetaProfile& p, const std::string& path) {
  const std::filesystem::path base(path);
  const auto comp = (base.parent_path() / (base.stem().string() + "_complementary" + base.extension().string()));
  io::write_text(path, plot::profile_svg(p, "theta-phi-gamma profile"));
  io::write_text(comp.string(), plot::profile_svg(profile::complementary_profile(p), "theta-(pi-phi)-1/gamma profile"));
}

int run_profile(const Config& c) {
  require(c.ss, "--ss");
  require(c.out, "--out");
  const auto fmt = profile::format_from_path(c.out);
  const auto sys = io::state_space_from_json(io::load_json(c.ss));
  profile::Options opt;
  opt.n_theta = c.ntheta;
  opt.n_gamma = c.ngamma;
  opt.err = c.tol;
  opt.threads = c.threads;
  const auto p = profile::compute_profile(sys, opt);
  profile::export_profile(p, fmt, c.out);
  if (!c.plot.empty()) write_profile_plots(p, c.plot);
  Json j;
  j["n_theta"] = p.meta.n_theta;
  j["n_gamma"] = p.meta.n_gamma;
  j["err"] = p.meta.err;
  j["hinf"] = p.meta.hinf;
  j["rows"] = p.rows();
  Json flags;
  for (const auto& f : {profile::kFlagRegular, profile::kFlagConic, profile::kFlagDegenerate, profile::kFlagFailure})
    flags[f] = 0;
  for (const auto& s : p.slices) flags[s.flag] = flags[s.flag].get<int>() + 1;
  j["flags"] = flags;
  j["amgm_fallbacks"] = p.meta.amgm_fallbacks;
  j["wst_clamps"] = p.meta.wst_clamps;
  j["bracket_clamps"] = p.meta.bracket_clamps;
  j["bracket_misses"] = p.meta.bracket_misses;
  std::cout << j.dump(2) << "\n";
  std::fprintf(stderr, "runtime %.2f s\n", p.meta.runtime_s);
  return p.meta.solver_failures > 0 ? kSolver : kOk;
}

int run_plot(const Config& c) {
  require(c.out, "--out");
  if (!c.profile.empty()) {
    auto p = profile::import_profile(c.profile);
    if (c.mode == "complementary") {
      io::write_text(c.out, plot::profile_svg(profile::complementary_profile(p), "theta-(pi-phi)-1/gamma profile"));
    } else if (c.mode == "theta" || c.mode == "profile") {
      io::write_text(c.out, plot::profile_svg(p, "theta-phi-gamma profile"));
    } else {
      throw InputError("plot --mode must be profile or complementary");
    }
    return kOk;
  }
  if (!c.matrix.empty()) {
    const MatC g = io::matrix_from_json(io::load_json(c.matrix));
    if (g.rows() != g.cols() || g.rows() == 0) throw InputError("matrix must be square and nonempty");
    dw::Rng rng(c.seed);
    const auto pts = dw::srg_theta_sample(g, c.theta, c.samples < 0 ? 2000 : c.samples, c.directions, rng);
    io::write_text(c.out, plot::points_svg(pts, "theta-SRG, theta = " + io::fmt(c.theta)));
    return kOk;
  }
  throw InputError("plot needs --profile or --matrix");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scaled relative graph and Davis-Wielandt shell robustness analysis"};
  app.require_subcommand(1);
  Config c;

  auto add_seed = [&](CLI::App* s) { s->add_option("--seed", c.seed, "Seed of the single random stream"); };
  auto add_shape = [&](CLI::App* s) {
    s->add_option("--shape", c.shape, "Named uncertainty shape: disc, cone or sector");
    s->add_option("--gamma", c.gamma, "Disc or sector radius")->check(CLI::NonNegativeNumber);
    s->add_option("--alpha", c.alpha, "Lower angle of a cone or sector");
    s->add_option("--beta", c.beta, "Upper angle of a cone or sector");
    s->add_option("--region", c.region, "Region JSON file")->check(CLI::ExistingFile);
    s->add_option("--mode", c.mode, "Uncertainty class for --region: theta or general");
    s->add_option("--theta", c.theta, "Projection angle theta");
    s->add_flag("--assert", c.assert_verdict, "Exit with status 1 on a negative verdict");
  };

  auto* srg_cmd = app.add_subcommand("srg", "Sample the theta-SRG of a matrix");
  srg_cmd->add_option("--matrix", c.matrix, "Matrix JSON file")->check(CLI::ExistingFile);
  srg_cmd->add_option("--theta", c.theta, "Projection angle theta");
  srg_cmd->add_option("--samples", c.samples, "Random unit vectors (default 2000)");
  srg_cmd->add_option("--directions", c.directions, "Support directions on the DW sphere");
  srg_cmd->add_option("--out", c.out, "CSV of sampled points (re, im)");
  srg_cmd->add_option("--plot", c.plot, "SVG scatter of the sampled points");
  add_seed(srg_cmd);

  auto* dw_cmd = app.add_subcommand("dwshell", "Sample the Davis-Wielandt shell of a matrix");
  dw_cmd->add_option("--matrix", c.matrix, "Matrix JSON file")->check(CLI::ExistingFile);
  dw_cmd->add_option("--directions", c.directions, "Support directions on the DW sphere");
  dw_cmd->add_option("--samples", c.samples, "Additional random unit vectors");
  dw_cmd->add_option("--out", c.out, "CSV of (re_z, im_z, nu)");
  add_seed(dw_cmd);

  auto* mrn_cmd = app.add_subcommand("mrn", "Matrix robust nonsingularity");
  mrn_cmd->add_option("--matrix", c.matrix, "Matrix JSON file")->check(CLI::ExistingFile);
  add_shape(mrn_cmd);
  mrn_cmd->add_option("--samples", c.samples, "Also run a brute-force search with this many samples");
  mrn_cmd->add_option("--out", c.out, "Verdict JSON");
  add_seed(mrn_cmd);

  auto* rs_cmd = app.add_subcommand("rs", "Robust stability of a state-space system");
  rs_cmd->add_option("--ss", c.ss, "State-space JSON file")->check(CLI::ExistingFile);
  add_shape(rs_cmd);
  rs_cmd->add_option("--grid", c.grid, "Frequency grid log:lo:hi:n");
  rs_cmd->add_option("--out", c.out, "Verdict JSON with the per-frequency detail");

  auto* prof_cmd = app.add_subcommand("profile", "Theta-phi-gamma robustness profile");
  prof_cmd->add_option("--ss", c.ss, "State-space JSON file")->check(CLI::ExistingFile);
  prof_cmd->add_option("--ntheta", c.ntheta, "Theta samples")->check(CLI::PositiveNumber);
  prof_cmd->add_option("--ngamma", c.ngamma, "Gain samples per slice")->check(CLI::Range(3, 1 << 20));
  prof_cmd->add_option("--tol", c.tol, "Bisection error bound")->check(CLI::PositiveNumber);
  prof_cmd->add_option("--threads", c.threads, "Worker threads (0 selects the hardware count)");
  prof_cmd->add_option("--out", c.out, "Profile file, .csv or .json");
  prof_cmd->add_option("--plot", c.plot, "SVG of the profile; the complementary profile goes next to it");

  auto* plot_cmd = app.add_subcommand("plot", "Static SVG of a stored profile or a matrix theta-SRG");
  plot_cmd->add_option("--profile", c.profile, "Profile file, .csv or .json")->check(CLI::ExistingFile);
  plot_cmd->add_option("--mode", c.mode, "profile or complementary");
  plot_cmd->add_option("--matrix", c.matrix, "Matrix JSON file")->check(CLI::ExistingFile);
  plot_cmd->add_option("--theta", c.theta, "Projection angle theta");
  plot_cmd->add_option("--samples", c.samples, "Random unit vectors (default 2000)");
  plot_cmd->add_option("--directions", c.directions, "Support directions on the DW sphere");
  plot_cmd->add_option("--out", c.out, "SVG file");
  add_seed(plot_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }

  try {
    if (srg_cmd->parsed()) return run_srg(c);
    if (dw_cmd->parsed()) return run_dwshell(c);
    if (mrn_cmd->parsed()) return run_mrn(c);
    if (rs_cmd->parsed()) return run_rs(c);
    if (prof_cmd->parsed()) return run_profile(c);
    if (plot_cmd->parsed()) return run_plot(c);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInput;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kSolver;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInput;
  }
  return kInput;
}
