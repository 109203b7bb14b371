#include "srgrobust/profile.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "srgrobust/dwshell.hpp"
#include "srgrobust/lmi.hpp"

namespace srg::profile {

size_t ThetaProfile::rows() const {
  size_t n = 0;
  for (const auto& s : slices) n += s.gamma.size();
  return n;
}

double solve_phi_bst(double ratio) {
  if (!(ratio >= 1.0)) throw InputError("solve_phi_bst: ratio must be >= 1");
  if (std::isinf(ratio)) return kPi / 2;
  auto f = [](double p) { return (1.0 + std::sin(p)) / std::cos(p); };
  double lo = 0.0, hi = kPi / 2;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < ratio ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Brackets refine_brackets(const std::vector<double>& gamma, const std::vector<double>& phi,
                         const std::vector<double>& lambda, int k) {
  const int n = static_cast<int>(gamma.size());
  if (k < 1 || k >= n || phi.size() < size_t(k) || lambda.size() < size_t(k))
    throw InputError("refine_brackets: index out of range");
  Brackets out;
  const double lam = lambda[k - 1], g0 = gamma[k - 1], g1 = gamma[k];
  if (!(lam > 0.0) || !(g0 > 0.0) || !(g1 > 0.0)) return out;
  const double w = 1.0 / (2.0 * lam);
  const double zeta = w * g1 / g0 + (1.0 - w) * g0 / g1;
  const double arg = zeta * std::cos(phi[k - 1]);
  out.wst_clamped = arg > 1.0 || arg < -1.0;
  out.wst = std::acos(std::clamp(arg, -1.0, 1.0));
  out.bst = solve_phi_bst(gamma[n - 1] / g1);
  if (out.bst > out.wst) {
    out.bst = out.wst;
    out.bst_clamped = true;
  }
  return out;
}

namespace {

// Gain-disc centre and radius of the inscribed cone disc at angle phi.
lmi::ThetaBlock cone_disc(const StateSpace& sys, double theta, double g, double phi) {
  if (phi >= kPi / 2) return lmi::theta_d(theta, kInf, kInf, sys);
  return lmi::theta_d(theta, g / std::cos(phi), g * std::tan(phi), sys);
}

double grid_angle_lower(const StateSpace& sys, double theta) {
  double best = 0.0;
  for (double w : lti::FrequencyGrid::log(1e-3, 1e3, 60).omegas) {
    const MatC m = lti::freq_response(sys, w);
    if (dw::sigma_max(m) <= 1e-14) continue;
    best = std::max(best, dw::theta_angle(m, theta));
  }
  return best;
}

}  // namespace

ProfileSlice compute_slice(const StateSpace& sys, double theta, double hinf, const Options& opt, ProfileMeta& counts) {
  const int ng = opt.n_gamma;
  const double err = opt.err;
  ProfileSlice s;
  s.theta = theta;
  s.angle_lower = grid_angle_lower(sys, theta);
  std::vector<double> gam(ng, 0.0), phi(ng, 0.0), lam(ng, 0.0);
  gam[ng - 1] = hinf;
  phi[ng - 1] = 0.0;

  // Step 2: half-plane test, then bisection on phi with the accelerated update.
  double phi0 = kPi / 2, c_theta = 0.0;
  if (lmi::half_plane(sys, theta).feasible) {
    double lo = 0.0, hi = kPi / 2, p = 0.25 * kPi;
    while (hi - lo > err) {
      const auto cr = lmi::c_range_for_phi(sys, theta, p, 1e-6, hinf);
      if (cr) {
        hi = p;
        c_theta = 0.5 * (cr->c_lo + cr->c_hi);
        double next = 0.5 * (lo + hi);
        const double arg = (cr->c_lo + cr->c_hi) / (2.0 * std::sqrt(cr->c_lo * cr->c_hi)) * std::cos(p);
        if (std::isfinite(arg) && arg <= 1.0 && std::acos(arg) > lo) next = std::min(next, std::acos(arg));
        else ++counts.amgm_fallbacks;
        p = next;
      } else {
        lo = p;
        p = 0.5 * (lo + hi);
      }
    }
    phi0 = hi;
  }
  s.phi0 = phi0;
  s.c_theta = c_theta;

  // Step 3: first entry of the slice.
  if (phi0 == kPi / 2) {
    const auto hp = lmi::theta_d(theta, kInf, kInf, sys);
    double lo = 0.0, hi = hinf;
    double lam_hi = lmi::max_lambda_mixed(sys, std::max(hinf, 1e-300), hp).value_or(0.0);
    while (hi - lo > err * std::max(hinf, 1e-300)) {
      const double r = 0.5 * (lo + hi);
      const auto l = r > 0.0 ? lmi::max_lambda_mixed(sys, r, hp) : std::nullopt;
      if (l) {
        hi = r;
        lam_hi = *l;
      } else {
        lo = r;
      }
    }
    gam[0] = hi;
    lam[0] = lam_hi;
    phi[0] = kPi / 2;
  } else {
    phi[0] = phi0;
    gam[0] = c_theta * std::sin(phi0);
    lam[0] = 1.0;
  }
  gam[0] = std::min(gam[0], hinf);

  if (std::abs(hinf - gam[0]) > err * hinf) {
    s.flag = phi0 == kPi / 2 ? kFlagConic : kFlagRegular;
    for (int k = 1; k < ng; ++k) gam[k] = gam[0] + (hinf - gam[0]) * k / (ng - 1);
    gam[ng - 1] = hinf;
    for (int k = 1; k + 1 < ng; ++k) {
      const Brackets br = refine_brackets(gam, phi, lam, k);
      counts.wst_clamps += br.wst_clamped;
      counts.bracket_clamps += br.bst_clamped;
      const auto at = [&](double p) { return lmi::max_lambda_mixed(sys, gam[k], cone_disc(sys, theta, gam[k], p)); };
      double lo = br.bst, hi = br.wst;
      auto l_hi = at(hi);
      if (!l_hi) {
        // phi_wst is not certified: widen to the half-plane end, which is feasible whenever Phi(1) is.
        ++counts.bracket_misses;
        lo = std::min(lo, hi);
        hi = kPi / 2;
        l_hi = at(hi);
      }
      while (hi - lo > err) {
        const double p = 0.5 * (lo + hi);
        const auto l = at(p);
        if (l) {
          hi = p;
          l_hi = l;
        } else {
          lo = p;
        }
      }
      phi[k] = hi;
      lam[k] = l_hi.value_or(0.0);
      if (!l_hi) s.note += (s.note.empty() ? "" : "; ") + std::string("k=") + std::to_string(k + 1) + " uncertified at pi/2";
    }
    s.gamma = gam;
    s.phi = phi;
    s.lambda = lam;
  } else {
    s.flag = kFlagDegenerate;
    s.gamma = {0.0, hinf, hinf};
    s.phi = {kPi / 2, kPi / 2, kPi};
    s.lambda = {0.0, 0.0, 0.0};
  }
  return s;
}

ThetaProfile compute_profile(const StateSpace& sys, const Options& opt) {
  sys.validate();
  if (opt.n_theta < 1) throw InputError("compute_profile: N_theta must be >= 1");
  if (opt.n_gamma < 3) throw InputError("compute_profile: N_gamma must be >= 3");
  if (!(opt.err > 0.0)) throw InputError("compute_profile: err must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  ThetaProfile p;
  p.meta.n_theta = opt.n_theta;
  p.meta.n_gamma = opt.n_gamma;
  p.meta.err = opt.err;
  // Step 1, shared by every slice.
  p.meta.hinf = lmi::min_r_gain(sys).r;
  p.slices.resize(opt.n_theta);
  std::vector<ProfileMeta> counts(opt.n_theta);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < opt.n_theta; i = next++) {
      const double theta = -kPi + 2.0 * kPi * i / opt.n_theta;
      try {
        p.slices[i] = compute_slice(sys, theta, p.meta.hinf, opt, counts[i]);
      } catch (const SolverError& e) {
        ProfileSlice s;
        s.theta = theta;
        s.flag = kFlagFailure;
        s.note = e.what();
        s.gamma = {p.meta.hinf};
        s.phi = {0.0};
        s.lambda = {0.0};
        p.slices[i] = s;
        counts[i].solver_failures = 1;
      }
    }
  };
  const int nt = std::max(1, std::min<int>(opt.threads > 0 ? opt.threads : std::thread::hardware_concurrency(),
                                           opt.n_theta));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& c : counts) {
    p.meta.amgm_fallbacks += c.amgm_fallbacks;
    p.meta.wst_clamps += c.wst_clamps;
    p.meta.bracket_clamps += c.bracket_clamps;
    p.meta.bracket_misses += c.bracket_misses;
    p.meta.solver_failures += c.solver_failures;
  }
  p.meta.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return p;
}

ThetaProfile complementary_profile(const ThetaProfile& p) {
  ThetaProfile out = p;
  for (auto& s : out.slices) {
    for (auto& g : s.gamma) g = g > 0.0 ? 1.0 / g : kInf;
    for (auto& f : s.phi) f = kPi - f;
  }
  return out;
}

Format format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "csv") return Format::Csv;
  if (ext == "json") return Format::Json;
  throw InputError("unknown profile format for '" + path + "' (expected .csv or .json)");
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& s) {
  if (s == "inf") return kInf;
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw InputError("malformed number '" + s + "'");
  return v;
}

nlohmann::ordered_json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

double from_json_num(const nlohmann::json& j) {
  if (j.is_string()) return parse_num(j.get<std::string>());
  return j.get<double>();
}

}  // namespace

std::string to_csv(const ThetaProfile& p) {
  std::string out = "theta,k,gamma,phi,lambda,flag\n";
  for (const auto& s : p.slices)
    for (size_t k = 0; k < s.gamma.size(); ++k)
      out += num(s.theta) + "," + std::to_string(k + 1) + "," + num(s.gamma[k]) + "," + num(s.phi[k]) + "," +
             num(s.lambda[k]) + "," + s.flag + "\n";
  return out;
}

ThetaProfile from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "theta,k,gamma,phi,lambda,flag")
    throw InputError("profile CSV: missing or unexpected header");
  ThetaProfile p;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) f.push_back(c);
    if (f.size() != 6) throw InputError("profile CSV: row " + std::to_string(row) + " has " + std::to_string(f.size()) + " fields");
    const double theta = parse_num(f[0]);
    const int k = std::stoi(f[1]);
    if (k == 1) {
      p.slices.emplace_back();
      p.slices.back().theta = theta;
      p.slices.back().flag = f[5];
    }
    if (p.slices.empty() || p.slices.back().theta != theta || int(p.slices.back().gamma.size()) + 1 != k)
      throw InputError("profile CSV: row " + std::to_string(row) + " breaks the slice ordering");
    auto& s = p.slices.back();
    s.gamma.push_back(parse_num(f[2]));
    s.phi.push_back(parse_num(f[3]));
    s.lambda.push_back(parse_num(f[4]));
  }
  p.meta.n_theta = static_cast<int>(p.slices.size());
  for (const auto& s : p.slices) p.meta.n_gamma = std::max(p.meta.n_gamma, static_cast<int>(s.gamma.size()));
  return p;
}

std::string to_json(const ThetaProfile& p) {
  nlohmann::ordered_json j;
  j["meta"] = {{"n_theta", p.meta.n_theta},
               {"n_gamma", p.meta.n_gamma},
               {"err", p.meta.err},
               {"hinf", p.meta.hinf},
               {"amgm_fallbacks", p.meta.amgm_fallbacks},
               {"wst_clamps", p.meta.wst_clamps},
               {"bracket_clamps", p.meta.bracket_clamps},
               {"bracket_misses", p.meta.bracket_misses},
               {"solver_failures", p.meta.solver_failures}};
  j["slices"] = nlohmann::ordered_json::array();
  for (const auto& s : p.slices) {
    nlohmann::ordered_json js;
    js["theta"] = s.theta;
    js["flag"] = s.flag;
    auto arr = [](const std::vector<double>& v) {
      nlohmann::ordered_json a = nlohmann::ordered_json::array();
      for (double x : v) a.push_back(finite_or_string(x));
      return a;
    };
    js["gamma"] = arr(s.gamma);
    js["phi"] = arr(s.phi);
    js["lambda"] = arr(s.lambda);
    js["phi0"] = s.phi0;
    js["c_theta"] = s.c_theta;
    js["angle_lower"] = s.angle_lower;
    js["note"] = s.note;
    j["slices"].push_back(js);
  }
  return j.dump(1) + "\n";
}

ThetaProfile from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("profile JSON: ") + e.what());
  }
  ThetaProfile p;
  try {
    const auto& m = j.at("meta");
    p.meta.n_theta = m.at("n_theta");
    p.meta.n_gamma = m.at("n_gamma");
    p.meta.err = m.at("err");
    p.meta.hinf = m.at("hinf");
    p.meta.amgm_fallbacks = m.value("amgm_fallbacks", 0);
    p.meta.wst_clamps = m.value("wst_clamps", 0);
    p.meta.bracket_clamps = m.value("bracket_clamps", 0);
    p.meta.bracket_misses = m.value("bracket_misses", 0);
    p.meta.solver_failures = m.value("solver_failures", 0);
    for (const auto& js : j.at("slices")) {
      ProfileSlice s;
      s.theta = js.at("theta");
      s.flag = js.at("flag");
      for (const auto& x : js.at("gamma")) s.gamma.push_back(from_json_num(x));
      for (const auto& x : js.at("phi")) s.phi.push_back(from_json_num(x));
      for (const auto& x : js.at("lambda")) s.lambda.push_back(from_json_num(x));
      s.phi0 = js.value("phi0", 0.0);
      s.c_theta = js.value("c_theta", 0.0);
      s.angle_lower = js.value("angle_lower", 0.0);
      s.note = js.value("note", "");
      if (s.phi.size() != s.gamma.size() || s.lambda.size() != s.gamma.size())
        throw InputError("profile JSON: slice arrays differ in length");
      p.slices.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("profile JSON: ") + e.what());
  }
  return p;
}

void export_profile(const ThetaProfile& p, Format f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << (f == Format::Csv ? to_csv(p) : to_json(p));
  if (!out) throw InputError("write failed for '" + path + "'");
}

ThetaProfile import_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return format_from_path(path) == Format::Csv ? from_csv(ss.str()) : from_json(ss.str());
}

bool same_surface(const ThetaProfile& a, const ThetaProfile& b) {
  if (a.slices.size() != b.slices.size()) return false;
  auto bits = [](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (std::memcmp(&x[i], &y[i], sizeof(double)) != 0) return false;
    return true;
  };
  for (size_t i = 0; i < a.slices.size(); ++i) {
    const auto &s = a.slices[i], &t = b.slices[i];
    if (std::memcmp(&s.theta, &t.theta, sizeof(double)) != 0 || s.flag != t.flag) return false;
    if (!bits(s.gamma, t.gamma) || !bits(s.phi, t.phi) || !bits(s.lambda, t.lambda)) return false;
  }
  return true;
}

}  // namespace srg::profile
