#pragma once

#include <string>
#include <vector>

#include "srgrobust/lti.hpp"

namespace srg::profile {

using lti::StateSpace;

inline const std::string kFlagRegular = "regular";
inline const std::string kFlagConic = "conic-through-origin";
inline const std::string kFlagDegenerate = "degenerate-gain-only";
inline const std::string kFlagFailure = "solver-failure";

// One theta direction of the profile. Arrays are indexed k = 1..N_gamma in the text and
// zero-based here; degenerate slices carry three entries.
struct ProfileSlice {
  double theta = 0.0;
  std::vector<double> gamma, phi, lambda;
  std::string flag = kFlagRegular;
  double phi0 = 0.0;         // Step-2 angle (pi/2 when the half-plane test fails)
  double c_theta = 0.0;      // centre of the Step-2 disc
  double angle_lower = 0.0;  // grid lower bound of the frequencywise theta-angle
  std::string note;
};

struct ProfileMeta {
  int n_theta = 0;
  int n_gamma = 0;
  double err = 0.0;
  double hinf = 0.0;
  int amgm_fallbacks = 0;   // accelerated Step-2 updates replaced by the bisection midpoint
  int wst_clamps = 0;       // arccos arguments of phi_wst clamped into [-1, 1]
  int bracket_clamps = 0;   // phi_bst lowered to phi_wst
  int bracket_misses = 0;   // phi_wst itself infeasible
  int solver_failures = 0;
  double runtime_s = 0.0;   // not exported: files stay byte-identical across runs
};

struct ThetaProfile {
  std::vector<ProfileSlice> slices;
  ProfileMeta meta;
  size_t rows() const;
};

struct Brackets {
  double wst = kPi / 2;
  double bst = 0.0;
  bool wst_clamped = false;
  bool bst_clamped = false;
};

// Solves (1 + sin phi) / cos phi = ratio on [0, pi/2) by guarded bisection; ratio >= 1.
double solve_phi_bst(double ratio);
// Bracket [phi_bst, phi_wst] for index k (zero-based, k >= 1) from the entries at k - 1.
Brackets refine_brackets(const std::vector<double>& gamma, const std::vector<double>& phi,
                         const std::vector<double>& lambda, int k);

struct Options {
  int n_theta = 64;
  int n_gamma = 16;
  double err = 1e-3;
  int threads = 0;  // 0 selects the hardware concurrency
};

ThetaProfile compute_profile(const StateSpace& sys, const Options& opt);
ProfileSlice compute_slice(const StateSpace& sys, double theta, double hinf, const Options& opt, ProfileMeta& counts);

// (theta, phi, gamma) -> (theta, pi - phi, 1 / gamma); gamma = 0 maps to infinity.
ThetaProfile complementary_profile(const ThetaProfile& p);

enum class Format { Csv, Json };

Format format_from_path(const std::string& path);
std::string to_csv(const ThetaProfile& p);
std::string to_json(const ThetaProfile& p);
ThetaProfile from_csv(const std::string& text);
ThetaProfile from_json(const std::string& text);
void export_profile(const ThetaProfile& p, Format f, const std::string& path);
ThetaProfile import_profile(const std::string& path);

// Bit-exact equality of the exported surface (theta, gamma, phi, lambda, flag).
bool same_surface(const ThetaProfile& a, const ThetaProfile& b);

}  // namespace srg::profile
