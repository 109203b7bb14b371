#pragma once

#include <functional>
#include <string>
#include <vector>

#include "srgrobust/dwshell.hpp"
#include "srgrobust/geometry.hpp"
#include "srgrobust/mrn.hpp"
#include "srgrobust/types.hpp"

namespace srg::lti {

using geometry::Region;

struct StateSpace {
  MatR a, b, c, d;

  int nx() const { return static_cast<int>(a.rows()); }
  int n() const { return static_cast<int>(d.rows()); }
  // Throws InputError on inconsistent shapes, non-square I/O or a non-Hurwitz A.
  void validate() const;
  // Constant transfer matrix D behind a decoupled stable state.
  static StateSpace static_gain(const MatR& d);
};

// Random stable system: Gaussian entries with A shifted so every eigenvalue has real part <= -0.1.
StateSpace random_stable(int nx, int n, dw::Rng& rng);

// Nonnegative frequencies, strictly increasing; kInf stands for the limit s -> infinity.
struct FrequencyGrid {
  std::vector<double> omegas;

  static FrequencyGrid log(double lo, double hi, int n, bool with_ends = true);
  static FrequencyGrid standard() { return log(1e-3, 1e3, 400); }
};

MatC freq_response(const StateSpace& sys, double omega);

// Log-grid maximum of the largest singular value with golden-section refinement at the peaks.
double hinf_norm_grid(const StateSpace& sys, int n_points = 10000);

struct HinfResult {
  double value = 0.0;  // LMI minimum of r
  double grid = 0.0;   // dense-grid lower bound
  bool consistent = true;
};

HinfResult hinf_norm_detail(const StateSpace& sys, double tol = 1e-6);
double hinf_norm(const StateSpace& sys, double tol = 1e-6);

struct AngleResult {
  double value = 0.0;
  double lower = 0.0;  // grid maximum of the frequencywise angle
  double upper = kPi;  // LMI certificate (cone containment via inscribed discs)
  bool certified = false;
};

AngleResult hinf_theta_angle(const StateSpace& sys, double theta, double tol = 1e-3);

struct FrequencyRecord {
  double omega = 0.0;
  double margin = 0.0;
  bool holds = false;
};

struct RsVerdict {
  bool robustly_stable = false;
  double worst_frequency = 0.0;
  double margin = kInf;
  std::vector<FrequencyRecord> detail;
  std::string method;
  std::string note;
  std::vector<std::string> warnings;
};

using RegionFn = std::function<Region(double)>;
using AngleFn = std::function<double(double)>;

RsVerdict rs_check_theta(const StateSpace& sys, const RegionFn& x, const AngleFn& theta, const FrequencyGrid& grid);
RsVerdict rs_check_general(const StateSpace& sys, const RegionFn& x, const AngleFn& vartheta,
                           const FrequencyGrid& grid);
RsVerdict rs_check_named(const StateSpace& sys, const mrn::Shape& shape, const FrequencyGrid& grid);

}  // namespace srg::lti
