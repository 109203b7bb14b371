#pragma once

#include <optional>
#include <string>

#include "srgrobust/dwshell.hpp"
#include "srgrobust/geometry.hpp"

namespace srg::mrn {

using dw::Rng;
using geometry::Region;

enum class Mode { ThetaFixed, General };

struct UncertaintySpec {
  Region region;
  Mode mode = Mode::ThetaFixed;
  double theta = 0.0;
  int n = 2;
};

struct Shape {
  enum Kind { Disc, Cone, Sector } kind = Disc;
  double gamma = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  Region region() const;
  static Shape disc(double g) { return {Disc, g, 0.0, 0.0}; }
  static Shape cone(double a, double b) { return {Cone, 0.0, a, b}; }
  static Shape sector(double g, double a, double b) { return {Sector, g, a, b}; }
};

struct MrnVerdict {
  bool holds = false;
  double margin = 0.0;
  std::optional<MatC> witness;
  std::string method;
  bool boundary = false;  // |margin| inside the indeterminate band
  bool exact = true;      // false when only a sufficient condition was tested
  double min_det = kInf;  // brute force only
  double rho = 0.0;       // inverse-shell radius attaining the margin (theta checks)
  std::string note;
};

inline constexpr double kBoundaryBand = 1e-6;

MrnVerdict mrn_check_named(const MatC& g, const Shape& shape);
MrnVerdict mrn_check_theta(const MatC& g, const Region& x, double theta);
MrnVerdict mrn_check_general(const MatC& g, const Region& x, double theta);
// Separation of the inverse shell of -G from the union of shells over the general
// uncertainty set, slice by slice; necessary and sufficient for n >= 2.
MrnVerdict mrn_check_dw_union(const MatC& g, const Region& x, int n_layers = 256);
MrnVerdict mrn_bruteforce(const MatC& g, const UncertaintySpec& spec, int n_samples, int n_unitaries, Rng& rng);

MatC witness_block_pair(cplx s, double theta, int m, int n);
MatC witness_scalar(cplx z, int n, double theta = 0.0);
MatC witness_svd_disc(const MatC& g, double gamma);

// Delta = U* blkdiag(s I, s_theta I) U with (I + G Delta) w = 0 for w = -G y, where
// s is the theta-projection of the inverse shell point of -G at y.
std::optional<MatC> align_witness(const MatC& g, double theta, const VecC& y);
// Witness in the theta-uncertainty set of x when the inverse theta-SRG of -G meets x.
std::optional<MatC> theta_witness(const MatC& g, const Region& x, double theta);

// sigma_theta(delta) inside x (its theta-symmetric part), checked slice by slice.
bool theta_member(const MatC& delta, const Region& x, double theta, double tol = 1e-7);
bool general_member(const MatC& delta, const Region& x, double tol = 1e-7, int n_theta = 256);

double det_threshold(const MatC& g, const MatC& delta);
// Gauss-Newton search over U(n) for det(I + G U* delta U) = 0 starting from u0.
std::optional<MatC> singular_unitary(const MatC& g, const MatC& delta, const MatC& u0, int iters = 60);

}  // namespace srg::mrn
