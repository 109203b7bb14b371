#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "srgrobust/geometry.hpp"
#include "srgrobust/types.hpp"

namespace srg::dw {

using Rng = std::mt19937_64;
using Interval = geometry::ArcSet::Interval;

struct DwPoint {
  cplx z{0.0, 0.0};
  double nu = 0.0;
};

enum class CloudKind { Shell, InverseShell };

struct DwPointCloud {
  std::vector<DwPoint> points;
  std::string source;
  CloudKind kind = CloudKind::Shell;
};

// Singular values of a square matrix in ascending order.
VecR singular_values(const MatC& m);
double sigma_max(const MatC& m);
double sigma_min(const MatC& m);

VecC random_unit_vector(int n, Rng& rng);
// Haar-distributed unitary from the QR factorisation of a complex Gaussian matrix.
MatC haar_unitary(int n, Rng& rng);
std::vector<std::array<double, 3>> fibonacci_sphere(int n);

DwPoint dw_point(const MatC& m, const VecC& u);
DwPointCloud dw_sample(const MatC& m, int n_random, int n_directions, Rng& rng);
double dw_support(const MatC& m, double a, double b, double c);
// Support of the inverse shell of a nonsingular matrix, through the shell of its inverse.
double dw_inverse_support(const MatC& m, double a, double b, double c);

DwPoint f_inv(const DwPoint& p);
std::pair<cplx, cplx> project_theta(const DwPoint& p, double theta);
// Gain/angle form of the theta-SRG pair of one input direction.
std::pair<cplx, cplx> srg_theta_pair(const MatC& m, const VecC& u, double theta);

std::vector<cplx> srg_theta_sample(const MatC& m, double theta, int n_random, int n_directions, Rng& rng);
std::vector<cplx> inv_srg_theta_sample(const MatC& m, double theta, int n_random, int n_directions, Rng& rng);

// Exact slices of the joint range {(u*Hu, u*M*Mu) : |u| = 1} with H = herm(e^{-i theta} M).
// The range is convex, so each nu-slice is an interval [x_min, x_max] computed through
// the dual problem min_c lambda_max(+-H + c (M*M - nu I)).
class ShellSlicer {
 public:
  ShellSlicer(const MatC& m, double theta);

  double nu_min() const { return nu_min_; }
  double nu_max() const { return nu_max_; }
  double theta() const { return theta_; }
  int dim() const { return static_cast<int>(h_.rows()); }
  bool zero() const { return nu_max_ == 0.0; }

  std::optional<Interval> x_range(double nu) const;
  // Unit vector u with u*Ku = nu and u*Hu = x (both within a few ulps of the scale).
  std::optional<VecC> find_vector(double nu, double x) const;

  const MatC& h() const { return h_; }
  const MatC& k() const { return k_; }

 private:
  MatC h_, k_;
  double theta_;
  double nu_min_, nu_max_;
  double scale_;
  double extreme(double nu, int sign, double* c_opt) const;
};

// Deviation |angle - theta| interval of the theta-SRG of M on the circle |z| = rho.
std::optional<Interval> srg_deviation(const ShellSlicer& s, double rho);
// Same for the inverse theta-SRG of M; the slicer must be built with angle -theta.
std::optional<Interval> inv_srg_deviation(const ShellSlicer& s_neg, double rho);

struct ThetaAngle {
  double value = 0.0;  // best sampled value
  double lower = 0.0;
  double upper = 0.0;  // certified through tangent lines of the convex lower slice boundary
};

ThetaAngle theta_angle_bounds(const MatC& m, double theta, double tol = 1e-9);
double theta_angle(const MatC& m, double theta, double tol = 1e-9);

// Bounds on the largest deviation of the theta-SRG over circles with radius in [rho_lo, rho_hi].
ThetaAngle deviation_bounds(const ShellSlicer& s, double rho_lo, double rho_hi, double tol = 1e-9);

// Separation of the shell of delta from the inverse shell of -g (g nonsingular):
// positive when disjoint, approximately the gap along the best direction.
double dw_separation_margin(const MatC& g, const MatC& delta, int n_directions = 2048);

enum class UnionMode { Theta, General };

// One horizontal layer nu = gamma^2 of the union of shells over an uncertainty set.
struct DwLayer {
  double gamma = 0.0;
  UnionMode mode = UnionMode::Theta;
  double theta = 0.0;
  bool scalar = false;
  std::vector<Interval> devs;  // theta mode: deviations of the symmetric part on |z| = gamma
  geometry::ArcSet arcs;        // arcs of the active region on |z| = gamma
  bool empty() const { return arcs.is_empty(); }
  bool contains(cplx z, double tol = 1e-9) const;
  // Support of the layer's convex hull in planar direction d.
  double support(cplx d) const;
};

DwLayer dw_union_layer(const geometry::Region& x, UnionMode mode, double theta, int n, double gamma);
std::vector<DwLayer> dw_union_region(const geometry::Region& x, UnionMode mode, double theta, int gamma_grid,
                                     int n);
bool dw_union_contains(const geometry::Region& x, UnionMode mode, double theta, int n, const DwPoint& p,
                       double tol = 1e-9);

void write_cloud_csv(const DwPointCloud& c, const std::string& path);

}  // namespace srg::dw
