#pragma once

#include <optional>
#include <string>
#include <vector>

#include "srgrobust/lti.hpp"
#include "srgrobust/sdp.hpp"

namespace srg::lmi {

using lti::StateSpace;

struct ThetaBlock {
  double theta = 0.0;
  double c = 0.0;
  double r = 0.0;
  MatC matrix;  // (nx + n) square, Hermitian
};

// Disc block for {|G - c e^{i theta}| <= r}; (inf, inf) gives the theta-half-plane block.
ThetaBlock theta_d(double theta, double c, double r, const StateSpace& sys);

// [A B; I 0]* [[0, X + iY], [X - iY, 0]] [A B; I 0]
MatC mi_lhs(const StateSpace& sys, const MatC& x, const MatC& y);
MatR real_embedding(const MatC& h);

// Theta(s) = theta0 + sum_k s_k theta_k + W(s) W(s)*, W(s) = w0 + sum_k s_k w_k, with box bounds on
// the free scalars s. The quadratic W-term enters through a Schur complement.
struct MiProblem {
  MatC theta0;
  std::vector<MatC> theta_k;
  MatC w0;
  std::vector<MatC> w_k;
  std::vector<std::pair<double, double>> bounds;
  VecR objective;  // minimised over s when nonempty
  double scale = 0.0;  // normalisation of the inequality; 0 selects |[C D]|^2 + |theta0|
  std::string label = "mi";
};

enum class CertStatus { Feasible, Infeasible, Numerical };

struct LmiCertificate {
  bool feasible = false;
  CertStatus status = CertStatus::Infeasible;
  MatC x, y;
  VecR aux;
  double slack_margin = 0.0;  // largest eigenvalue of the normalised assembled MI
  double phase1 = 0.0;        // optimal common slack t
  double scale = 1.0;
  bool bound_active = false;
  int iterations = 0;
  std::string note;
};

inline constexpr double kMargin = 1e-7;

LmiCertificate mi_feasible(const StateSpace& sys, const MiProblem& prob, double margin = kMargin);
// Max eigenvalue of the normalised inequality at the certificate (independent recomputation).
double verify(const StateSpace& sys, const MiProblem& prob, const LmiCertificate& cert);

struct GainResult {
  double r = 0.0;
  LmiCertificate cert;
};

GainResult min_r_gain(const StateSpace& sys, double tol = 1e-6);

// Feasibility of the theta-half-plane block (theta-positive realness).
LmiCertificate half_plane(const StateSpace& sys, double theta);
// Feasibility of a single disc block.
LmiCertificate disc_feasible(const StateSpace& sys, double theta, double c, double r);

struct CRange {
  double c_lo = 0.0;
  double c_hi = 0.0;
  bool unbounded = false;  // c_hi hit the cap
};

std::optional<CRange> c_range_for_phi(const StateSpace& sys, double theta, double phi, double tol = 1e-6,
                                      double hinf = 0.0);

// Largest lambda in [0, 1] with (1 - lambda) Theta_d(0, 0, r) + lambda * angle feasible.
std::optional<double> max_lambda_mixed(const StateSpace& sys, double r, const ThetaBlock& angle, double tol = 1e-6);

bool trace_enabled();

}  // namespace srg::lmi
