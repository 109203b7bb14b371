#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace srg {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultTol = 1e-9;

// Input problems that the caller can fix (bad shapes, violated preconditions).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failures inside an optimisation routine.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wrap an angle into [center - pi, center + pi).
inline double wrap_angle(double a, double center = 0.0) {
  double d = std::fmod(a - center + kPi, 2.0 * kPi);
  if (d < 0) d += 2.0 * kPi;
  return center - kPi + d;
}

inline cplx expi(double a) { return std::polar(1.0, a); }

}  // namespace srg
