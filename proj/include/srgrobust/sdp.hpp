#pragma once

#include <string>
#include <vector>

#include "srgrobust/types.hpp"

namespace srg::sdp {

// Block-diagonal semidefinite program in inequality form
//
//   maximise   b'y   subject to   sum_i y_i A_i  <=  C   (Loewner order, blockwise)
//
// paired with the primal  min <C, X>  s.t.  <A_i, X> = b_i,  X >= 0.  Blocks with
// negative size are diagonal (linear inequalities).
struct Problem {
  std::vector<int> blocks;
  std::vector<MatR> c;  // one per block; diagonal blocks store a column vector
  struct Entry {
    int block;
    MatR a;
  };
  std::vector<std::vector<Entry>> a;  // a[i]: nonzero blocks of A_i
  VecR b;

  int n_vars() const { return static_cast<int>(a.size()); }
  int add_block(int size);
  int add_var(double objective);
  // Adds coef to A_var restricted to block (accumulating).
  void add_coef(int var, int block, const MatR& coef);
};

enum class Status { Optimal, MaxIter, Numerical };

struct Result {
  Status status = Status::Numerical;
  VecR y;
  std::vector<MatR> x;  // primal blocks
  double dual_obj = 0.0;
  double primal_obj = 0.0;
  int iterations = 0;
  double rel_gap = kInf;
  double dual_infeas = kInf;
  double primal_infeas = kInf;
};

struct Options {
  int max_iter = 120;
  double tol_gap = 1e-9;
  double tol_feas = 1e-9;
  bool trace = false;
};

// Mehrotra predictor-corrector with the HKM search direction.
Result solve(const Problem& p, const Options& opt = {});

std::string status_name(Status s);

}  // namespace srg::sdp
