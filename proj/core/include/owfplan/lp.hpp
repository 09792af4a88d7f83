#pragma once

#include <limits>
#include <string>
#include <vector>

namespace owfplan {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LE, GE, EQ };

struct LinTerm {
  int var = 0;
  double coef = 0.0;
};

struct LpRow {
  Sense sense = Sense::LE;
  double rhs = 0.0;
  std::vector<LinTerm> terms;
  int block = -1;  // decomposition block (DA node); -1 = unblocked
};

// min obj'x + obj_constant  s.t. rows, lo <= x <= hi. Bounds may be +-inf.
struct LpProblem {
  std::vector<double> lo, hi, obj;
  std::vector<LpRow> rows;
  double obj_constant = 0.0;

  int num_vars() const { return static_cast<int>(obj.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_var(double lo_, double hi_, double obj_) {
    lo.push_back(lo_);
    hi.push_back(hi_);
    obj.push_back(obj_);
    return num_vars() - 1;
  }
  void add_row(Sense sense, double rhs, std::vector<LinTerm> terms,
               int block = -1) {
    rows.push_back(LpRow{sense, rhs, std::move(terms), block});
  }

  // Max violation of rows and bounds at x (absolute).
  double max_violation(const std::vector<double>& x) const;
  double objective_value(const std::vector<double>& x) const;
};

enum class LpStatus {
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
  NumericalTrouble,
};

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::NumericalTrouble;
  std::vector<double> x;
  std::vector<double> row_duals;  // y: dual of row i (sign per A x + s = b form)
  double objective = 0.0;
  int iterations = 0;

  // Simplex-only: basis for warm starts (basic variable of each row; slack of
  // row i is encoded as num_vars + i) and nonbasic-at-upper flags.
  std::vector<int> basis;
  std::vector<char> at_upper;
};

struct SimplexOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-8;
  int max_iters = 200000;
  int refactor_every = 120;
  int bland_after = 400;  // consecutive degenerate pivots before Bland's rule
  const LpSolution* warm = nullptr;
};

// Dense bounded-variable revised simplex: vertex solutions, duals, and
// infeasibility/unboundedness certificates. Intended for desk-scale programs.
LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options = {});

struct IpmOptions {
  double tol = 1e-10;     // relative primal/dual/gap targets
  int max_iters = 120;
  double regularization = 1e-9;
  bool verbose = false;
};

// Sparse primal-dual interior-point method (Mehrotra predictor-corrector,
// normal equations with a low-rank update for columns crossing blocks).
// Returns near-optimal primal/dual values; no basis.
LpSolution solve_lp_ipm(const LpProblem& problem, const IpmOptions& options = {});

// Geometric-mean row/column equilibration (scales rounded to powers of two).
// x_original = col_scale * x_scaled; y_original = row_scale * y_scaled.
struct Equilibration {
  std::vector<double> row_scale, col_scale;
};
LpProblem equilibrate(const LpProblem& problem, Equilibration* out);

}  // namespace owfplan
