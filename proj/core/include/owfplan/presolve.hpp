#pragma once

#include <vector>

#include "owfplan/lp.hpp"

namespace owfplan {

// Reductions applied before handing a program to an LP engine:
//   - fixed variables folded into the right-hand sides,
//   - empty rows checked and dropped,
//   - singleton rows turned into variable bounds,
//   - zero-rhs doubleton equalities (y = alpha*x) substituted out,
//   - empty columns pinned to their cost-preferred bound.
// Postsolve reconstructs the full-length solution vector.
class Presolver {
 public:
  // Returns false when presolve already proves the problem infeasible or
  // unbounded (see verdict()).
  bool reduce(const LpProblem& original);

  const LpProblem& reduced() const { return reduced_; }
  LpStatus verdict() const { return verdict_; }

  // Map the reduced solution back onto the original variable space.
  std::vector<double> postsolve(const std::vector<double>& reduced_x) const;

  // Row duals padded with zeros for removed rows.
  std::vector<double> postsolve_duals(const std::vector<double>& reduced_duals) const;

  int original_vars() const { return static_cast<int>(var_value_.size()); }

 private:
  struct Subst {
    int eliminated = 0;  // original var index
    int kept = 0;        // original var index
    double alpha = 0.0;  // eliminated = alpha * kept + beta
    double beta = 0.0;
  };

  LpProblem reduced_;
  LpStatus verdict_ = LpStatus::Optimal;
  std::vector<int> var_map_;       // original -> reduced (-1 eliminated)
  std::vector<int> row_map_;       // original -> reduced (-1 removed)
  std::vector<double> var_value_;  // values for eliminated-but-fixed vars
  std::vector<Subst> substs_;      // applied in order; undone in reverse
};

}  // namespace owfplan
