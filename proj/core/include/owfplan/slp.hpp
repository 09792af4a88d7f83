#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "owfplan/ccd_program.hpp"

namespace owfplan {

struct SolveOptions {
  int max_outer_iters = 40;
  double trust_radius_init = 0.05;  // pu step bound on voltages
  double trust_shrink = 0.5;
  double trust_expand = 1.6;
  double convergence_tol_obj = 1e-8;  // relative objective change
  double feasibility_tol = 1e-6;      // absolute, per constraint row
  double lp_pivot_tol = 1e-8;
  std::uint64_t seed = 0;
  std::string lp_engine = "auto";  // auto | simplex | ipm
  bool verbose = false;

  void validate() const;
};

enum class SolveStatus { Success, Infeasible, Unbounded, IterationLimit, Degraded };
const char* to_string(SolveStatus s);

struct LeafSchedule {
  std::vector<double> p_w;     // hourly output, MW
  std::vector<double> p_wr;    // quarter RT trade, MW
  std::vector<double> p_ch, p_dis, soc;
  std::vector<double> v1, v2;  // pu
  std::vector<double> k_resw, k_resb;            // MW/pu
  std::vector<double> res_wu, res_wd, res_bu, res_bd;  // MW
};

// Daily expected revenue pieces ($/day) and installation costs ($), kept
// separate so reports can reconcile against the objective:
//   objective = tax_credit*(ess_cost + cable_cost)
//             - annuity*(da + rt + reserve_up + reserve_down).
struct ObjectiveBreakdown {
  double ess_cost = 0.0;
  double cable_cost = 0.0;
  double da_revenue = 0.0;
  double rt_revenue = 0.0;
  double reserve_up_revenue = 0.0;
  double reserve_down_revenue = 0.0;
  double annuity = 0.0;
  double tax_credit = 0.0;

  double objective() const {
    return tax_credit * (ess_cost + cable_cost) -
           annuity * (da_revenue + rt_revenue + reserve_up_revenue +
                      reserve_down_revenue);
  }
};

struct DesignSolution {
  SolveStatus status = SolveStatus::Degraded;
  std::string engine;
  CaseKind case_kind = CaseKind::Ccd;
  int hours = 24;
  double sz_e_mw = 0.0;
  double sz_c_mw = 0.0;
  double objective_usd = 0.0;
  std::vector<std::vector<double>> p_wd;             // [node][hour]
  std::vector<std::vector<LeafSchedule>> schedules;  // [node][leaf]
  std::vector<double> da_prob;
  std::vector<std::vector<double>> rt_prob;
  std::vector<double> residuals;  // per family, absolute
  double max_residual = 0.0;
  int outer_iterations = 0;
  long lp_iterations = 0;
  ObjectiveBreakdown breakdown;

  // Flat variable vector in the program's indexing.
  std::vector<double> to_flat(const CcdProgram& program) const;
};

struct ResidualReport {
  std::vector<double> by_family;  // indexed by Family
  double max_violation = 0.0;
};

// Evaluates every constraint family (rows including the voltage products,
// plus attributed bounds) at the given point.
ResidualReport check_feasibility(const CcdProgram& program,
                                 const std::vector<double>& x);

// Successive linearization with a voltage trust region: linearize the
// products around the incumbent voltages, solve the LP, accept when the true
// nonlinear residuals improve, shrink the radius otherwise. Converges when
// the relative objective change and the residuals are inside tolerance.
DesignSolution solve_slp(const CcdProgram& program, const SolveOptions& options);

// Linearized LP at voltage point (v1_pt/v2_pt indexed like the program vars);
// exposed for tests.
LpProblem linearize_program(const CcdProgram& program,
                            const std::vector<double>& v_point,
                            double trust_radius);

std::string solution_to_json(const DesignSolution& sol);
DesignSolution solution_from_json(const std::string& text);
void save_solution(const DesignSolution& sol, const std::string& path);
DesignSolution load_solution(const std::string& path);

}  // namespace owfplan
