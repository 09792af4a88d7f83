#include "owfplan/slp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "owfplan/presolve.hpp"

namespace owfplan {

using nlohmann::json;

void SolveOptions::validate() const {
  if (max_outer_iters < 1) throw std::invalid_argument("max_outer_iters >= 1");
  if (trust_radius_init <= 0.0) throw std::invalid_argument("trust_radius_init > 0");
  if (!(trust_shrink > 0.0 && trust_shrink < 1.0)) {
    throw std::invalid_argument("trust_shrink in (0,1)");
  }
  if (trust_expand <= 1.0) throw std::invalid_argument("trust_expand > 1");
  if (convergence_tol_obj <= 0.0 || feasibility_tol <= 0.0 || lp_pivot_tol <= 0.0) {
    throw std::invalid_argument("tolerances must be > 0");
  }
  if (lp_engine != "auto" && lp_engine != "simplex" && lp_engine != "ipm") {
    throw std::invalid_argument("lp_engine must be auto|simplex|ipm");
  }
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Success: return "success";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::Degraded: return "degraded";
  }
  return "?";
}

ResidualReport check_feasibility(const CcdProgram& program,
                                 const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != program.num_vars()) {
    throw std::invalid_argument("check_feasibility: point dimension mismatch");
  }
  ResidualReport rep;
  rep.by_family = program.residuals_by_family(x);
  rep.max_violation = *std::max_element(rep.by_family.begin(), rep.by_family.end());
  return rep;
}

LpProblem linearize_program(const CcdProgram& program,
                            const std::vector<double>& v_point,
                            double trust_radius) {
  LpProblem lp;
  lp.obj_constant = program.obj_constant;
  const int n = program.num_vars();
  lp.lo.resize(n);
  lp.hi.resize(n);
  lp.obj.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto& v = program.vars[j];
    double lo = v.lo, hi = v.hi;
    if (v.role == VarRole::V1 || v.role == VarRole::V2) {
      lo = std::max(lo, v_point[j] - trust_radius);
      hi = std::min(hi, v_point[j] + trust_radius);
      if (lo > hi) lo = hi;  // pinned voltages keep their fixed value
    }
    lp.lo[j] = lo;
    lp.hi[j] = hi;
    lp.obj[j] = v.obj;
  }

  std::map<int, double> coefs;
  for (const auto& row : program.rows) {
    coefs.clear();
    double rhs = row.rhs;
    for (const auto& t : row.lin) coefs[t.var] += t.coef;
    for (const auto& b : row.bilin) {
      // c*x_i*x_j ~ c*(vj0*x_i + vi0*x_j - vi0*vj0) around the incumbent.
      const double vi0 = v_point[b.vi];
      const double vj0 = v_point[b.vj];
      coefs[b.vi] += b.coef * vj0;
      coefs[b.vj] += b.coef * vi0;
      rhs += b.coef * vi0 * vj0;
    }
    std::vector<LinTerm> terms;
    terms.reserve(coefs.size());
    for (const auto& [var, coef] : coefs) terms.push_back({var, coef});
    lp.add_row(row.sense, rhs, std::move(terms), std::max(row.da_node, 0));
  }
  return lp;
}

namespace {

// Exact voltages for a quarter given sent power s and received power u:
// dv = sqrt((s-u)/g), v1 = s/(g dv), v2 = v1 - dv. Falls back to the
// incumbent when out of bounds (then the linearized values stand).
bool recover_voltages(double s, double u, double g, double v_lo, double v_hi,
                      double* v1, double* v2) {
  const double tol = 1e-9;
  if (s < -tol) return false;
  const double loss = s - u;
  if (loss < -1e-7) return false;
  if (s <= tol && std::abs(u) <= tol) {
    *v1 = v_hi;
    *v2 = v_hi;
    return true;
  }
  const double dv = std::sqrt(std::max(loss, 0.0) / g);
  if (dv <= 0.0) return false;  // positive flow needs a voltage drop
  const double cand1 = s / (g * dv);
  const double cand2 = cand1 - dv;
  if (cand1 < v_lo - 1e-9 || cand1 > v_hi + 1e-9 || cand2 < v_lo - 1e-9 ||
      cand2 > v_hi + 1e-9) {
    return false;
  }
  *v1 = std::clamp(cand1, v_lo, v_hi);
  *v2 = std::clamp(cand2, v_lo, v_hi);
  return true;
}

void extract_solution_arrays(const CcdProgram& p, const std::vector<double>& x,
                             DesignSolution* sol) {
  const int H = p.hours;
  const int Q = p.quarters();
  sol->hours = H;
  sol->case_kind = p.case_kind;
  sol->sz_e_mw = x[p.sz_e()];
  sol->sz_c_mw = x[p.sz_c()];
  sol->da_prob = p.da_prob;
  sol->rt_prob = p.rt_prob;
  sol->p_wd.assign(p.n_da, std::vector<double>(H, 0.0));
  sol->schedules.assign(p.n_da, {});
  for (int d = 0; d < p.n_da; ++d) {
    for (int h = 0; h < H; ++h) sol->p_wd[d][h] = x[p.p_wd(d, h)];
    sol->schedules[d].resize(p.leaves_per_node[d]);
    for (int l = 0; l < p.leaves_per_node[d]; ++l) {
      LeafSchedule& ls = sol->schedules[d][l];
      ls.p_w.resize(H);
      for (int h = 0; h < H; ++h) ls.p_w[h] = x[p.leaf_var(VarRole::Pw, d, l, h)];
      auto fill = [&](VarRole role, std::vector<double>& dst) {
        dst.resize(Q);
        for (int t = 0; t < Q; ++t) dst[t] = x[p.leaf_var(role, d, l, t)];
      };
      fill(VarRole::Pwr, ls.p_wr);
      fill(VarRole::Pch, ls.p_ch);
      fill(VarRole::Pdis, ls.p_dis);
      fill(VarRole::Soc, ls.soc);
      fill(VarRole::V1, ls.v1);
      fill(VarRole::V2, ls.v2);
      fill(VarRole::KResW, ls.k_resw);
      fill(VarRole::KResB, ls.k_resb);
      fill(VarRole::ResWU, ls.res_wu);
      fill(VarRole::ResWD, ls.res_wd);
      fill(VarRole::ResBU, ls.res_bu);
      fill(VarRole::ResBD, ls.res_bd);
    }
  }

  ObjectiveBreakdown& bd = sol->breakdown;
  bd = ObjectiveBreakdown{};
  bd.annuity = p.annuity;
  bd.tax_credit = p.econ.tax_credit;
  bd.ess_cost = p.econ.ess_unit_cost * sol->sz_e_mw;
  bd.cable_cost = p.econ.cable_unit_cost(p.cable.distance_km) * sol->sz_c_mw;
  for (int j = 0; j < p.num_vars(); ++j) {
    const auto& v = p.vars[j];
    const double daily = -v.obj * x[j] / p.annuity;  // objective carries -R^Year pi lambda
    switch (v.role) {
      case VarRole::Pwd: bd.da_revenue += daily; break;
      case VarRole::Pwr: bd.rt_revenue += daily; break;
      case VarRole::ResWU:
      case VarRole::ResBU: bd.reserve_up_revenue += daily; break;
      case VarRole::ResWD:
      case VarRole::ResBD: bd.reserve_down_revenue += daily; break;
      default: break;
    }
  }
}

}  // namespace

std::vector<double> DesignSolution::to_flat(const CcdProgram& p) const {
  std::vector<double> x(p.num_vars(), 0.0);
  x[p.sz_e()] = sz_e_mw;
  x[p.sz_c()] = sz_c_mw;
  for (int d = 0; d < p.n_da; ++d) {
    for (int h = 0; h < p.hours; ++h) x[p.p_wd(d, h)] = p_wd[d][h];
    for (int l = 0; l < p.leaves_per_node[d]; ++l) {
      const LeafSchedule& ls = schedules[d][l];
      for (int h = 0; h < p.hours; ++h) {
        x[p.leaf_var(VarRole::Pw, d, l, h)] = ls.p_w[h];
      }
      auto put = [&](VarRole role, const std::vector<double>& src) {
        for (int t = 0; t < p.quarters(); ++t) {
          x[p.leaf_var(role, d, l, t)] = src[t];
        }
      };
      put(VarRole::Pwr, ls.p_wr);
      put(VarRole::Pch, ls.p_ch);
      put(VarRole::Pdis, ls.p_dis);
      put(VarRole::Soc, ls.soc);
      put(VarRole::V1, ls.v1);
      put(VarRole::V2, ls.v2);
      put(VarRole::KResW, ls.k_resw);
      put(VarRole::KResB, ls.k_resb);
      put(VarRole::ResWU, ls.res_wu);
      put(VarRole::ResWD, ls.res_wd);
      put(VarRole::ResBU, ls.res_bu);
      put(VarRole::ResBD, ls.res_bd);
    }
  }
  return x;
}

DesignSolution solve_slp(const CcdProgram& program, const SolveOptions& options) {
  options.validate();
  const int n = program.num_vars();
  const int Q = program.quarters();
  const double g = program.cable.effective_conductance();

  DesignSolution sol;
  sol.residuals.assign(kFamilyCount, 0.0);

  // Incumbent voltage point: flat start at 1 pu (clamped into bounds).
  std::vector<double> v_point(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const auto& v = program.vars[j];
    if (v.role == VarRole::V1 || v.role == VarRole::V2) {
      v_point[j] = std::clamp(1.0, v.lo, v.hi);
    }
  }

  const bool voltages_fixed = [&] {
    for (int j = 0; j < n; ++j) {
      const auto& v = program.vars[j];
      if ((v.role == VarRole::V1 || v.role == VarRole::V2) && v.hi > v.lo) {
        return false;
      }
    }
    return true;
  }();
  if (voltages_fixed) {
    for (int j = 0; j < n; ++j) {
      const auto& v = program.vars[j];
      if (v.role == VarRole::V1 || v.role == VarRole::V2) v_point[j] = v.lo;
    }
  }

  auto pick_engine = [&](const LpProblem& lp) -> std::string {
    if (options.lp_engine != "auto") return options.lp_engine;
    if (lp.num_rows() <= 900 && lp.num_vars() <= 6000) return "simplex";
    return "ipm";
  };

  auto solve_inner = [&](const LpProblem& lp, std::string* engine_used,
                         long* iters) -> LpSolution {
    Presolver pre;
    if (!pre.reduce(lp)) {
      LpSolution bad;
      bad.status = pre.verdict();
      return bad;
    }
    const std::string engine = pick_engine(pre.reduced());
    *engine_used = engine;
    LpSolution inner;
    if (engine == "simplex") {
      SimplexOptions sopt;
      sopt.pivot_tol = options.lp_pivot_tol;
      inner = solve_lp(pre.reduced(), sopt);
    } else {
      IpmOptions iopt;
      iopt.tol = 1e-10;
      iopt.verbose = false;
      inner = solve_lp_ipm(pre.reduced(), iopt);
    }
    *iters += inner.iterations;
    if (inner.status == LpStatus::Optimal ||
        inner.status == LpStatus::IterationLimit) {
      inner.x = pre.postsolve(inner.x);
    }
    return inner;
  };

  double trust = voltages_fixed ? 0.0 : options.trust_radius_init;
  std::vector<double> best_x;
  double best_resid = kInf;
  double prev_obj = kInf;
  bool converged = false;
  int outer = 0;

  for (outer = 0; outer < options.max_outer_iters; ++outer) {
    const LpProblem lp = linearize_program(program, v_point, trust);
    std::string engine;
    LpSolution inner = solve_inner(lp, &engine, &sol.lp_iterations);
    sol.engine = engine;

    if (inner.status == LpStatus::Infeasible ||
        inner.status == LpStatus::Unbounded) {
      if (outer == 0 && !voltages_fixed) {
        // Fixed-voltage fallback: pin voltages at the incumbent and retry.
        const LpProblem fallback = linearize_program(program, v_point, 0.0);
        LpSolution fb = solve_inner(fallback, &engine, &sol.lp_iterations);
        if (fb.status == LpStatus::Optimal) {
          sol.engine = engine + "+fixed_voltage";
          best_x = fb.x;
          break;
        }
      }
      sol.status = inner.status == LpStatus::Infeasible
                       ? SolveStatus::Infeasible
                       : SolveStatus::Unbounded;
      if (!best_x.empty()) break;  // keep the best accepted iterate
      sol.outer_iterations = outer + 1;
      return sol;
    }
    if (inner.status == LpStatus::NumericalTrouble) {
      trust *= options.trust_shrink;
      if (trust < 1e-9) break;
      continue;
    }

    const auto rep = check_feasibility(program, inner.x);
    const double obj = program.rows.empty()
                           ? 0.0
                           : [&] {
                               double o = program.obj_constant;
                               for (int j = 0; j < n; ++j) {
                                 o += program.vars[j].obj * inner.x[j];
                               }
                               return o;
                             }();
    if (options.verbose) {
      std::printf("slp %2d  engine %-7s  obj %.8e  true_resid %.3e  trust %.3g\n",
                  outer, engine.c_str(), obj, rep.max_violation, trust);
    }

    const bool accepted = rep.max_violation <= best_resid * (1.0 + 1e-12) ||
                          rep.max_violation <= options.feasibility_tol;
    if (accepted) {
      const bool obj_converged =
          std::isfinite(prev_obj) &&
          std::abs(obj - prev_obj) <= options.convergence_tol_obj * (1.0 + std::abs(obj));
      best_x = inner.x;
      best_resid = rep.max_violation;
      prev_obj = obj;
      // Re-center the trust region on the accepted voltages.
      for (int j = 0; j < n; ++j) {
        const auto& v = program.vars[j];
        if (v.role == VarRole::V1 || v.role == VarRole::V2) {
          v_point[j] = inner.x[j];
        }
      }
      if (obj_converged && rep.max_violation <= options.feasibility_tol) {
        converged = true;
        ++outer;
        break;
      }
      trust = std::min(trust * options.trust_expand, 0.2);
    } else {
      trust *= options.trust_shrink;
      if (trust < 1e-9) break;
    }
    if (voltages_fixed) {  // single linear solve suffices
      converged = best_resid <= options.feasibility_tol;
      ++outer;
      break;
    }
  }
  sol.outer_iterations = outer;

  if (best_x.empty()) {
    sol.status = SolveStatus::Degraded;
    return sol;
  }

  // Polish 1: closed-form voltage recovery makes the flow rows exact.
  {
    std::vector<double> cand = best_x;
    for (int d = 0; d < program.n_da; ++d) {
      for (int l = 0; l < program.leaves_per_node[d]; ++l) {
        for (int t = 0; t < Q; ++t) {
          const int iv1 = program.leaf_var(VarRole::V1, d, l, t);
          const int iv2 = program.leaf_var(VarRole::V2, d, l, t);
          const double s = cand[program.leaf_var(VarRole::Pw, d, l, t / 4)];
          const double u = cand[program.leaf_var(VarRole::Pwr, d, l, t)] +
                           cand[program.p_wd(d, t / 4)] +
                           cand[program.leaf_var(VarRole::Pch, d, l, t)] -
                           cand[program.leaf_var(VarRole::Pdis, d, l, t)];
          double v1, v2;
          if (recover_voltages(s, u, g, program.vars[iv1].lo,
                               program.vars[iv1].hi, &v1, &v2)) {
            cand[iv1] = v1;
            cand[iv2] = v2;
          }
        }
      }
    }
    if (check_feasibility(program, cand).max_violation <=
        check_feasibility(program, best_x).max_violation) {
      best_x = std::move(cand);
    }
  }

  // Polish 2: re-run the state-of-charge recursion from the charge/discharge
  // schedule so the dynamics hold exactly.
  {
    std::vector<double> cand = best_x;
    const double t2len = 0.25;
    for (int d = 0; d < program.n_da; ++d) {
      for (int l = 0; l < program.leaves_per_node[d]; ++l) {
        double soc = 0.5 * cand[program.sz_e()] * program.ess.duration_h;
        for (int t = 0; t < Q; ++t) {
          soc += (program.ess.eta_ch * cand[program.leaf_var(VarRole::Pch, d, l, t)] -
                  program.ess.eta_dis * cand[program.leaf_var(VarRole::Pdis, d, l, t)]) *
                 t2len;
          cand[program.leaf_var(VarRole::Soc, d, l, t)] = soc;
        }
      }
    }
    if (check_feasibility(program, cand).max_violation <=
        check_feasibility(program, best_x).max_violation) {
      best_x = std::move(cand);
    }
  }

  const auto final_rep = check_feasibility(program, best_x);
  sol.residuals = final_rep.by_family;
  sol.max_residual = final_rep.max_violation;
  extract_solution_arrays(program, best_x, &sol);
  sol.objective_usd = program.obj_constant;
  for (int j = 0; j < n; ++j) {
    sol.objective_usd += program.vars[j].obj * best_x[j];
  }
  if (sol.status == SolveStatus::Infeasible ||
      sol.status == SolveStatus::Unbounded) {
    return sol;  // best-effort schedules attached
  }
  if (final_rep.max_violation <= options.feasibility_tol &&
      (converged || voltages_fixed)) {
    sol.status = SolveStatus::Success;
  } else if (final_rep.max_violation <= options.feasibility_tol) {
    sol.status = outer >= options.max_outer_iters ? SolveStatus::IterationLimit
                                                  : SolveStatus::Success;
  } else {
    sol.status = SolveStatus::Degraded;
  }
  return sol;
}

namespace {

json schedule_to_json(const LeafSchedule& ls) {
  json j;
  j["p_w"] = ls.p_w;
  j["p_wr"] = ls.p_wr;
  j["p_ch"] = ls.p_ch;
  j["p_dis"] = ls.p_dis;
  j["soc"] = ls.soc;
  j["v1"] = ls.v1;
  j["v2"] = ls.v2;
  j["k_resw"] = ls.k_resw;
  j["k_resb"] = ls.k_resb;
  j["res_wu"] = ls.res_wu;
  j["res_wd"] = ls.res_wd;
  j["res_bu"] = ls.res_bu;
  j["res_bd"] = ls.res_bd;
  return j;
}

LeafSchedule schedule_from_json(const json& j) {
  LeafSchedule ls;
  ls.p_w = j.at("p_w").get<std::vector<double>>();
  ls.p_wr = j.at("p_wr").get<std::vector<double>>();
  ls.p_ch = j.at("p_ch").get<std::vector<double>>();
  ls.p_dis = j.at("p_dis").get<std::vector<double>>();
  ls.soc = j.at("soc").get<std::vector<double>>();
  ls.v1 = j.at("v1").get<std::vector<double>>();
  ls.v2 = j.at("v2").get<std::vector<double>>();
  ls.k_resw = j.at("k_resw").get<std::vector<double>>();
  ls.k_resb = j.at("k_resb").get<std::vector<double>>();
  ls.res_wu = j.at("res_wu").get<std::vector<double>>();
  ls.res_wd = j.at("res_wd").get<std::vector<double>>();
  ls.res_bu = j.at("res_bu").get<std::vector<double>>();
  ls.res_bd = j.at("res_bd").get<std::vector<double>>();
  return ls;
}

}  // namespace

std::string solution_to_json(const DesignSolution& sol) {
  json j;
  j["schema_version"] = 1;
  j["status"] = to_string(sol.status);
  j["engine"] = sol.engine;
  j["case"] = to_string(sol.case_kind);
  j["hours"] = sol.hours;
  j["sz_e_mw"] = sol.sz_e_mw;
  j["sz_c_mw"] = sol.sz_c_mw;
  j["objective_usd"] = sol.objective_usd;
  j["outer_iterations"] = sol.outer_iterations;
  j["lp_iterations"] = sol.lp_iterations;
  j["max_residual"] = sol.max_residual;
  json jr = json::object();
  for (int f = 0; f < kFamilyCount; ++f) {
    jr[family_name(static_cast<Family>(f))] = sol.residuals.empty()
                                                  ? 0.0
                                                  : sol.residuals[f];
  }
  j["residuals"] = jr;
  j["breakdown"] = {{"ess_cost_usd", sol.breakdown.ess_cost},
                    {"cable_cost_usd", sol.breakdown.cable_cost},
                    {"da_revenue_usd_per_day", sol.breakdown.da_revenue},
                    {"rt_revenue_usd_per_day", sol.breakdown.rt_revenue},
                    {"reserve_up_revenue_usd_per_day",
                     sol.breakdown.reserve_up_revenue},
                    {"reserve_down_revenue_usd_per_day",
                     sol.breakdown.reserve_down_revenue},
                    {"annuity", sol.breakdown.annuity},
                    {"tax_credit", sol.breakdown.tax_credit}};
  j["da_prob"] = sol.da_prob;
  j["rt_prob"] = sol.rt_prob;
  j["p_wd"] = sol.p_wd;
  j["schedules"] = json::array();
  for (const auto& node : sol.schedules) {
    json jn = json::array();
    for (const auto& ls : node) jn.push_back(schedule_to_json(ls));
    j["schedules"].push_back(std::move(jn));
  }
  return j.dump();
}

DesignSolution solution_from_json(const std::string& text) {
  json j = json::parse(text);
  DesignSolution sol;
  const std::string st = j.at("status").get<std::string>();
  if (st == "success") sol.status = SolveStatus::Success;
  else if (st == "infeasible") sol.status = SolveStatus::Infeasible;
  else if (st == "unbounded") sol.status = SolveStatus::Unbounded;
  else if (st == "iteration_limit") sol.status = SolveStatus::IterationLimit;
  else sol.status = SolveStatus::Degraded;
  sol.engine = j.value("engine", "");
  sol.case_kind = case_from_string(j.at("case").get<std::string>());
  sol.hours = j.at("hours").get<int>();
  sol.sz_e_mw = j.at("sz_e_mw").get<double>();
  sol.sz_c_mw = j.at("sz_c_mw").get<double>();
  sol.objective_usd = j.at("objective_usd").get<double>();
  sol.outer_iterations = j.value("outer_iterations", 0);
  sol.lp_iterations = j.value("lp_iterations", 0L);
  sol.max_residual = j.value("max_residual", 0.0);
  sol.residuals.assign(kFamilyCount, 0.0);
  if (j.contains("residuals")) {
    for (int f = 0; f < kFamilyCount; ++f) {
      sol.residuals[f] =
          j["residuals"].value(family_name(static_cast<Family>(f)), 0.0);
    }
  }
  const auto& bd = j.at("breakdown");
  sol.breakdown.ess_cost = bd.at("ess_cost_usd").get<double>();
  sol.breakdown.cable_cost = bd.at("cable_cost_usd").get<double>();
  sol.breakdown.da_revenue = bd.at("da_revenue_usd_per_day").get<double>();
  sol.breakdown.rt_revenue = bd.at("rt_revenue_usd_per_day").get<double>();
  sol.breakdown.reserve_up_revenue =
      bd.at("reserve_up_revenue_usd_per_day").get<double>();
  sol.breakdown.reserve_down_revenue =
      bd.at("reserve_down_revenue_usd_per_day").get<double>();
  sol.breakdown.annuity = bd.at("annuity").get<double>();
  sol.breakdown.tax_credit = bd.at("tax_credit").get<double>();
  sol.da_prob = j.at("da_prob").get<std::vector<double>>();
  sol.rt_prob = j.at("rt_prob").get<std::vector<std::vector<double>>>();
  sol.p_wd = j.at("p_wd").get<std::vector<std::vector<double>>>();
  for (const auto& jn : j.at("schedules")) {
    std::vector<LeafSchedule> node;
    for (const auto& jl : jn) node.push_back(schedule_from_json(jl));
    sol.schedules.push_back(std::move(node));
  }
  return sol;
}

void save_solution(const DesignSolution& sol, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write solution file: " + path);
  out << solution_to_json(sol);
}

DesignSolution load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solution file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return solution_from_json(ss.str());
}

}  // namespace owfplan
