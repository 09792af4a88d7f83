#include "owfplan/lp.hpp"

#include <algorithm>
#include <cmath>

namespace owfplan {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
    case LpStatus::NumericalTrouble: return "numerical_trouble";
  }
  return "?";
}

double LpProblem::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    if (x[j] < lo[j]) worst = std::max(worst, lo[j] - x[j]);
    if (x[j] > hi[j]) worst = std::max(worst, x[j] - hi[j]);
  }
  for (const auto& row : rows) {
    double a = 0.0;
    for (const auto& t : row.terms) a += t.coef * x[t.var];
    switch (row.sense) {
      case Sense::LE: worst = std::max(worst, a - row.rhs); break;
      case Sense::GE: worst = std::max(worst, row.rhs - a); break;
      case Sense::EQ: worst = std::max(worst, std::abs(a - row.rhs)); break;
    }
  }
  return worst;
}

double LpProblem::objective_value(const std::vector<double>& x) const {
  double v = obj_constant;
  for (int j = 0; j < num_vars(); ++j) v += obj[j] * x[j];
  return v;
}

namespace {

double pow2_round(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
  return std::exp2(std::round(std::log2(v)));
}

}  // namespace

LpProblem equilibrate(const LpProblem& p, Equilibration* out) {
  const int n = p.num_vars();
  const int m = p.num_rows();
  std::vector<double> rs(m, 1.0), cs(n, 1.0);
  std::vector<double> rmin(m), rmax(m), cmin(n), cmax(n);
  for (int sweep = 0; sweep < 2; ++sweep) {
    std::fill(rmin.begin(), rmin.end(), kInf);
    std::fill(rmax.begin(), rmax.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      for (const auto& t : p.rows[i].terms) {
        const double a = std::abs(t.coef) * rs[i] * cs[t.var];
        if (a == 0.0) continue;
        rmin[i] = std::min(rmin[i], a);
        rmax[i] = std::max(rmax[i], a);
      }
    }
    for (int i = 0; i < m; ++i) {
      if (rmax[i] > 0.0) rs[i] *= pow2_round(1.0 / std::sqrt(rmin[i] * rmax[i]));
    }
    std::fill(cmin.begin(), cmin.end(), kInf);
    std::fill(cmax.begin(), cmax.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      for (const auto& t : p.rows[i].terms) {
        const double a = std::abs(t.coef) * rs[i] * cs[t.var];
        if (a == 0.0) continue;
        cmin[t.var] = std::min(cmin[t.var], a);
        cmax[t.var] = std::max(cmax[t.var], a);
      }
    }
    for (int j = 0; j < n; ++j) {
      if (cmax[j] > 0.0) cs[j] *= pow2_round(1.0 / std::sqrt(cmin[j] * cmax[j]));
    }
  }

  LpProblem q;
  q.obj_constant = p.obj_constant;
  for (int j = 0; j < n; ++j) {
    // x = cs * x'  =>  bounds divide, cost multiplies.
    q.add_var(p.lo[j] / cs[j], p.hi[j] / cs[j], p.obj[j] * cs[j]);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<LinTerm> terms = p.rows[i].terms;
    for (auto& t : terms) t.coef *= rs[i] * cs[t.var];
    q.add_row(p.rows[i].sense, p.rows[i].rhs * rs[i], std::move(terms),
              p.rows[i].block);
  }
  if (out) {
    out->row_scale = std::move(rs);
    out->col_scale = std::move(cs);
  }
  return q;
}

}  // namespace owfplan
