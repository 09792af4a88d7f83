#include "owfplan/presolve.hpp"

#include <algorithm>
#include <cmath>

namespace owfplan {

namespace {

constexpr double kFeasEps = 1e-9;

struct MutableRow {
  Sense sense;
  double rhs;
  std::vector<LinTerm> terms;
  int block;
  bool alive = true;
};

}  // namespace

bool Presolver::reduce(const LpProblem& p) {
  const int n = p.num_vars();
  std::vector<double> lo = p.lo, hi = p.hi, obj = p.obj;
  double obj_const = p.obj_constant;

  std::vector<MutableRow> rows(p.num_rows());
  for (int i = 0; i < p.num_rows(); ++i) {
    rows[i] = {p.rows[i].sense, p.rows[i].rhs, p.rows[i].terms,
               p.rows[i].block, true};
  }

  std::vector<char> eliminated(n, 0);
  var_value_.assign(n, 0.0);
  substs_.clear();

  // Column occurrence counts, kept approximately current.
  std::vector<int> col_count(n, 0);
  for (const auto& r : rows) {
    for (const auto& t : r.terms) col_count[t.var]++;
  }

  auto tighten = [&](int v, double new_lo, double new_hi) -> bool {
    lo[v] = std::max(lo[v], new_lo);
    hi[v] = std::min(hi[v], new_hi);
    return lo[v] <= hi[v] + kFeasEps;
  };

  bool changed = true;
  int passes = 0;
  while (changed && passes < 12) {
    changed = false;
    ++passes;

    // Fold variables fixed by their bounds into the rhs.
    for (int v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      if (lo[v] > hi[v] + kFeasEps) {
        verdict_ = LpStatus::Infeasible;
        return false;
      }
      if (std::isfinite(lo[v]) && hi[v] - lo[v] <= 0.0) {
        eliminated[v] = 1;
        var_value_[v] = lo[v];
        obj_const += obj[v] * lo[v];
        for (auto& r : rows) {
          if (!r.alive) continue;
          for (size_t k = 0; k < r.terms.size(); ++k) {
            if (r.terms[k].var == v) {
              r.rhs -= r.terms[k].coef * lo[v];
              r.terms.erase(r.terms.begin() + k);
              changed = true;
              break;
            }
          }
        }
        col_count[v] = 0;
      }
    }

    for (size_t i = 0; i < rows.size(); ++i) {
      auto& r = rows[i];
      if (!r.alive) continue;

      if (r.terms.empty()) {
        const bool ok = (r.sense == Sense::LE && r.rhs >= -kFeasEps) ||
                        (r.sense == Sense::GE && r.rhs <= kFeasEps) ||
                        (r.sense == Sense::EQ && std::abs(r.rhs) <= kFeasEps);
        if (!ok) {
          verdict_ = LpStatus::Infeasible;
          return false;
        }
        r.alive = false;
        changed = true;
        continue;
      }

      if (r.terms.size() == 1) {
        const int v = r.terms[0].var;
        const double a = r.terms[0].coef;
        if (std::abs(a) < 1e-300) continue;
        const double bv = r.rhs / a;
        bool ok = true;
        if (r.sense == Sense::EQ) {
          ok = tighten(v, bv, bv);
        } else if ((r.sense == Sense::LE) == (a > 0.0)) {
          ok = tighten(v, -kInf, bv);
        } else {
          ok = tighten(v, bv, kInf);
        }
        if (!ok) {
          verdict_ = LpStatus::Infeasible;
          return false;
        }
        r.alive = false;
        col_count[v]--;
        changed = true;
        continue;
      }

      // Zero-rhs doubleton equality: y = alpha * x.
      if (r.sense == Sense::EQ && r.terms.size() == 2 &&
          std::abs(r.rhs) <= 1e-300) {
        const int v0 = r.terms[0].var, v1 = r.terms[1].var;
        const double a0 = r.terms[0].coef, a1 = r.terms[1].coef;
        if (v0 == v1) continue;
        if (std::abs(a0) < 1e-12 || std::abs(a1) < 1e-12) continue;
        // Eliminate the sparser column.
        int y = v0, x = v1;
        double ay = a0, ax = a1;
        if (col_count[v1] < col_count[v0]) {
          std::swap(y, x);
          std::swap(ay, ax);
        }
        const double alpha = -ax / ay;  // y = alpha * x
        // Transfer y's bounds onto x.
        bool ok;
        if (alpha > 0.0) {
          ok = tighten(x, lo[y] / alpha, hi[y] / alpha);
        } else {
          ok = tighten(x, hi[y] / alpha, lo[y] / alpha);
        }
        if (!ok) {
          verdict_ = LpStatus::Infeasible;
          return false;
        }
        obj[x] += obj[y] * alpha;
        for (auto& r2 : rows) {
          if (!r2.alive || &r2 == &r) continue;
          double coef_y = 0.0;
          bool has_y = false;
          for (size_t k = 0; k < r2.terms.size(); ++k) {
            if (r2.terms[k].var == y) {
              coef_y = r2.terms[k].coef;
              r2.terms.erase(r2.terms.begin() + k);
              has_y = true;
              break;
            }
          }
          if (!has_y) continue;
          bool merged = false;
          for (auto& t : r2.terms) {
            if (t.var == x) {
              t.coef += coef_y * alpha;
              merged = true;
              break;
            }
          }
          if (!merged) {
            r2.terms.push_back({x, coef_y * alpha});
            col_count[x]++;
          }
          col_count[y]--;
        }
        eliminated[y] = 1;
        substs_.push_back({y, x, alpha, 0.0});
        r.alive = false;
        col_count[y] = 0;
        changed = true;
        continue;
      }
    }

    // Empty columns: pin to the cost-preferred bound.
    std::vector<int> live_count(n, 0);
    for (const auto& r : rows) {
      if (!r.alive) continue;
      for (const auto& t : r.terms) live_count[t.var]++;
    }
    for (int v = 0; v < n; ++v) {
      if (eliminated[v] || live_count[v] > 0) continue;
      double val;
      if (obj[v] > 0.0) {
        if (!std::isfinite(lo[v])) {
          verdict_ = LpStatus::Unbounded;
          return false;
        }
        val = lo[v];
      } else if (obj[v] < 0.0) {
        if (!std::isfinite(hi[v])) {
          verdict_ = LpStatus::Unbounded;
          return false;
        }
        val = hi[v];
      } else {
        val = std::isfinite(lo[v]) ? lo[v] : (std::isfinite(hi[v]) ? hi[v] : 0.0);
      }
      eliminated[v] = 1;
      var_value_[v] = val;
      obj_const += obj[v] * val;
      changed = true;
    }
  }

  // Assemble the reduced problem.
  var_map_.assign(n, -1);
  reduced_ = LpProblem{};
  for (int v = 0; v < n; ++v) {
    if (eliminated[v]) continue;
    var_map_[v] = reduced_.add_var(lo[v], hi[v], obj[v]);
  }
  reduced_.obj_constant = obj_const;
  row_map_.assign(rows.size(), -1);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].alive) continue;
    std::vector<LinTerm> terms;
    terms.reserve(rows[i].terms.size());
    for (const auto& t : rows[i].terms) {
      if (t.coef != 0.0) terms.push_back({var_map_[t.var], t.coef});
    }
    row_map_[i] = reduced_.num_rows();
    reduced_.add_row(rows[i].sense, rows[i].rhs, std::move(terms),
                     rows[i].block);
  }
  verdict_ = LpStatus::Optimal;
  return true;
}

std::vector<double> Presolver::postsolve(const std::vector<double>& rx) const {
  std::vector<double> x = var_value_;
  for (size_t v = 0; v < var_map_.size(); ++v) {
    if (var_map_[v] >= 0) x[v] = rx[var_map_[v]];
  }
  for (auto it = substs_.rbegin(); it != substs_.rend(); ++it) {
    x[it->eliminated] = it->alpha * x[it->kept] + it->beta;
  }
  return x;
}

std::vector<double> Presolver::postsolve_duals(
    const std::vector<double>& rd) const {
  std::vector<double> y(row_map_.size(), 0.0);
  for (size_t i = 0; i < row_map_.size(); ++i) {
    if (row_map_[i] >= 0) y[i] = rd[row_map_[i]];
  }
  return y;
}

}  // namespace owfplan
