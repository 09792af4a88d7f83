#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "owfplan/lp.hpp"

namespace owfplan {

namespace {

enum class VState : char { AtLo, AtHi, Basic, FreeZero };

// Scaled working copy: structural columns 0..n-1, slack of row i is column
// n+i with pattern e_i. Geometric row/column equilibration rounded to powers
// of two so descaling is exact.
struct Work {
  int n = 0, m = 0, N = 0;
  std::vector<std::vector<std::pair<int, double>>> cols;  // structural only
  std::vector<double> lo, hi, cost;  // size N
  std::vector<double> b;             // scaled rhs
  std::vector<double> rs, cs;        // row/col scales
};

double pow2_round(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
  return std::exp2(std::round(std::log2(v)));
}

Work build_work(const LpProblem& p) {
  Work w;
  w.n = p.num_vars();
  w.m = p.num_rows();
  w.N = w.n + w.m;
  w.rs.assign(w.m, 1.0);
  w.cs.assign(w.n, 1.0);

  // Two sweeps of geometric mean scaling.
  std::vector<double> rmin(w.m), rmax(w.m), cmin(w.n), cmax(w.n);
  for (int sweep = 0; sweep < 2; ++sweep) {
    std::fill(rmin.begin(), rmin.end(), kInf);
    std::fill(rmax.begin(), rmax.end(), 0.0);
    for (int i = 0; i < w.m; ++i) {
      for (const auto& t : p.rows[i].terms) {
        const double a = std::abs(t.coef) * w.rs[i] * w.cs[t.var];
        if (a == 0.0) continue;
        rmin[i] = std::min(rmin[i], a);
        rmax[i] = std::max(rmax[i], a);
      }
    }
    for (int i = 0; i < w.m; ++i) {
      if (rmax[i] > 0.0) w.rs[i] *= pow2_round(1.0 / std::sqrt(rmin[i] * rmax[i]));
    }
    std::fill(cmin.begin(), cmin.end(), kInf);
    std::fill(cmax.begin(), cmax.end(), 0.0);
    for (int i = 0; i < w.m; ++i) {
      for (const auto& t : p.rows[i].terms) {
        const double a = std::abs(t.coef) * w.rs[i] * w.cs[t.var];
        if (a == 0.0) continue;
        cmin[t.var] = std::min(cmin[t.var], a);
        cmax[t.var] = std::max(cmax[t.var], a);
      }
    }
    for (int j = 0; j < w.n; ++j) {
      if (cmax[j] > 0.0) w.cs[j] *= pow2_round(1.0 / std::sqrt(cmin[j] * cmax[j]));
    }
  }

  w.cols.assign(w.n, {});
  for (int i = 0; i < w.m; ++i) {
    for (const auto& t : p.rows[i].terms) {
      if (t.coef == 0.0) continue;
      w.cols[t.var].push_back({i, t.coef * w.rs[i] * w.cs[t.var]});
    }
  }
  w.lo.resize(w.N);
  w.hi.resize(w.N);
  w.cost.assign(w.N, 0.0);
  for (int j = 0; j < w.n; ++j) {
    // x' = x / cs  =>  bounds shrink by cs; cost grows by cs.
    w.lo[j] = p.lo[j] / w.cs[j];
    w.hi[j] = p.hi[j] / w.cs[j];
    w.cost[j] = p.obj[j] * w.cs[j];
  }
  w.b.resize(w.m);
  for (int i = 0; i < w.m; ++i) {
    w.b[i] = p.rows[i].rhs * w.rs[i];
    const int s = w.n + i;
    switch (p.rows[i].sense) {
      case Sense::LE: w.lo[s] = 0.0; w.hi[s] = kInf; break;
      case Sense::GE: w.lo[s] = -kInf; w.hi[s] = 0.0; break;
      case Sense::EQ: w.lo[s] = 0.0; w.hi[s] = 0.0; break;
    }
  }
  return w;
}

class Simplex {
 public:
  Simplex(const Work& w, const SimplexOptions& opt) : w_(w), opt_(opt) {}

  LpSolution run(const LpProblem& problem);

 private:
  const Work& w_;
  const SimplexOptions& opt_;

  std::vector<int> basic_;       // var per row
  std::vector<int> row_of_;      // var -> row or -1
  std::vector<VState> state_;    // per var
  std::vector<double> x_;        // per var
  Eigen::MatrixXd binv_;
  int iters_ = 0;
  int degen_run_ = 0;
  bool use_bland_ = false;

  void column_into(int j, Eigen::VectorXd& dense) const {
    dense.setZero();
    if (j < w_.n) {
      for (const auto& [i, a] : w_.cols[j]) dense[i] = a;
    } else {
      dense[j - w_.n] = 1.0;
    }
  }

  double col_dot(const Eigen::VectorXd& y, int j) const {
    if (j >= w_.n) return y[j - w_.n];
    double s = 0.0;
    for (const auto& [i, a] : w_.cols[j]) s += y[i] * a;
    return s;
  }

  bool refactor() {
    Eigen::MatrixXd B(w_.m, w_.m);
    Eigen::VectorXd col(w_.m);
    for (int r = 0; r < w_.m; ++r) {
      column_into(basic_[r], col);
      B.col(r) = col;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    binv_ = lu.inverse();
    return binv_.allFinite();
  }

  void recompute_basics() {
    Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(w_.b.data(), w_.m);
    for (int j = 0; j < w_.N; ++j) {
      if (state_[j] == VState::Basic || x_[j] == 0.0) continue;
      if (j < w_.n) {
        for (const auto& [i, a] : w_.cols[j]) r[i] -= a * x_[j];
      } else {
        r[j - w_.n] -= x_[j];
      }
    }
    Eigen::VectorXd xb = binv_ * r;
    for (int i = 0; i < w_.m; ++i) x_[basic_[i]] = xb[i];
  }

  double infeasibility() const {
    double s = 0.0;
    for (int r = 0; r < w_.m; ++r) {
      const int j = basic_[r];
      if (x_[j] < w_.lo[j]) s += w_.lo[j] - x_[j];
      if (x_[j] > w_.hi[j]) s += x_[j] - w_.hi[j];
    }
    return s;
  }

  // One simplex pass with the given costs; phase1 allows infeasible basics.
  LpStatus iterate(bool phase1, const std::vector<double>& cost);

  LpSolution finish(const LpProblem& problem, LpStatus status);
};

LpStatus Simplex::iterate(bool phase1, const std::vector<double>& cost) {
  Eigen::VectorXd y(w_.m), wcol(w_.m);
  std::vector<double> cb(w_.m);

  while (true) {
    if (iters_ >= opt_.max_iters) return LpStatus::IterationLimit;

    if (phase1) {
      double inf = 0.0;
      for (int r = 0; r < w_.m; ++r) {
        const int j = basic_[r];
        const double viol =
            std::max({0.0, w_.lo[j] - x_[j], x_[j] - w_.hi[j]});
        inf += viol;
      }
      if (inf <= opt_.feas_tol * (1.0 + static_cast<double>(w_.m))) {
        return LpStatus::Optimal;  // feasible; caller proceeds to phase 2
      }
      for (int r = 0; r < w_.m; ++r) {
        const int j = basic_[r];
        cb[r] = (x_[j] < w_.lo[j] - opt_.feas_tol) ? -1.0
                : (x_[j] > w_.hi[j] + opt_.feas_tol) ? 1.0
                                                     : 0.0;
      }
    } else {
      for (int r = 0; r < w_.m; ++r) cb[r] = cost[basic_[r]];
    }
    y.noalias() = binv_.transpose() * Eigen::Map<const Eigen::VectorXd>(cb.data(), w_.m);

    // Price nonbasic columns.
    int enter = -1;
    double enter_dir = 0.0;
    double best = use_bland_ ? 0.0 : opt_.opt_tol;
    for (int j = 0; j < w_.N; ++j) {
      if (state_[j] == VState::Basic) continue;
      if (w_.lo[j] == w_.hi[j]) continue;  // fixed
      const double cj = phase1 ? 0.0 : cost[j];
      const double rj = cj - col_dot(y, j);
      double score = 0.0;
      double dir = 0.0;
      if ((state_[j] == VState::AtLo || state_[j] == VState::FreeZero) &&
          rj < -opt_.opt_tol) {
        score = -rj;
        dir = 1.0;
      }
      if ((state_[j] == VState::AtHi || state_[j] == VState::FreeZero) &&
          rj > opt_.opt_tol && score < rj) {
        score = rj;
        dir = -1.0;
      }
      if (dir == 0.0) continue;
      if (use_bland_) {
        enter = j;
        enter_dir = dir;
        break;
      }
      if (score > best) {
        best = score;
        enter = j;
        enter_dir = dir;
      }
    }
    if (enter < 0) {
      return phase1 ? LpStatus::Infeasible : LpStatus::Optimal;
    }

    Eigen::VectorXd aj(w_.m);
    column_into(enter, aj);
    wcol.noalias() = binv_ * aj;

    // Ratio test. Moving x_enter by enter_dir*step changes basic r by
    // -wcol[r]*enter_dir*step.
    double step = kInf;
    int leave_row = -1;
    double leave_bound = 0.0;
    // Entering variable's own bound flip.
    const double range = w_.hi[enter] - w_.lo[enter];
    if (std::isfinite(range)) step = range;

    for (int r = 0; r < w_.m; ++r) {
      const double d = -wcol[r] * enter_dir;
      if (std::abs(d) <= opt_.pivot_tol) continue;
      const int j = basic_[r];
      double target;
      if (phase1 && x_[j] < w_.lo[j] - opt_.feas_tol) {
        // Infeasible below: blocks when it reaches lo (moving up) or never
        // improves (moving down keeps it infeasible; no block from it).
        if (d > 0.0) {
          target = w_.lo[j];
        } else {
          continue;
        }
      } else if (phase1 && x_[j] > w_.hi[j] + opt_.feas_tol) {
        if (d < 0.0) {
          target = w_.hi[j];
        } else {
          continue;
        }
      } else {
        target = d > 0.0 ? w_.hi[j] : w_.lo[j];
        if (!std::isfinite(target)) continue;
      }
      const double s = (target - x_[j]) / d;
      const double s_clamped = std::max(s, 0.0);
      if (s_clamped < step - 1e-15 ||
          (use_bland_ && s_clamped <= step && leave_row >= 0 &&
           basic_[r] < basic_[leave_row])) {
        step = s_clamped;
        leave_row = r;
        leave_bound = target;
      }
    }

    if (!std::isfinite(step)) {
      return phase1 ? LpStatus::NumericalTrouble : LpStatus::Unbounded;
    }

    ++iters_;
    if (step <= 1e-11) {
      if (++degen_run_ > opt_.bland_after) use_bland_ = true;
    } else {
      degen_run_ = 0;
      use_bland_ = false;
    }

    // Apply the move.
    x_[enter] += enter_dir * step;
    for (int r = 0; r < w_.m; ++r) {
      x_[basic_[r]] -= wcol[r] * enter_dir * step;
    }

    if (leave_row < 0) {
      // Bound flip: entering variable swapped bounds, basis unchanged.
      state_[enter] = (enter_dir > 0.0) ? VState::AtHi : VState::AtLo;
      x_[enter] = (enter_dir > 0.0) ? w_.hi[enter] : w_.lo[enter];
      continue;
    }

    const int leave = basic_[leave_row];
    x_[leave] = leave_bound;
    state_[leave] =
        (leave_bound == w_.lo[leave]) ? VState::AtLo : VState::AtHi;
    if (!std::isfinite(w_.lo[leave]) && !std::isfinite(w_.hi[leave])) {
      state_[leave] = VState::FreeZero;  // should not happen: free never leaves
    }
    basic_[leave_row] = enter;
    state_[enter] = VState::Basic;
    row_of_[enter] = leave_row;
    row_of_[leave] = -1;

    // Product-form update of the explicit inverse.
    const double piv = wcol[leave_row];
    if (std::abs(piv) < opt_.pivot_tol) {
      if (!refactor()) return LpStatus::NumericalTrouble;
      recompute_basics();
      continue;
    }
    Eigen::RowVectorXd pivot_row = binv_.row(leave_row) / piv;
    for (int r = 0; r < w_.m; ++r) {
      if (r == leave_row) continue;
      const double f = wcol[r];
      if (f != 0.0) binv_.row(r).noalias() -= f * pivot_row;
    }
    binv_.row(leave_row) = pivot_row;

    if (iters_ % opt_.refactor_every == 0) {
      if (!refactor()) return LpStatus::NumericalTrouble;
      recompute_basics();
    }
  }
}

LpSolution Simplex::finish(const LpProblem& problem, LpStatus status) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iters_;
  sol.x.assign(w_.n, 0.0);
  for (int j = 0; j < w_.n; ++j) sol.x[j] = x_[j] * w_.cs[j];
  if (status == LpStatus::Optimal) {
    sol.objective = problem.objective_value(sol.x);
  }
  // Duals from the final basis and true costs.
  std::vector<double> cb(w_.m);
  for (int r = 0; r < w_.m; ++r) cb[r] = w_.cost[basic_[r]];
  Eigen::VectorXd y =
      binv_.transpose() * Eigen::Map<const Eigen::VectorXd>(cb.data(), w_.m);
  sol.row_duals.assign(w_.m, 0.0);
  for (int i = 0; i < w_.m; ++i) sol.row_duals[i] = y[i] * w_.rs[i];
  sol.basis = basic_;
  sol.at_upper.assign(w_.N, 0);
  for (int j = 0; j < w_.N; ++j) {
    if (state_[j] == VState::AtHi) sol.at_upper[j] = 1;
  }
  return sol;
}

LpSolution Simplex::run(const LpProblem& problem) {
  basic_.assign(w_.m, 0);
  row_of_.assign(w_.N, -1);
  state_.assign(w_.N, VState::AtLo);
  x_.assign(w_.N, 0.0);

  bool warm_ok = false;
  if (opt_.warm && static_cast<int>(opt_.warm->basis.size()) == w_.m &&
      static_cast<int>(opt_.warm->at_upper.size()) == w_.N) {
    warm_ok = true;
    std::vector<char> used(w_.N, 0);
    for (int r = 0; r < w_.m; ++r) {
      const int j = opt_.warm->basis[r];
      if (j < 0 || j >= w_.N || used[j]) {
        warm_ok = false;
        break;
      }
      used[j] = 1;
    }
    if (warm_ok) {
      basic_ = opt_.warm->basis;
      for (int r = 0; r < w_.m; ++r) {
        state_[basic_[r]] = VState::Basic;
        row_of_[basic_[r]] = r;
      }
      for (int j = 0; j < w_.N; ++j) {
        if (state_[j] == VState::Basic) continue;
        if (opt_.warm->at_upper[j] && std::isfinite(w_.hi[j])) {
          state_[j] = VState::AtHi;
          x_[j] = w_.hi[j];
        } else if (std::isfinite(w_.lo[j])) {
          state_[j] = VState::AtLo;
          x_[j] = w_.lo[j];
        } else if (std::isfinite(w_.hi[j])) {
          state_[j] = VState::AtHi;
          x_[j] = w_.hi[j];
        } else {
          state_[j] = VState::FreeZero;
          x_[j] = 0.0;
        }
      }
      if (!refactor()) warm_ok = false;
    }
  }
  if (!warm_ok) {
    for (int i = 0; i < w_.m; ++i) {
      basic_[i] = w_.n + i;
      row_of_[w_.n + i] = i;
      state_[w_.n + i] = VState::Basic;
    }
    for (int j = 0; j < w_.n; ++j) {
      if (std::isfinite(w_.lo[j])) {
        state_[j] = VState::AtLo;
        x_[j] = w_.lo[j];
      } else if (std::isfinite(w_.hi[j])) {
        state_[j] = VState::AtHi;
        x_[j] = w_.hi[j];
      } else {
        state_[j] = VState::FreeZero;
        x_[j] = 0.0;
      }
    }
    binv_ = Eigen::MatrixXd::Identity(w_.m, w_.m);
  }
  recompute_basics();

  LpStatus st = iterate(/*phase1=*/true, w_.cost);
  if (st == LpStatus::Optimal) {
    st = iterate(/*phase1=*/false, w_.cost);
    // Guard against drift introduced by product-form updates.
    if (st == LpStatus::Optimal) {
      if (!refactor()) st = LpStatus::NumericalTrouble;
      recompute_basics();
      if (infeasibility() > 1e-7 * (1.0 + static_cast<double>(w_.m))) {
        st = iterate(/*phase1=*/true, w_.cost);
        if (st == LpStatus::Optimal) st = iterate(/*phase1=*/false, w_.cost);
      }
    }
  }
  return finish(problem, st);
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options) {
  // Degenerate corner: no rows at all.
  if (problem.num_rows() == 0) {
    LpSolution sol;
    sol.x.assign(problem.num_vars(), 0.0);
    sol.status = LpStatus::Optimal;
    for (int j = 0; j < problem.num_vars(); ++j) {
      if (problem.obj[j] > 0.0) {
        if (!std::isfinite(problem.lo[j])) {
          sol.status = LpStatus::Unbounded;
          return sol;
        }
        sol.x[j] = problem.lo[j];
      } else if (problem.obj[j] < 0.0) {
        if (!std::isfinite(problem.hi[j])) {
          sol.status = LpStatus::Unbounded;
          return sol;
        }
        sol.x[j] = problem.hi[j];
      } else {
        sol.x[j] = std::isfinite(problem.lo[j]) ? problem.lo[j]
                   : std::isfinite(problem.hi[j]) ? problem.hi[j]
                                                  : 0.0;
      }
      if (problem.lo[j] > problem.hi[j]) {
        sol.status = LpStatus::Infeasible;
        return sol;
      }
    }
    sol.objective = problem.objective_value(sol.x);
    return sol;
  }

  Work w = build_work(problem);
  Simplex simplex(w, options);
  return simplex.run(problem);
}

}  // namespace owfplan
