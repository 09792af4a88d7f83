#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

#include "owfplan/lp.hpp"

namespace owfplan {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Vec = Eigen::VectorXd;

// Internal standard form: min c'w  s.t.  A w = b,  0 <= w <= u (u may be inf).
// Original variables map back via x = sgn*w + off; free variables are split
// into a +/- pair; inequality rows carry slack columns.
struct Standard {
  SpMat a;  // m x nw
  Vec b, c, u;
  std::vector<int> sgn;
  std::vector<double> off;
  std::vector<int> owner;  // original var index, -1 for slacks
  std::vector<std::pair<int, int>> free_pairs;
  int m = 0, nw = 0;
};

Standard standardize(const LpProblem& p) {
  Standard s;
  s.m = p.num_rows();
  const int n = p.num_vars();

  std::vector<double> u, c, off;
  std::vector<int> sgn, owner;
  auto add_col = [&](int own, int sg, double of, double ub, double cost) {
    sgn.push_back(sg);
    off.push_back(of);
    owner.push_back(own);
    u.push_back(ub);
    c.push_back(cost);
    return static_cast<int>(sgn.size()) - 1;
  };

  std::vector<int> col_of(n, -1), col_neg(n, -1);
  for (int j = 0; j < n; ++j) {
    const bool lo_f = std::isfinite(p.lo[j]);
    const bool hi_f = std::isfinite(p.hi[j]);
    if (lo_f) {
      col_of[j] =
          add_col(j, +1, p.lo[j], hi_f ? p.hi[j] - p.lo[j] : kInf, p.obj[j]);
    } else if (hi_f) {
      col_of[j] = add_col(j, -1, p.hi[j], kInf, -p.obj[j]);
    } else {
      col_of[j] = add_col(j, +1, 0.0, kInf, p.obj[j]);
      col_neg[j] = add_col(j, -1, 0.0, kInf, -p.obj[j]);
      s.free_pairs.push_back({col_of[j], col_neg[j]});
    }
  }

  std::vector<Triplet> trips;
  s.b = Vec::Zero(s.m);
  for (int i = 0; i < s.m; ++i) {
    const auto& row = p.rows[i];
    double shift = 0.0;
    for (const auto& t : row.terms) {
      const int jw = col_of[t.var];
      trips.emplace_back(i, jw, t.coef * sgn[jw]);
      shift += t.coef * off[jw];
      if (col_neg[t.var] >= 0) {
        trips.emplace_back(i, col_neg[t.var], t.coef * sgn[col_neg[t.var]]);
      }
    }
    s.b[i] = row.rhs - shift;
    if (row.sense == Sense::LE) {
      trips.emplace_back(i, add_col(-1, +1, 0.0, kInf, 0.0), 1.0);
    } else if (row.sense == Sense::GE) {
      trips.emplace_back(i, add_col(-1, +1, 0.0, kInf, 0.0), -1.0);
    }
  }
  s.nw = static_cast<int>(sgn.size());
  s.sgn = std::move(sgn);
  s.off = std::move(off);
  s.owner = std::move(owner);
  s.c = Eigen::Map<Vec>(c.data(), s.nw);
  s.u = Eigen::Map<Vec>(u.data(), s.nw);
  s.a.resize(s.m, s.nw);
  s.a.setFromTriplets(trips.begin(), trips.end());
  s.a.makeCompressed();
  return s;
}

// Normal-equation operator  A diag(d) A' + delta I,  factored as a sparse
// LDL^T over the block-local columns plus a dense low-rank (Woodbury) update
// for the few columns whose rows span several blocks (the design variables).
class NormalSolver {
 public:
  NormalSolver(const SpMat& a, const std::vector<int>& row_block)
      : a_(a), m_(static_cast<int>(a.rows())) {
    const int nw = static_cast<int>(a.cols());
    std::vector<char> global(nw, 0);
    int count = 0;
    for (int j = 0; j < nw; ++j) {
      int seen = -2;
      for (SpMat::InnerIterator it(a_, j); it; ++it) {
        const int blk = row_block[it.row()];
        if (seen == -2) {
          seen = blk;
        } else if (blk != seen) {
          global[j] = 1;
          ++count;
          break;
        }
      }
    }
    if (count > 64) {
      std::fill(global.begin(), global.end(), 0);  // low-rank fix not worth it
    }
    for (int j = 0; j < nw; ++j) {
      if (global[j]) global_cols_.push_back(j);
    }

    a_local_ = a_;
    for (int j : global_cols_) {
      for (SpMat::InnerIterator it(a_local_, j); it; ++it) it.valueRef() = 0.0;
    }
    a_local_.prune([](int, int, double v) { return v != 0.0; });
  }

  bool factorize(const Vec& d, double delta) {
    Vec d_local = d;
    for (int j : global_cols_) d_local[j] = 0.0;
    SpMat ad = a_local_ * d_local.asDiagonal();
    SpMat mat = ad * a_local_.transpose();
    SpMat reg(m_, m_);
    reg.setIdentity();
    mat += reg * delta;
    if (!analyzed_) {
      ldlt_.analyzePattern(mat);
      analyzed_ = true;
    }
    ldlt_.factorize(mat);
    if (ldlt_.info() != Eigen::Success) {
      analyzed_ = false;
      return false;
    }

    const int k = static_cast<int>(global_cols_.size());
    if (k > 0) {
      u_.resize(m_, k);
      u_.setZero();
      for (int c = 0; c < k; ++c) {
        for (SpMat::InnerIterator it(a_, global_cols_[c]); it; ++it) {
          u_(it.row(), c) = it.value();
        }
      }
      v_ = ldlt_.solve(u_);
      Eigen::MatrixXd cap = u_.transpose() * v_;
      for (int c = 0; c < k; ++c) {
        cap(c, c) += 1.0 / std::max(d[global_cols_[c]], 1e-300);
      }
      cap_.compute(cap);
      if (cap_.info() != Eigen::Success) return false;
    }
    delta_ = delta;
    d_ = d;
    return true;
  }

  Vec solve(const Vec& r) const {
    Vec x = solve_once(r);
    Vec res = r - apply(x);
    x += solve_once(res);  // one refinement round
    return x;
  }

 private:
  Vec solve_once(const Vec& r) const {
    Vec x = ldlt_.solve(r);
    if (!global_cols_.empty()) {
      x -= v_ * cap_.solve(u_.transpose() * x);
    }
    return x;
  }

  Vec apply(const Vec& y) const {
    Vec aty = a_.transpose() * y;
    aty.array() *= d_.array();
    return a_ * aty + delta_ * y;
  }

  const SpMat& a_;
  SpMat a_local_;
  int m_;
  std::vector<int> global_cols_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  bool analyzed_ = false;
  Eigen::MatrixXd u_, v_;
  Eigen::LDLT<Eigen::MatrixXd> cap_;
  double delta_ = 0.0;
  Vec d_;
};

}  // namespace

namespace {
LpSolution solve_lp_ipm_core(const LpProblem& problem, const IpmOptions& options);
}  // namespace

LpSolution solve_lp_ipm(const LpProblem& problem, const IpmOptions& options) {
  if (problem.num_rows() == 0) {
    return solve_lp(problem, SimplexOptions{});
  }
  Equilibration eq;
  const LpProblem scaled = equilibrate(problem, &eq);
  LpSolution sol = solve_lp_ipm_core(scaled, options);
  for (int j = 0; j < problem.num_vars(); ++j) sol.x[j] *= eq.col_scale[j];
  for (int i = 0; i < problem.num_rows(); ++i) {
    sol.row_duals[i] *= eq.row_scale[i];
  }
  sol.objective = problem.objective_value(sol.x);
  return sol;
}

namespace {

LpSolution solve_lp_ipm_core(const LpProblem& problem,
                             const IpmOptions& options) {
  LpSolution sol;
  const int m = problem.num_rows();

  Standard s = standardize(problem);
  const int nw = s.nw;

  std::vector<int> row_block(m, 0);
  for (int i = 0; i < m; ++i) {
    row_block[i] = std::max(problem.rows[i].block, 0);
  }

  NormalSolver normal(s.a, row_block);

  const double bnorm = 1.0 + s.b.lpNorm<Eigen::Infinity>();
  const double cnorm = 1.0 + s.c.lpNorm<Eigen::Infinity>();

  Vec w(nw), z(nw), t = Vec::Zero(nw), sb = Vec::Zero(nw);
  {
    if (!normal.factorize(Vec::Ones(nw), 1e-6)) {
      sol.status = LpStatus::NumericalTrouble;
      return sol;
    }
    Vec v = normal.solve(s.b);
    Vec w0 = s.a.transpose() * v;
    Vec y0 = normal.solve(s.a * s.c);
    Vec z0 = s.c - s.a.transpose() * y0;

    const double dw = std::max(0.0, -1.5 * w0.minCoeff());
    const double dz = std::max(0.0, -1.5 * z0.minCoeff());
    Vec wp = w0.array() + dw + 0.1;
    Vec zp = z0.array() + dz + 0.1;
    const double wz = wp.dot(zp);
    w = wp.array() + 0.5 * wz / zp.sum();
    z = zp.array() + 0.5 * wz / wp.sum();
    for (int j = 0; j < nw; ++j) {
      if (std::isfinite(s.u[j])) {
        const double uj = std::max(s.u[j], 1e-8);
        w[j] = std::clamp(w[j], 0.01 * uj, 0.99 * uj);
        t[j] = s.u[j] - w[j];
        sb[j] = std::max(z[j], 0.1);
      }
      w[j] = std::max(w[j], 1e-4);
      z[j] = std::max(z[j], 1e-4);
    }
  }
  Vec y = Vec::Zero(m);

  double npairs = 0.0;
  for (int j = 0; j < nw; ++j) npairs += std::isfinite(s.u[j]) ? 2.0 : 1.0;

  double best_gap = kInf;
  double delta = options.regularization * bnorm;
  int iter = 0;
  sol.status = LpStatus::IterationLimit;

  for (; iter < options.max_iters; ++iter) {
    Vec rb = s.b - s.a * w;
    Vec rc = s.c - s.a.transpose() * y - z;
    for (int j = 0; j < nw; ++j) {
      if (std::isfinite(s.u[j])) rc[j] += sb[j];
    }
    double gap = w.dot(z);
    for (int j = 0; j < nw; ++j) {
      if (std::isfinite(s.u[j])) gap += t[j] * sb[j];
    }
    const double mu = gap / npairs;
    const double obj = s.c.dot(w);

    const double rel_p = rb.lpNorm<Eigen::Infinity>() / bnorm;
    const double rel_d = rc.lpNorm<Eigen::Infinity>() / cnorm;
    const double rel_g = std::abs(gap) / (1.0 + std::abs(obj));
    if (options.verbose) {
      std::printf("ipm %3d  p %.2e  d %.2e  g %.2e  mu %.2e\n", iter, rel_p,
                  rel_d, rel_g, mu);
    }
    if (rel_p < options.tol && rel_d < options.tol && rel_g < options.tol) {
      sol.status = LpStatus::Optimal;
      break;
    }
    best_gap = std::min(best_gap, std::max({rel_p, rel_d, rel_g}));
    if (!std::isfinite(mu) || mu > 1e16) {
      sol.status = LpStatus::NumericalTrouble;
      break;
    }

    Vec d(nw);
    for (int j = 0; j < nw; ++j) {
      double q = z[j] / w[j];
      if (std::isfinite(s.u[j])) q += sb[j] / t[j];
      d[j] = 1.0 / std::min(std::max(q, 1e-14), 1e14);
    }
    if (!normal.factorize(d, delta)) {
      delta *= 100.0;
      if (!normal.factorize(d, delta)) {
        sol.status = LpStatus::NumericalTrouble;
        break;
      }
    }

    auto solve_step = [&](const Vec& rwz, const Vec& rts, Vec& dw, Vec& dy,
                          Vec& dz, Vec& dt, Vec& ds) {
      Vec rhs_c = rc;
      for (int j = 0; j < nw; ++j) {
        rhs_c[j] -= rwz[j] / w[j];
        if (std::isfinite(s.u[j])) rhs_c[j] += rts[j] / t[j];
      }
      Vec rhs = rb + s.a * (d.array() * rhs_c.array()).matrix();
      dy = normal.solve(rhs);
      Vec aty = s.a.transpose() * dy;
      dw = (d.array() * (aty - rhs_c).array()).matrix();
      dz.resize(nw);
      dt.resize(nw);
      ds.resize(nw);
      for (int j = 0; j < nw; ++j) {
        dz[j] = (rwz[j] - z[j] * dw[j]) / w[j];
        if (std::isfinite(s.u[j])) {
          dt[j] = -dw[j];
          ds[j] = (rts[j] - sb[j] * dt[j]) / t[j];
        } else {
          dt[j] = 0.0;
          ds[j] = 0.0;
        }
      }
    };

    auto max_steps = [&](const Vec& dw, const Vec& dz, const Vec& dt,
                         const Vec& ds, double& ap, double& ad) {
      ap = 1.0;
      ad = 1.0;
      for (int j = 0; j < nw; ++j) {
        if (dw[j] < 0.0) ap = std::min(ap, -w[j] / dw[j]);
        if (dz[j] < 0.0) ad = std::min(ad, -z[j] / dz[j]);
        if (std::isfinite(s.u[j])) {
          if (dt[j] < 0.0) ap = std::min(ap, -t[j] / dt[j]);
          if (ds[j] < 0.0) ad = std::min(ad, -sb[j] / ds[j]);
        }
      }
    };

    Vec rwz(nw), rts = Vec::Zero(nw);
    for (int j = 0; j < nw; ++j) {
      rwz[j] = -w[j] * z[j];
      if (std::isfinite(s.u[j])) rts[j] = -t[j] * sb[j];
    }
    Vec dw_a, dy_a, dz_a, dt_a, ds_a;
    solve_step(rwz, rts, dw_a, dy_a, dz_a, dt_a, ds_a);
    double ap_a, ad_a;
    max_steps(dw_a, dz_a, dt_a, ds_a, ap_a, ad_a);
    double mu_aff = 0.0;
    for (int j = 0; j < nw; ++j) {
      mu_aff += (w[j] + ap_a * dw_a[j]) * (z[j] + ad_a * dz_a[j]);
      if (std::isfinite(s.u[j])) {
        mu_aff += (t[j] + ap_a * dt_a[j]) * (sb[j] + ad_a * ds_a[j]);
      }
    }
    mu_aff /= npairs;
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);

    for (int j = 0; j < nw; ++j) {
      rwz[j] = sigma * mu - w[j] * z[j] - dw_a[j] * dz_a[j];
      if (std::isfinite(s.u[j])) {
        rts[j] = sigma * mu - t[j] * sb[j] - dt_a[j] * ds_a[j];
      }
    }
    Vec dw, dy, dz, dt, ds;
    solve_step(rwz, rts, dw, dy, dz, dt, ds);
    double ap, ad;
    max_steps(dw, dz, dt, ds, ap, ad);
    const double frac = 0.99995;
    ap = std::min(1.0, frac * ap);
    ad = std::min(1.0, frac * ad);

    w += ap * dw;
    y += ad * dy;
    z += ad * dz;
    for (int j = 0; j < nw; ++j) {
      if (std::isfinite(s.u[j])) {
        t[j] = std::max(s.u[j] - w[j], 1e-300);
        sb[j] = std::max(sb[j] + ad * ds[j], 1e-300);
      }
      w[j] = std::max(w[j], 1e-300);
      z[j] = std::max(z[j], 1e-300);
    }

    // Keep split free pairs from drifting upward together.
    for (const auto& [jp, jn] : s.free_pairs) {
      const double mn = std::min(w[jp], w[jn]);
      const double keep = 1.0 + 0.1 * std::abs(w[jp] - w[jn]);
      if (mn > 10.0 * keep) {
        const double shift = mn - keep;
        w[jp] -= shift;
        w[jn] -= shift;
      }
    }
  }
  sol.iterations = iter;

  sol.x.assign(problem.num_vars(), 0.0);
  for (int j = 0; j < nw; ++j) {
    if (s.owner[j] >= 0) sol.x[s.owner[j]] += s.sgn[j] * w[j];
  }
  {
    std::vector<char> seen(problem.num_vars(), 0);
    for (int j = 0; j < nw; ++j) {
      const int o = s.owner[j];
      if (o >= 0 && !seen[o]) {
        sol.x[o] += s.off[j];
        seen[o] = 1;
      }
    }
  }
  sol.row_duals.assign(m, 0.0);
  for (int i = 0; i < m; ++i) sol.row_duals[i] = y[i];
  sol.objective = problem.objective_value(sol.x);
  if (sol.status != LpStatus::Optimal && best_gap < 1e-7) {
    sol.status = LpStatus::Optimal;
  }
  return sol;
}

}  // namespace

}  // namespace owfplan
