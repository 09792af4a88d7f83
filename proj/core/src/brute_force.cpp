#include "owfplan/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "owfplan/lp.hpp"

namespace owfplan {

namespace {

struct FlowPoint {
  double sent = 0.0;      // MW into the cable offshore
  double received = 0.0;  // MW out of the cable onshore
};

// Attainable (sent, received) pairs: the low-loss seam at maximum offshore
// voltage plus a coarse high-loss seam at minimum onshore voltage.
std::vector<FlowPoint> voltage_grid(const CableParams& cable, int points) {
  const double g = cable.effective_conductance();
  std::vector<FlowPoint> out;
  const int n1 = std::max(points, 5);
  for (int i = 0; i < n1; ++i) {
    const double v2 = cable.v_max - (cable.v_max - cable.v_min) * i / (n1 - 1);
    const double dv = cable.v_max - v2;
    out.push_back({g * cable.v_max * dv, g * v2 * dv});
  }
  for (int i = 1; i < 9; ++i) {
    const double v1 = cable.v_min + (cable.v_max - cable.v_min) * i / 8.0;
    const double dv = v1 - cable.v_min;
    out.push_back({g * v1 * dv, g * cable.v_min * dv});
  }
  return out;
}

// Variable layout of one DA-node subproblem.
struct NodeLayout {
  int hours = 0, quarters = 0, leaves = 0, points = 0;
  int p_wd0 = 0;      // [hour]
  int leaf_stride = 0;
  int leaf0 = 0;

  int p_wd(int h) const { return p_wd0 + h; }
  int base(int l) const { return leaf0 + l * leaf_stride; }
  int p_w(int l, int h) const { return base(l) + h; }
  int p_wr(int l, int q) const { return base(l) + hours + 0 * quarters + q; }
  int p_ch(int l, int q) const { return base(l) + hours + 1 * quarters + q; }
  int p_dis(int l, int q) const { return base(l) + hours + 2 * quarters + q; }
  int soc(int l, int q) const { return base(l) + hours + 3 * quarters + q; }
  int k_w(int l, int q) const { return base(l) + hours + 4 * quarters + q; }
  int k_b(int l, int q) const { return base(l) + hours + 5 * quarters + q; }
  int lam(int l, int q, int i) const {
    return base(l) + hours + 6 * quarters + q * points + i;
  }
  int total() const { return leaf0 + leaves * leaf_stride; }
};

// Builds the fixed-design trading LP of one DA node; bounds depending on the
// design are refreshed per candidate via set_design().
struct NodeProblem {
  LpProblem lp;
  NodeLayout lay;
  const DaNode* node = nullptr;
  double ryear_prob = 0.0;  // annuity x DA-node probability

  std::vector<int> design_rows_cable;  // rows whose rhs is sz_c
  std::vector<int> design_rows_sz_e;   // rows whose rhs is sz_e
  std::vector<int> design_rows_soc0;   // rhs 0.5*DurH*sz_e
  std::vector<int> design_rows_end;    // rhs 0.5*DurH*sz_e
  std::vector<int> design_rows_cycle;  // rhs cyl*sz_e
};

NodeProblem build_node(const DaNode& node, const ScenarioTree& tree,
                       const EssParams& ess, const CableParams& cable,
                       const ReserveParams& reserve,
                       const std::vector<FlowPoint>& flows) {
  NodeProblem np;
  np.node = &node;
  const int H = tree.hours;
  const int Q = tree.quarters();
  const int L = static_cast<int>(node.leaves.size());
  const int P = static_cast<int>(flows.size());
  auto& lay = np.lay;
  lay.hours = H;
  lay.quarters = Q;
  lay.leaves = L;
  lay.points = P;
  lay.p_wd0 = 0;
  lay.leaf0 = H;
  lay.leaf_stride = H + 6 * Q + Q * P;

  LpProblem& lp = np.lp;
  lp.lo.assign(lay.total(), 0.0);
  lp.hi.assign(lay.total(), kInf);
  lp.obj.assign(lay.total(), 0.0);

  const double t2 = 0.25;
  const double dfu = reserve.df_up_max;
  const double dfd = reserve.df_down_max;

  for (int h = 0; h < H; ++h) {
    lp.lo[lay.p_wd(h)] = -kInf;
    lp.obj[lay.p_wd(h)] = -node.da_price[h];
  }
  for (int l = 0; l < L; ++l) {
    const auto& leaf = node.leaves[l];
    const double pi = leaf.prob;
    for (int q = 0; q < Q; ++q) {
      const int h = q / 4;
      const double avail = leaf.wind[h];
      const double diff = avail - node.expected_wind[h];
      lp.lo[lay.p_wr(l, q)] = std::min(diff, 0.0);
      lp.hi[lay.p_wr(l, q)] = std::max(diff, 0.0);
      lp.obj[lay.p_wr(l, q)] = -pi * leaf.rt_price[q];
      // Reserve revenue folded onto the gains through the droop law.
      const double res_price = leaf.reserve_up_price[q] * dfu +
                               leaf.reserve_down_price[q] * dfd;
      lp.lo[lay.k_w(l, q)] = avail / reserve.r_max_wf;
      lp.hi[lay.k_w(l, q)] = avail / reserve.r_min_wf;
      lp.obj[lay.k_w(l, q)] = -pi * res_price;
      lp.obj[lay.k_b(l, q)] = -pi * res_price;
    }
  }

  for (int l = 0; l < L; ++l) {
    const auto& leaf = node.leaves[l];
    for (int q = 0; q < Q; ++q) {
      const int h = q / 4;
      // Sent flow matches the hourly output.
      std::vector<LinTerm> sent{{lay.p_w(l, h), 1.0}};
      for (int i = 0; i < P; ++i) sent.push_back({lay.lam(l, q, i), -flows[i].sent});
      lp.add_row(Sense::EQ, 0.0, std::move(sent));

      // Onshore balance: trades = battery net + received flow.
      std::vector<LinTerm> recv{{lay.p_dis(l, q), 1.0},
                                {lay.p_ch(l, q), -1.0},
                                {lay.p_wr(l, q), -1.0},
                                {lay.p_wd(h), -1.0}};
      for (int i = 0; i < P; ++i) {
        recv.push_back({lay.lam(l, q, i), flows[i].received});
      }
      lp.add_row(Sense::EQ, 0.0, std::move(recv));

      // Cable rating with the safety factor; rhs filled by set_design.
      std::vector<LinTerm> cab{{lay.k_w(l, q), cable.safety_factor * dfu}};
      for (int i = 0; i < P; ++i) {
        cab.push_back({lay.lam(l, q, i), cable.safety_factor * flows[i].sent});
      }
      np.design_rows_cable.push_back(lp.num_rows());
      lp.add_row(Sense::LE, 0.0, std::move(cab));

      std::vector<LinTerm> conv;
      for (int i = 0; i < P; ++i) conv.push_back({lay.lam(l, q, i), 1.0});
      lp.add_row(Sense::EQ, 1.0, std::move(conv));

      lp.add_row(Sense::LE, leaf.wind[h],
                 {{lay.p_w(l, h), 1.0}, {lay.k_w(l, q), dfu}});
      lp.add_row(Sense::GE, 0.0, {{lay.p_w(l, h), 1.0}, {lay.k_w(l, q), -dfd}});
      lp.add_row(Sense::GE, leaf.wind[h] / reserve.r_all,
                 {{lay.k_w(l, q), 1.0}, {lay.k_b(l, q), 1.0}});

      if (q == 0) {
        np.design_rows_soc0.push_back(lp.num_rows());
        lp.add_row(Sense::EQ, 0.0,
                   {{lay.soc(l, 0), 1.0},
                    {lay.p_ch(l, 0), -ess.eta_ch * t2},
                    {lay.p_dis(l, 0), ess.eta_dis * t2}});
      } else {
        lp.add_row(Sense::EQ, 0.0,
                   {{lay.soc(l, q), 1.0},
                    {lay.soc(l, q - 1), -1.0},
                    {lay.p_ch(l, q), -ess.eta_ch * t2},
                    {lay.p_dis(l, q), ess.eta_dis * t2}});
      }
      np.design_rows_sz_e.push_back(lp.num_rows());
      lp.add_row(Sense::LE, 0.0, {{lay.p_ch(l, q), 1.0}, {lay.k_b(l, q), dfd}});
      np.design_rows_sz_e.push_back(lp.num_rows());
      lp.add_row(Sense::LE, 0.0, {{lay.p_dis(l, q), 1.0}, {lay.k_b(l, q), dfu}});
    }

  }

  // Node-level expectations.
  std::vector<LinTerm> end_soc;
  std::vector<LinTerm> cycle;
  for (int l = 0; l < L; ++l) {
    const double pi = node.leaves[l].prob;
    end_soc.push_back({lay.soc(l, Q - 1), pi});
    for (int q = 0; q < Q; ++q) {
      cycle.push_back({lay.p_dis(l, q), pi * ess.eta_dis * t2});
    }
  }
  np.design_rows_end.push_back(lp.num_rows());
  lp.add_row(Sense::EQ, 0.0, std::move(end_soc));
  np.design_rows_cycle.push_back(lp.num_rows());
  lp.add_row(Sense::LE, 0.0, std::move(cycle));
  return np;
}

void set_design(NodeProblem& np, const EssParams& ess,
                const ReserveParams& reserve, double sz_e, double sz_c) {
  for (int r : np.design_rows_cable) np.lp.rows[r].rhs = sz_c;
  for (int r : np.design_rows_sz_e) np.lp.rows[r].rhs = sz_e;
  // soc(0) - charge terms = 0.5*szE*DurH (half-charged start).
  for (int r : np.design_rows_soc0) {
    np.lp.rows[r].rhs = 0.5 * sz_e * ess.duration_h;
  }
  for (int r : np.design_rows_end) {
    np.lp.rows[r].rhs = 0.5 * sz_e * ess.duration_h;
  }
  for (int r : np.design_rows_cycle) {
    np.lp.rows[r].rhs = sz_e * ess.cycle_limit;
  }
  const auto& lay = np.lay;
  for (int l = 0; l < lay.leaves; ++l) {
    for (int q = 0; q < lay.quarters; ++q) {
      np.lp.lo[lay.k_b(l, q)] = sz_e / reserve.r_max_ess;
      np.lp.hi[lay.k_b(l, q)] = sz_e / reserve.r_min_ess;
      np.lp.hi[lay.soc(l, q)] = sz_e * ess.duration_h;
    }
  }
}

}  // namespace

BruteForceResult brute_force_design(const ScenarioTree& tree,
                                    const FarmParams& farm,
                                    const EconParams& econ, const EssParams& ess,
                                    const CableParams& cable,
                                    const ReserveParams& reserve,
                                    const BruteForceGrids& grids) {
  if (!tree.wind_is_power) {
    throw std::invalid_argument("brute_force_design: tree must carry power");
  }
  if (grids.sz_e_candidates.empty() || grids.sz_c_candidates.empty()) {
    throw std::invalid_argument("brute_force_design: empty design grid");
  }
  (void)farm;

  const auto flows = voltage_grid(cable, grids.voltage_points);
  const double ryear = annuity_factor(econ);

  std::vector<NodeProblem> nodes;
  for (const auto& da : tree.da_nodes) {
    nodes.push_back(build_node(da, tree, ess, cable, reserve, flows));
  }

  BruteForceResult res;
  res.objective_usd = kInf;
  res.objective_table.assign(
      grids.sz_e_candidates.size(),
      std::vector<double>(grids.sz_c_candidates.size(), kInf));

  // Per-node warm-start bases carried across the sweep.
  std::vector<LpSolution> warm(nodes.size());

  for (size_t ic = 0; ic < grids.sz_c_candidates.size(); ++ic) {
    for (size_t ie = 0; ie < grids.sz_e_candidates.size(); ++ie) {
      const double sz_e = grids.sz_e_candidates[ie];
      const double sz_c = grids.sz_c_candidates[ic];
      double expected_daily = 0.0;
      bool feasible = true;
      for (size_t k = 0; k < nodes.size(); ++k) {
        set_design(nodes[k], ess, reserve, sz_e, sz_c);
        SimplexOptions opt;
        if (!warm[k].basis.empty()) opt.warm = &warm[k];
        LpSolution s = solve_lp(nodes[k].lp, opt);
        if (s.status != LpStatus::Optimal) {
          feasible = false;
          break;
        }
        warm[k] = s;
        expected_daily += tree.da_nodes[k].prob * (-s.objective);
      }
      if (!feasible) continue;
      const double obj =
          econ.tax_credit * (econ.ess_unit_cost * sz_e +
                             econ.cable_unit_cost(cable.distance_km) * sz_c) -
          ryear * expected_daily;
      res.objective_table[ie][ic] = obj;
      res.feasible_designs += 1;
      if (obj < res.objective_usd) {
        res.objective_usd = obj;
        res.sz_e_mw = sz_e;
        res.sz_c_mw = sz_c;
      }
    }
  }
  if (res.feasible_designs == 0) {
    throw std::runtime_error(
        "brute_force_design: no feasible design on the grid; the grid is too "
        "coarse to bracket feasibility");
  }
  return res;
}

}  // namespace owfplan
