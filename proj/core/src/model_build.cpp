#include "owfplan/model_build.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owfplan {

RtTradeBounds rt_trade_bounds(const ScenarioTree& tree) {
  RtTradeBounds out;
  const int q = tree.quarters();
  out.upper.resize(tree.da_nodes.size());
  out.lower.resize(tree.da_nodes.size());
  for (size_t d = 0; d < tree.da_nodes.size(); ++d) {
    const auto& node = tree.da_nodes[d];
    out.upper[d].resize(node.leaves.size());
    out.lower[d].resize(node.leaves.size());
    for (size_t l = 0; l < node.leaves.size(); ++l) {
      out.upper[d][l].assign(q, 0.0);
      out.lower[d][l].assign(q, 0.0);
      for (int t = 0; t < q; ++t) {
        const int h = t / 4;
        const double diff = node.leaves[l].wind[h] - node.expected_wind[h];
        out.upper[d][l][t] = std::max(diff, 0.0);
        out.lower[d][l][t] = std::min(diff, 0.0);
      }
    }
  }
  return out;
}

CcdProgram build_program(const ScenarioTree& tree, const FarmParams& farm,
                         const EconParams& econ, const EssParams& ess,
                         const CableParams& cable, const ReserveParams& reserve,
                         const TimeGrid& grid) {
  if (!tree.wind_is_power) {
    throw std::invalid_argument(
        "build_program: tree still carries wind speeds; convert to power first");
  }
  if (grid.hours() != tree.hours) {
    throw std::invalid_argument(
        "build_program: grid horizon (" + std::to_string(grid.hours()) +
        " h) does not match tree horizon (" + std::to_string(tree.hours) + " h)");
  }
  farm.validate();
  econ.validate();
  ess.validate();
  cable.validate();
  reserve.validate();
  tree.validate();

  CcdProgram p;
  p.hours = tree.hours;
  p.n_da = static_cast<int>(tree.da_nodes.size());
  p.farm = farm;
  p.econ = econ;
  p.ess = ess;
  p.cable = cable;
  p.reserve = reserve;
  p.annuity = annuity_factor(econ);

  const int H = p.hours;
  const int Q = p.quarters();
  const double g = cable.effective_conductance();
  const double sf = cable.safety_factor;
  const double dfu = reserve.df_up_max;
  const double dfd = reserve.df_down_max;
  const double t2len = grid.quarter_length_h();
  const double ryear = p.annuity;

  p.da_prob.resize(p.n_da);
  p.rt_prob.resize(p.n_da);
  p.wind_power.resize(p.n_da);
  p.expected_wind.resize(p.n_da);
  p.leaves_per_node.resize(p.n_da);
  for (int d = 0; d < p.n_da; ++d) {
    const auto& node = tree.da_nodes[d];
    p.da_prob[d] = node.prob;
    p.leaves_per_node[d] = static_cast<int>(node.leaves.size());
    p.rt_prob[d].resize(node.leaves.size());
    p.wind_power[d].resize(node.leaves.size());
    p.expected_wind[d] = node.expected_wind;
    for (size_t l = 0; l < node.leaves.size(); ++l) {
      p.rt_prob[d][l] = node.leaves[l].prob;
      p.wind_power[d][l] = node.leaves[l].wind;
    }
  }

  const RtTradeBounds trade = rt_trade_bounds(tree);

  // ---- Variables ----
  auto add_var = [&](VarRole role, int d, int l, int t, double lo, double hi,
                     double obj, Family lof, Family hif) {
    CcdVariable v;
    v.role = role;
    v.da_node = d;
    v.leaf = l;
    v.time = t;
    v.lo = lo;
    v.hi = hi;
    v.obj = obj;
    v.lo_family = lof;
    v.hi_family = hif;
    p.vars.push_back(v);
    return static_cast<int>(p.vars.size()) - 1;
  };

  const double taxed = econ.tax_credit;
  add_var(VarRole::SzE, -1, -1, -1, 0.0,
          ess.size_cap_fraction * farm.rated_power_mw, taxed * econ.ess_unit_cost,
          Family::DesignBounds, Family::DesignBounds);
  add_var(VarRole::SzC, -1, -1, -1, 0.0, kInf,
          taxed * econ.cable_unit_cost(cable.distance_km), Family::DesignBounds,
          Family::Count);

  std::vector<int> node_off(p.n_da);
  std::vector<std::vector<int>> leaf_off(p.n_da);
  for (int d = 0; d < p.n_da; ++d) {
    node_off[d] = static_cast<int>(p.vars.size());
    const auto& node = tree.da_nodes[d];
    for (int h = 0; h < H; ++h) {
      // Day-ahead trade: free (negative = buying), priced at the DA price.
      add_var(VarRole::Pwd, d, -1, h, -kInf, kInf,
              -ryear * p.da_prob[d] * node.da_price[h], Family::Count,
              Family::Count);
    }
  }
  for (int d = 0; d < p.n_da; ++d) {
    const auto& node = tree.da_nodes[d];
    leaf_off[d].resize(node.leaves.size());
    for (size_t l = 0; l < node.leaves.size(); ++l) {
      leaf_off[d][l] = static_cast<int>(p.vars.size());
      const auto& leaf = node.leaves[l];
      const double pw = ryear * p.da_prob[d] * p.rt_prob[d][l];
      for (int h = 0; h < H; ++h) {
        add_var(VarRole::Pw, d, static_cast<int>(l), h, 0.0, kInf, 0.0,
                Family::OutputFloor, Family::Count);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::Pwr, d, static_cast<int>(l), t, trade.lower[d][l][t],
                trade.upper[d][l][t], -pw * leaf.rt_price[t],
                Family::RtTradeLower, Family::RtTradeUpper);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::Pch, d, static_cast<int>(l), t, 0.0, kInf, 0.0,
                Family::ChargeLimit, Family::Count);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::Pdis, d, static_cast<int>(l), t, 0.0, kInf, 0.0,
                Family::DischargeLimit, Family::Count);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::Soc, d, static_cast<int>(l), t, 0.0, kInf, 0.0,
                Family::SocFloor, Family::Count);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::V1, d, static_cast<int>(l), t, cable.v_min, cable.v_max,
                0.0, Family::VoltageFloorOffshore, Family::VoltageCapOffshore);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::V2, d, static_cast<int>(l), t, cable.v_min, cable.v_max,
                0.0, Family::VoltageFloorOnshore, Family::VoltageCapOnshore);
      }
      for (int t = 0; t < Q; ++t) {
        const double avail = leaf.wind[t / 4];
        add_var(VarRole::KResW, d, static_cast<int>(l), t,
                avail / reserve.r_max_wf, avail / reserve.r_min_wf, 0.0,
                Family::WfGainFloor, Family::WfGainCap);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::KResB, d, static_cast<int>(l), t, 0.0, kInf, 0.0,
                Family::EssGainFloor, Family::Count);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::ResWU, d, static_cast<int>(l), t, 0.0, kInf,
                -pw * leaf.reserve_up_price[t], Family::WfUpReserveLink,
                Family::Count);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::ResWD, d, static_cast<int>(l), t, 0.0, kInf,
                -pw * leaf.reserve_down_price[t], Family::WfDownReserveLink,
                Family::Count);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::ResBU, d, static_cast<int>(l), t, 0.0, kInf,
                -pw * leaf.reserve_up_price[t], Family::EssUpReserveLink,
                Family::Count);
      }
      for (int t = 0; t < Q; ++t) {
        add_var(VarRole::ResBD, d, static_cast<int>(l), t, 0.0, kInf,
                -pw * leaf.reserve_down_price[t], Family::EssDownReserveLink,
                Family::Count);
      }
    }
  }
  p.set_offsets(std::move(node_off), std::move(leaf_off));

  // ---- Rows ----
  auto add_row = [&](Family fam, Sense sense, double rhs,
                     std::vector<LinTerm> lin, std::vector<BilinTerm> bilin,
                     int d, int l, int t) {
    CcdRow r;
    r.family = fam;
    r.sense = sense;
    r.rhs = rhs;
    r.lin = std::move(lin);
    r.bilin = std::move(bilin);
    r.da_node = d;
    r.leaf = l;
    r.time = t;
    p.rows.push_back(std::move(r));
  };

  for (int d = 0; d < p.n_da; ++d) {
    for (int l = 0; l < p.leaves_per_node[d]; ++l) {
      auto lv = [&](VarRole role, int t) { return p.leaf_var(role, d, l, t); };
      for (int t = 0; t < Q; ++t) {
        const int h = t / 4;
        const double avail = p.wind_power[d][l][h];
        const int v1 = lv(VarRole::V1, t);
        const int v2 = lv(VarRole::V2, t);

        // Sent power equals the offshore-side cable injection v1*(v1-v2)*g.
        add_row(Family::OffshoreBalance, Sense::EQ, 0.0,
                {{lv(VarRole::Pw, h), 1.0}},
                {{v1, v1, -g}, {v1, v2, g}}, d, l, t);

        // Battery net output minus trades equals the onshore-side injection
        // v2*(v2-v1)*g.
        add_row(Family::OnshoreBalance, Sense::EQ, 0.0,
                {{lv(VarRole::Pdis, t), 1.0},
                 {lv(VarRole::Pch, t), -1.0},
                 {lv(VarRole::Pwr, t), -1.0},
                 {p.p_wd(d, h), -1.0}},
                {{v2, v2, -g}, {v1, v2, g}}, d, l, t);

        // Safety-factored transfer plus farm up reserve within the cable.
        add_row(Family::CableLimit, Sense::LE, 0.0,
                {{lv(VarRole::ResWU, t), sf}, {p.sz_c(), -1.0}},
                {{v1, v1, sf * g}, {v1, v2, -sf * g}}, d, l, t);

        add_row(Family::HeadroomUp, Sense::LE, avail,
                {{lv(VarRole::Pw, h), 1.0}, {lv(VarRole::ResWU, t), 1.0}}, {},
                d, l, t);
        add_row(Family::OutputFloor, Sense::GE, 0.0,
                {{lv(VarRole::Pw, h), 1.0}, {lv(VarRole::ResWD, t), -1.0}}, {},
                d, l, t);

        add_row(Family::WfUpReserveLink, Sense::EQ, 0.0,
                {{lv(VarRole::ResWU, t), 1.0}, {lv(VarRole::KResW, t), -dfu}},
                {}, d, l, t);
        add_row(Family::WfDownReserveLink, Sense::EQ, 0.0,
                {{lv(VarRole::ResWD, t), 1.0}, {lv(VarRole::KResW, t), -dfd}},
                {}, d, l, t);
        add_row(Family::EssUpReserveLink, Sense::EQ, 0.0,
                {{lv(VarRole::ResBU, t), 1.0}, {lv(VarRole::KResB, t), -dfu}},
                {}, d, l, t);
        add_row(Family::EssDownReserveLink, Sense::EQ, 0.0,
                {{lv(VarRole::ResBD, t), 1.0}, {lv(VarRole::KResB, t), -dfd}},
                {}, d, l, t);

        add_row(Family::EssGainFloor, Sense::GE, 0.0,
                {{lv(VarRole::KResB, t), 1.0},
                 {p.sz_e(), -1.0 / reserve.r_max_ess}},
                {}, d, l, t);
        add_row(Family::EssGainCap, Sense::LE, 0.0,
                {{lv(VarRole::KResB, t), 1.0},
                 {p.sz_e(), -1.0 / reserve.r_min_ess}},
                {}, d, l, t);
        add_row(Family::JointGainFloor, Sense::GE, avail / reserve.r_all,
                {{lv(VarRole::KResW, t), 1.0}, {lv(VarRole::KResB, t), 1.0}},
                {}, d, l, t);

        if (t == 0) {
          // Half-charged start folded into the first-step dynamics.
          add_row(Family::SocInitial, Sense::EQ, 0.0,
                  {{lv(VarRole::Soc, 0), 1.0},
                   {lv(VarRole::Pch, 0), -ess.eta_ch * t2len},
                   {lv(VarRole::Pdis, 0), ess.eta_dis * t2len},
                   {p.sz_e(), -0.5 * ess.duration_h}},
                  {}, d, l, t);
        } else {
          add_row(Family::SocDynamics, Sense::EQ, 0.0,
                  {{lv(VarRole::Soc, t), 1.0},
                   {lv(VarRole::Soc, t - 1), -1.0},
                   {lv(VarRole::Pch, t), -ess.eta_ch * t2len},
                   {lv(VarRole::Pdis, t), ess.eta_dis * t2len}},
                  {}, d, l, t);
        }
        add_row(Family::ChargeLimit, Sense::LE, 0.0,
                {{lv(VarRole::Pch, t), 1.0},
                 {lv(VarRole::ResBD, t), 1.0},
                 {p.sz_e(), -1.0}},
                {}, d, l, t);
        add_row(Family::DischargeLimit, Sense::LE, 0.0,
                {{lv(VarRole::Pdis, t), 1.0},
                 {lv(VarRole::ResBU, t), 1.0},
                 {p.sz_e(), -1.0}},
                {}, d, l, t);
        add_row(Family::SocCap, Sense::LE, 0.0,
                {{lv(VarRole::Soc, t), 1.0}, {p.sz_e(), -ess.duration_h}}, {},
                d, l, t);
      }
    }

    // Conditional expectations over the node's leaves.
    std::vector<LinTerm> end_soc{{p.sz_e(), -0.5 * ess.duration_h}};
    std::vector<LinTerm> cycle{{p.sz_e(), -ess.cycle_limit}};
    for (int l = 0; l < p.leaves_per_node[d]; ++l) {
      const double pi = p.rt_prob[d][l];
      end_soc.push_back({p.leaf_var(VarRole::Soc, d, l, Q - 1), pi});
      for (int t = 0; t < Q; ++t) {
        cycle.push_back(
            {p.leaf_var(VarRole::Pdis, d, l, t), pi * ess.eta_dis * t2len});
      }
    }
    add_row(Family::EndSocExpectation, Sense::EQ, 0.0, std::move(end_soc), {},
            d, -1, -1);
    add_row(Family::CycleExpectation, Sense::LE, 0.0, std::move(cycle), {}, d,
            -1, -1);
  }

  return p;
}

CcdProgram fix_case(const CcdProgram& program, CaseKind kind) {
  CcdProgram p = program;
  p.case_kind = kind;

  auto pin = [&](int v, double value) {
    p.vars[v].lo = value;
    p.vars[v].hi = value;
  };

  switch (kind) {
    case CaseKind::Ccd:
      break;

    case CaseKind::Base: {
      const double sz_e = 0.02 * p.farm.rated_power_mw;
      double max_avail = 0.0;
      for (const auto& node : p.wind_power) {
        for (const auto& leaf : node) {
          for (double w : leaf) max_avail = std::max(max_avail, w);
        }
      }
      const double need = p.cable.safety_factor * max_avail;
      const double sz_c =
          kBaseCableModuleMw * std::max(1.0, std::ceil(need / kBaseCableModuleMw));
      pin(p.sz_e(), sz_e);
      pin(p.sz_c(), sz_c);
      for (int v = 0; v < p.num_vars(); ++v) {
        auto& var = p.vars[v];
        if (var.role == VarRole::KResW) {
          pin(v, var.hi);  // farm gain at its droop cap
        } else if (var.role == VarRole::KResB) {
          pin(v, sz_e / p.reserve.r_min_ess);
        }
      }
      break;
    }

    case CaseKind::NoReserve: {
      for (int v = 0; v < p.num_vars(); ++v) {
        switch (p.vars[v].role) {
          case VarRole::KResW:
          case VarRole::KResB:
          case VarRole::ResWU:
          case VarRole::ResWD:
          case VarRole::ResBU:
          case VarRole::ResBD:
            pin(v, 0.0);
            break;
          default:
            break;
        }
      }
      // The mandatory-droop floors cannot hold with zero gains; they are
      // what "no reserve" switches off.
      std::vector<CcdRow> kept;
      kept.reserve(p.rows.size());
      for (auto& row : p.rows) {
        if (row.family == Family::JointGainFloor ||
            row.family == Family::EssGainFloor) {
          continue;
        }
        kept.push_back(std::move(row));
      }
      p.rows = std::move(kept);
      break;
    }

    case CaseKind::NoEss: {
      pin(p.sz_e(), 0.0);
      for (int v = 0; v < p.num_vars(); ++v) {
        switch (p.vars[v].role) {
          case VarRole::Pch:
          case VarRole::Pdis:
          case VarRole::Soc:
          case VarRole::KResB:
          case VarRole::ResBU:
          case VarRole::ResBD:
            pin(v, 0.0);
            break;
          default:
            break;
        }
      }
      break;
    }
  }
  return p;
}

}  // namespace owfplan
