#include "owfplan/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace owfplan {

using nlohmann::json;

namespace {

std::string musd(double usd) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", usd / 1e6);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void check_close(double a, double b, double rel_tol, const char* what) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(a - b) > rel_tol * scale) {
    throw std::runtime_error(std::string("revenue reconciliation failed for ") +
                             what + ": " + std::to_string(a) + " vs " +
                             std::to_string(b));
  }
}

}  // namespace

DesignTableRow design_row(const DesignSolution& sol, const EconParams& econ,
                          const std::string& poi) {
  DesignTableRow row;
  row.case_label = to_string(sol.case_kind);
  row.poi = poi;
  row.battery_mw = sol.sz_e_mw;
  row.battery_cost_usd = sol.breakdown.ess_cost;
  row.cable_mw = sol.sz_c_mw;
  row.cable_material_cost_usd = sol.breakdown.cable_cost;
  row.cable_install_cost_usd = econ.cable_install_cost;
  row.net_profit_usd = -sol.objective_usd - econ.converter_fixed_cost -
                       econ.cable_install_cost;
  return row;
}

void write_design_table_csv(const std::vector<DesignTableRow>& rows,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write design table: " + path);
  out << "case,poi,battery_rated_mw,battery_cost_musd,net_profit_musd,"
         "cable_capacity_mw,cable_material_cost_musd,cable_install_cost_musd\n";
  for (const auto& r : rows) {
    out << r.case_label << "," << r.poi << "," << fixed2(r.battery_mw) << ","
        << musd(r.battery_cost_usd) << "," << musd(r.net_profit_usd) << ","
        << fixed2(r.cable_mw) << "," << musd(r.cable_material_cost_usd) << ","
        << musd(r.cable_install_cost_usd) << "\n";
  }
}

std::string design_table_json(const std::vector<DesignTableRow>& rows,
                              const std::vector<std::string>& assumed_defaults) {
  json j;
  j["schema_version"] = 1;
  j["assumed_defaults"] = assumed_defaults;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"case", r.case_label},
                         {"poi", r.poi},
                         {"battery_rated_mw", r.battery_mw},
                         {"battery_cost_usd", r.battery_cost_usd},
                         {"net_profit_usd", r.net_profit_usd},
                         {"cable_capacity_mw", r.cable_mw},
                         {"cable_material_cost_usd", r.cable_material_cost_usd},
                         {"cable_install_cost_usd", r.cable_install_cost_usd}});
  }
  return j.dump(2);
}

RevenueTableRow revenue_row(const DesignSolution& sol, const ScenarioTree& tree,
                            const std::string& poi, double reconcile_rel_tol) {
  if (static_cast<int>(tree.da_nodes.size()) != static_cast<int>(sol.p_wd.size())) {
    throw std::invalid_argument("revenue_row: solution/tree shape mismatch");
  }
  RevenueTableRow row;
  row.case_label = to_string(sol.case_kind);
  row.poi = poi;

  for (size_t d = 0; d < tree.da_nodes.size(); ++d) {
    const auto& node = tree.da_nodes[d];
    const double pd = node.prob;
    for (int h = 0; h < sol.hours; ++h) {
      row.traded_da_mw += pd * sol.p_wd[d][h];
      row.revenue_da_usd += pd * node.da_price[h] * sol.p_wd[d][h];
    }
    for (size_t l = 0; l < node.leaves.size(); ++l) {
      const auto& leaf = node.leaves[l];
      const auto& ls = sol.schedules[d][l];
      const double p = pd * leaf.prob;
      for (int q = 0; q < 4 * sol.hours; ++q) {
        row.traded_rt_mw += p * ls.p_wr[q];
        row.revenue_rt_usd += p * leaf.rt_price[q] * ls.p_wr[q];
        row.revenue_reserve_usd +=
            p * (leaf.reserve_up_price[q] * (ls.res_wu[q] + ls.res_bu[q]) +
                 leaf.reserve_down_price[q] * (ls.res_wd[q] + ls.res_bd[q]));
      }
    }
  }
  row.traded_total_mw = row.traded_da_mw + row.traded_rt_mw;
  row.revenue_total_usd =
      row.revenue_da_usd + row.revenue_rt_usd + row.revenue_reserve_usd;
  if (std::abs(row.traded_da_mw) > 1e-12) {
    row.unit_da_usd_per_mwh = row.revenue_da_usd / row.traded_da_mw;
  }
  if (std::abs(row.traded_rt_mw) > 1e-12) {
    row.unit_rt_usd_per_mwh = row.revenue_rt_usd / row.traded_rt_mw;
  }
  if (std::abs(row.traded_total_mw) > 1e-12) {
    row.unit_avg_usd_per_mwh =
        (row.revenue_da_usd + row.revenue_rt_usd) / row.traded_total_mw;
  }

  // Every dollar must reconcile with the solver's own ledger.
  check_close(row.revenue_da_usd, sol.breakdown.da_revenue, reconcile_rel_tol,
              "day-ahead revenue");
  check_close(row.revenue_rt_usd, sol.breakdown.rt_revenue, reconcile_rel_tol,
              "real-time revenue");
  check_close(row.revenue_reserve_usd,
              sol.breakdown.reserve_up_revenue + sol.breakdown.reserve_down_revenue,
              reconcile_rel_tol, "reserve revenue");
  const double obj_from_breakdown = sol.breakdown.objective();
  check_close(obj_from_breakdown, sol.objective_usd, reconcile_rel_tol,
              "objective");
  return row;
}

void write_revenue_table_csv(const std::vector<RevenueTableRow>& rows,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write revenue table: " + path);
  out << "case,poi,traded_da_mw,traded_rt_mw,traded_total_mw,"
         "revenue_da_kusd,revenue_rt_kusd,revenue_reserve_kusd,"
         "revenue_total_kusd,unit_da_usd_mwh,unit_rt_usd_mwh,unit_avg_usd_mwh\n";
  for (const auto& r : rows) {
    out << r.case_label << "," << r.poi << "," << fixed2(r.traded_da_mw) << ","
        << fixed2(r.traded_rt_mw) << "," << fixed2(r.traded_total_mw) << ","
        << fixed2(r.revenue_da_usd / 1e3) << ","
        << fixed2(r.revenue_rt_usd / 1e3) << ","
        << fixed2(r.revenue_reserve_usd / 1e3) << ","
        << fixed2(r.revenue_total_usd / 1e3) << ","
        << fixed2(r.unit_da_usd_per_mwh) << "," << fixed2(r.unit_rt_usd_per_mwh)
        << "," << fixed2(r.unit_avg_usd_per_mwh) << "\n";
  }
}

void write_operation_traces_csv(const DesignSolution& sol,
                                const ScenarioTree& tree,
                                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write traces: " + path);
  out << "case,da_node,leaf,quarter,da_price_usd_mwh,rt_price_usd_mwh,"
         "wind_available_mw,p_wd_mw,p_wr_mw,wf_output_mw,ess_discharge_mw,"
         "soc_mwh,k_resw_mw_pu,k_resb_mw_pu\n";
  for (size_t d = 0; d < tree.da_nodes.size(); ++d) {
    const auto& node = tree.da_nodes[d];
    for (size_t l = 0; l < node.leaves.size(); ++l) {
      const auto& leaf = node.leaves[l];
      const auto& ls = sol.schedules[d][l];
      for (int q = 0; q < 4 * sol.hours; ++q) {
        const int h = q / 4;
        out << to_string(sol.case_kind) << "," << d << "," << l << "," << q
            << "," << node.da_price[h] << "," << leaf.rt_price[q] << ","
            << leaf.wind[h] << "," << sol.p_wd[d][h] << "," << ls.p_wr[q] << ","
            << ls.p_w[h] << "," << (ls.p_dis[q] - ls.p_ch[q]) << ","
            << ls.soc[q] << "," << ls.k_resw[q] << "," << ls.k_resb[q] << "\n";
      }
    }
  }
}

}  // namespace owfplan
