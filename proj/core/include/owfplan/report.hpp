#pragma once

#include <string>
#include <vector>

#include "owfplan/scenario_tree.hpp"
#include "owfplan/slp.hpp"

namespace owfplan {

// One line of the design table: sizing and lifetime economics per case/POI.
// Dollar columns are millions with two decimals in the CSV; raw dollars live
// in the JSON companion.
struct DesignTableRow {
  std::string case_label;
  std::string poi;
  double battery_mw = 0.0;
  double battery_cost_usd = 0.0;
  double net_profit_usd = 0.0;  // converter and install fixed costs included
  double cable_mw = 0.0;
  double cable_material_cost_usd = 0.0;
  double cable_install_cost_usd = 0.0;
};

DesignTableRow design_row(const DesignSolution& sol, const EconParams& econ,
                          const std::string& poi);

void write_design_table_csv(const std::vector<DesignTableRow>& rows,
                            const std::string& path);
std::string design_table_json(const std::vector<DesignTableRow>& rows,
                              const std::vector<std::string>& assumed_defaults);

// Expected traded power and revenue per market for one solved case, plus the
// derived unit-revenue columns (reserve revenue excluded from the average,
// matching the power-traded denominator).
struct RevenueTableRow {
  std::string case_label;
  std::string poi;
  double traded_da_mw = 0.0;
  double traded_rt_mw = 0.0;
  double traded_total_mw = 0.0;
  double revenue_da_usd = 0.0;
  double revenue_rt_usd = 0.0;
  double revenue_reserve_usd = 0.0;
  double revenue_total_usd = 0.0;
  double unit_da_usd_per_mwh = 0.0;
  double unit_rt_usd_per_mwh = 0.0;
  double unit_avg_usd_per_mwh = 0.0;
};

// Recomputes every dollar from schedules x tree prices (independent of the
// solver's ledger) and cross-checks against the solution breakdown to the
// given relative tolerance; throws on mismatch.
RevenueTableRow revenue_row(const DesignSolution& sol, const ScenarioTree& tree,
                            const std::string& poi,
                            double reconcile_rel_tol = 1e-6);

void write_revenue_table_csv(const std::vector<RevenueTableRow>& rows,
                             const std::string& path);

// Per-scenario operation trace (prices, trades, storage action by quarter)
// for external plotting.
void write_operation_traces_csv(const DesignSolution& sol,
                                const ScenarioTree& tree,
                                const std::string& path);

}  // namespace owfplan
