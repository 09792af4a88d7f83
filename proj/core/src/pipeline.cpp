#include "owfplan/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "owfplan/align.hpp"
#include "owfplan/config.hpp"
#include "owfplan/freq_sim.hpp"
#include "owfplan/model_build.hpp"
#include "owfplan/report.hpp"
#include "owfplan/scenario_tree.hpp"
#include "owfplan/slp.hpp"
#include "owfplan/tree_build.hpp"

namespace owfplan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

PlanningConfig config_for(const RunManifest& m) {
  if (m.config_path.empty()) {
    throw UserError("no config file given (use --config)");
  }
  std::string path = m.config_path;
  if (!fs::exists(path)) {
    // Fall back to the configured default directory for relative names.
    const char* dir = std::getenv("OWFPLAN_CONFIG_DIR");
    if (dir != nullptr && fs::path(path).is_relative()) {
      const std::string alt = (fs::path(dir) / path).string();
      if (fs::exists(alt)) path = alt;
    }
  }
  if (!fs::exists(path)) {
    throw UserError("config file not found: " + m.config_path);
  }
  try {
    return load_config(path);
  } catch (const std::invalid_argument& e) {
    throw UserError(std::string("invalid config: ") + e.what());
  }
}

std::string slurp_artifact(const std::string& path, const char* produced_by) {
  std::ifstream in(path);
  if (!in) {
    throw UserError("missing artifact '" + path + "' (produce it with `owfplan " +
                    produced_by + "`)");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_out_dir(const RunManifest& m) {
  std::error_code ec;
  fs::create_directories(m.out_dir, ec);
  if (ec) throw UserError("cannot create output directory " + m.out_dir);
}

std::uint64_t effective_seed(const RunManifest& m, const PlanningConfig& cfg) {
  return m.seed_overridden ? m.seed : cfg.scenarios.seed;
}

SolveOptions solve_options_from(const PlanningConfig& cfg, std::uint64_t seed) {
  SolveOptions opt;
  opt.max_outer_iters = cfg.solver.max_outer_iters;
  opt.trust_radius_init = cfg.solver.trust_radius_init_pu;
  opt.convergence_tol_obj = cfg.solver.convergence_tol_obj;
  opt.feasibility_tol = cfg.solver.feasibility_tol;
  opt.lp_engine = cfg.solver.lp_engine;
  opt.seed = seed;
  return opt;
}

}  // namespace

std::string dayset_path(const RunManifest& m) {
  return (fs::path(m.out_dir) / "dayset.json").string();
}
std::string tree_path(const RunManifest& m) {
  return (fs::path(m.out_dir) / "tree.json").string();
}
std::string solution_path(const RunManifest& m, const std::string& case_label) {
  return (fs::path(m.out_dir) / ("solution_" + case_label + ".json")).string();
}

void cmd_ingest(const RunManifest& m) {
  const PlanningConfig cfg = config_for(m);
  if (m.data_manifest_path.empty()) {
    throw UserError("no data manifest given (use --manifest)");
  }
  if (!fs::exists(m.data_manifest_path)) {
    throw UserError("data manifest not found: " + m.data_manifest_path);
  }
  DataManifest manifest;
  try {
    manifest = load_data_manifest(m.data_manifest_path);
  } catch (const std::exception& e) {
    throw UserError(e.what());
  }
  PriceSeries da, rt, ru, rd;
  WindSeries wind;
  try {
    da = load_price_csv(manifest.da_path, PriceKind::DA);
    rt = load_price_csv(manifest.rt_path, PriceKind::RT);
    ru = load_price_csv(manifest.reserve_up_path, PriceKind::ReserveUp);
    rd = load_price_csv(manifest.reserve_down_path, PriceKind::ReserveDown);
    wind = load_wind_csv(manifest.wind_path);
  } catch (const std::runtime_error& e) {
    throw UserError(e.what());
  }
  DayInputs inputs;
  inputs.da = &da;
  inputs.rt = &rt;
  inputs.reserve_up = &ru;
  inputs.reserve_down = &rd;
  inputs.wind = &wind;
  const auto days = align_all_days(inputs, cfg.timezone_offset_hours);
  if (days.empty()) {
    throw UserError("no complete market day found across the five series");
  }
  ensure_out_dir(m);
  std::ofstream out(dayset_path(m));
  out << dayset_to_json(days, manifest.poi);
}

void cmd_scengen(const RunManifest& m) {
  const PlanningConfig cfg = config_for(m);
  std::string poi;
  const auto days = dayset_from_json(
      slurp_artifact(dayset_path(m), "ingest"), &poi);
  if (static_cast<int>(days.size()) < 2) {
    throw UserError("scenario generation needs at least 2 aligned days, have " +
                    std::to_string(days.size()));
  }
  const auto history = history_from_days(days);
  const std::uint64_t seed = effective_seed(m, cfg);
  const std::vector<int> shape{1, cfg.scenarios.da_count, cfg.scenarios.rt_count,
                               1, 1, 1};
  ScenarioTree tree =
      generate_tree(history, cfg.scenarios.pool_size, cfg.scenarios.markovian,
                    shape, 24, cfg.scenarios.kmeans_restarts, seed);
  const PowerCurve farm_curve =
      upscale(cfg.base_curve, cfg.farm.rated_power_mw);
  tree = wind_to_power_tree(tree, farm_curve);
  ensure_out_dir(m);
  save_tree(tree, tree_path(m));
  write_curve_csv(farm_curve, (fs::path(m.out_dir) / "power_curve.csv").string());
}

void cmd_solve(const RunManifest& m) {
  const PlanningConfig cfg = config_for(m);
  const ScenarioTree tree = tree_from_json(slurp_artifact(tree_path(m), "scengen"));
  const TimeGrid grid(tree.hours);
  if (tree.hours != cfg.grid_hours) {
    throw UserError("tree horizon (" + std::to_string(tree.hours) +
                    " h) does not match config grid.hours (" +
                    std::to_string(cfg.grid_hours) + ")");
  }
  const CcdProgram base = build_program(tree, cfg.farm, cfg.econ, cfg.ess,
                                        cfg.cable, cfg.reserve, grid);
  ensure_out_dir(m);
  const SolveOptions opt = solve_options_from(cfg, effective_seed(m, cfg));
  for (const auto& label : m.cases) {
    const CaseKind kind = [&] {
      try {
        return case_from_string(label);
      } catch (const std::invalid_argument& e) {
        throw UserError(e.what());
      }
    }();
    const CcdProgram prog = fix_case(base, kind);
    if (m.dump_program) {
      std::ofstream dump((fs::path(m.out_dir) / ("program_" + label + ".txt"))
                             .string());
      dump << prog.dump();
    }
    DesignSolution sol = solve_slp(prog, opt);
    if (sol.status != SolveStatus::Success) {
      save_solution(sol, solution_path(m, label));  // keep for diagnosis
      throw std::runtime_error("solver finished with status '" +
                               std::string(to_string(sol.status)) +
                               "' for case " + label);
    }
    save_solution(sol, solution_path(m, label));
  }
}

void cmd_freqcheck(const RunManifest& m, const FreqcheckSelection& sel) {
  const PlanningConfig cfg = config_for(m);
  const std::string label = m.cases.empty() ? "ccd" : m.cases.front();
  const DesignSolution sol = solution_from_json(
      slurp_artifact(solution_path(m, label), "solve"));

  int quarter = sel.quarter;
  if (quarter < 0) {
    // Default to the quarter holding the largest scheduled up reserve.
    const auto& ls = sol.schedules.at(sel.da_node).at(sel.leaf);
    quarter = 0;
    double best = -1.0;
    for (int q = 0; q < 4 * sol.hours; ++q) {
      const double r = ls.res_wu[q] + ls.res_bu[q];
      if (r > best) {
        best = r;
        quarter = q;
      }
    }
  }

  GridAggregate grid;
  grid.inertia_2h_s = cfg.freq.inertia_2h_s;
  grid.load_damping_pu = cfg.freq.load_damping_pu;
  grid.nominal_hz = cfg.freq.nominal_hz;
  grid.deadband_hz = cfg.freq.deadband_hz;
  grid.actuation_lag_s = cfg.freq.actuation_lag_s;
  grid.base_mva = cfg.freq.base_mva;

  const auto assets = assets_from_solution(sol, sel.da_node, sel.leaf, quarter);
  const FreqTrajectory traj = simulate_trip(grid, cfg.freq.trip_mw, assets,
                                            cfg.freq.horizon_s, cfg.freq.dt_s);
  ensure_out_dir(m);
  write_trajectory_csv(traj, assets,
                       (fs::path(m.out_dir) / "freq_trajectory.csv").string());
  const auto report =
      verify_reserve_delivery(sol, sel.da_node, sel.leaf, quarter, grid, traj);

  json j;
  j["schema_version"] = 1;
  j["case"] = label;
  j["da_node"] = sel.da_node;
  j["leaf"] = sel.leaf;
  j["quarter"] = quarter;
  j["trip_mw"] = cfg.freq.trip_mw;
  j["stable"] = traj.stable;
  j["nadir_hz"] = traj.nadir_hz;
  j["steady_state_hz"] = traj.steady_state_hz;
  j["df_ss_pu"] = report.df_ss_pu;
  j["pass"] = report.pass;
  j["assets"] = json::array();
  for (const auto& a : report.assets) {
    j["assets"].push_back({{"name", a.name},
                           {"gain_mw_per_pu", a.gain_mw_per_pu},
                           {"scheduled_mw", a.scheduled_mw},
                           {"delivered_mw", a.delivered_mw},
                           {"within_schedule", a.within_schedule},
                           {"droop_consistent", a.droop_consistent}});
  }
  std::ofstream out((fs::path(m.out_dir) / "freqcheck.json").string());
  out << j.dump(2);
  if (!traj.stable) {
    throw std::runtime_error("frequency simulation diverged (unstable)");
  }
}

void cmd_report(const RunManifest& m) {
  const PlanningConfig cfg = config_for(m);
  const ScenarioTree tree = tree_from_json(slurp_artifact(tree_path(m), "scengen"));
  std::vector<DesignTableRow> design_rows;
  std::vector<RevenueTableRow> revenue_rows;
  ensure_out_dir(m);
  for (const auto& label : m.cases) {
    const DesignSolution sol = solution_from_json(
        slurp_artifact(solution_path(m, label), "solve"));
    design_rows.push_back(design_row(sol, cfg.econ, cfg.farm.poi_name));
    revenue_rows.push_back(revenue_row(sol, tree, cfg.farm.poi_name));
    write_operation_traces_csv(
        sol, tree, (fs::path(m.out_dir) / ("traces_" + label + ".csv")).string());
  }
  write_design_table_csv(design_rows,
                         (fs::path(m.out_dir) / "design_table.csv").string());
  write_revenue_table_csv(revenue_rows,
                          (fs::path(m.out_dir) / "revenue_table.csv").string());
  std::ofstream raw((fs::path(m.out_dir) / "report_raw.json").string());
  raw << design_table_json(design_rows, cfg.assumed_defaults);
}

}  // namespace owfplan
