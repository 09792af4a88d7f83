#pragma once

#include <string>
#include <vector>

#include "owfplan/params.hpp"
#include "owfplan/power_curve.hpp"
#include "owfplan/time_grid.hpp"

namespace owfplan {

// Scenario-generation settings (tree shape, sampling pool, seeding).
struct ScenarioSettings {
  int da_count = 20;         // second-stage node count (day-ahead prices)
  int rt_count = 5;          // third-stage leaves per DA node
  int pool_size = 2000;      // sampled trajectories before reduction
  bool markovian = true;     // weight update mode of the KDE sampler
  int kmeans_restarts = 10;
  unsigned long long seed = 1;
};

// Aggregated-grid frequency study settings.
struct FreqSettings {
  double inertia_2h_s = 8.0;     // 2H on base_mva  (assumption, not a data value)
  double load_damping_pu = 1.0;  // pu power per pu frequency  (assumption)
  double nominal_hz = 60.0;
  double deadband_hz = 0.017;
  double actuation_lag_s = 0.2;  // first-order asset response lag  (assumption)
  double base_mva = 100000.0;    // system MVA base carrying 2H and per-unit powers
  double trip_mw = 2182.3;       // generation loss applied by the freqcheck stage
  double horizon_s = 60.0;
  double dt_s = 0.02;
};

// Numerical settings of the design solver (documented in detail next to
// SolveOptions; duplicated here so a config file can pin them).
struct SolverSettings {
  int max_outer_iters = 40;
  double trust_radius_init_pu = 0.05;
  double convergence_tol_obj = 1e-8;
  double feasibility_tol = 1e-6;
  std::string lp_engine = "auto";  // auto | simplex | ipm
};

// One file carrying every model parameter. Units are part of the key names
// in the JSON schema (see docs/config in the README); unknown keys are
// rejected with the offending key named.
struct PlanningConfig {
  FarmParams farm;
  EconParams econ;
  EssParams ess;
  CableParams cable;
  ReserveParams reserve;
  int grid_hours = 24;
  double timezone_offset_hours = 0.0;  // shifts market-day boundaries of UTC data
  ScenarioSettings scenarios;
  FreqSettings freq;
  SolverSettings solver;
  PowerCurve base_curve;  // turbine-scale curve; upscaled to farm rating downstream

  // Keys that were absent from the file and filled from defaults the model
  // treats as assumptions (paper-silent values). Reports surface these.
  std::vector<std::string> assumed_defaults;

  TimeGrid grid() const { return TimeGrid(grid_hours); }
  void validate() const;
};

PlanningConfig load_config(const std::string& path);
PlanningConfig parse_config_json(const std::string& text);
std::string config_to_json(const PlanningConfig& cfg);

}  // namespace owfplan
