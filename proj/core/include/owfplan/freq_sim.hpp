#pragma once

#include <string>
#include <vector>

#include "owfplan/slp.hpp"

namespace owfplan {

// Single-bus aggregate of the receiving grid: swing dynamics
//   2H d(df)/dt = -dP_trip + sum(asset response) - D*df        (all per-unit)
// with a frequency deadband and a first-order actuation lag per asset.
struct GridAggregate {
  double inertia_2h_s = 8.0;     // 2H on base_mva
  double load_damping_pu = 1.0;  // pu power per pu frequency
  double nominal_hz = 60.0;
  double deadband_hz = 0.017;
  double actuation_lag_s = 0.2;
  double base_mva = 100000.0;
};

// One droop-responding asset (wind farm or storage).
struct FreqAsset {
  std::string name;
  double droop_gain_mw_per_pu = 0.0;  // MW per pu frequency deviation
  double reserve_up_mw = 0.0;         // cap on extra output (under-frequency)
  double reserve_down_mw = 0.0;       // cap on output reduction
};

struct FreqTrajectory {
  std::vector<double> time_s;
  std::vector<double> freq_hz;
  std::vector<std::vector<double>> asset_power_mw;  // [asset][step]
  double nadir_hz = 0.0;
  double steady_state_hz = 0.0;
  bool stable = true;
};

// RK4 at fixed step; dt must be at most actuation_lag/5. Divergent
// trajectories come back with stable=false.
FreqTrajectory simulate_trip(const GridAggregate& grid, double trip_mw,
                             const std::vector<FreqAsset>& assets,
                             double horizon_s, double dt_s);

void write_trajectory_csv(const FreqTrajectory& traj,
                          const std::vector<FreqAsset>& assets,
                          const std::string& path);

// Farm + storage assets at one quarter of one scenario of a solved design.
std::vector<FreqAsset> assets_from_solution(const DesignSolution& sol,
                                            int da_node, int leaf, int quarter);

struct AssetDelivery {
  std::string name;
  double gain_mw_per_pu = 0.0;
  double scheduled_mw = 0.0;
  double delivered_mw = 0.0;
  bool within_schedule = false;   // delivered <= scheduled + tol
  bool droop_consistent = false;  // delivered ~ gain*|df_ss| when uncapped
};

struct ReserveDeliveryReport {
  double df_ss_pu = 0.0;
  std::vector<AssetDelivery> assets;
  bool pass = false;
};

// Checks the steady-state delivery of each asset in `traj` (built from the
// same solution/quarter) against the scheduled reserves and the droop law.
ReserveDeliveryReport verify_reserve_delivery(const DesignSolution& sol,
                                              int da_node, int leaf, int quarter,
                                              const GridAggregate& grid,
                                              const FreqTrajectory& traj);

}  // namespace owfplan
