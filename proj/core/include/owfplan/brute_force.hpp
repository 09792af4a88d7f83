#pragma once

#include <vector>

#include "owfplan/params.hpp"
#include "owfplan/scenario_tree.hpp"

namespace owfplan {

// Design-grid enumeration oracle. For each candidate (storage size, cable
// size) the remaining trading problem is solved exactly as an LP per DA node,
// with the cable flow handled by convex combinations over a fixed voltage
// grid (points on the attainable send/receive boundary). Deliberately built
// straight from the tree, independent of the CcdProgram path it validates.
struct BruteForceGrids {
  std::vector<double> sz_e_candidates;  // MW
  std::vector<double> sz_c_candidates;  // MW
  int voltage_points = 33;              // resolution along the low-loss seam
};

struct BruteForceResult {
  double sz_e_mw = 0.0;
  double sz_c_mw = 0.0;
  double objective_usd = 0.0;  // same minimization sign as the SLP solver
  std::vector<std::vector<double>> objective_table;  // [sz_e idx][sz_c idx]
  int feasible_designs = 0;
};

BruteForceResult brute_force_design(const ScenarioTree& tree,
                                    const FarmParams& farm,
                                    const EconParams& econ, const EssParams& ess,
                                    const CableParams& cable,
                                    const ReserveParams& reserve,
                                    const BruteForceGrids& grids);

}  // namespace owfplan
