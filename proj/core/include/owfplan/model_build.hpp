#pragma once

#include "owfplan/ccd_program.hpp"
#include "owfplan/scenario_tree.hpp"

namespace owfplan {

// Real-time trade caps derived from the wind-surprise data: per node, leaf and
// quarter, upper = max(wind - expectation, 0) and lower = min(wind -
// expectation, 0), hourly values replicated onto their quarters. Pure data,
// so the caps enter the program as constant bounds.
struct RtTradeBounds {
  std::vector<std::vector<std::vector<double>>> upper;  // [node][leaf][quarter]
  std::vector<std::vector<std::vector<double>>> lower;
};

RtTradeBounds rt_trade_bounds(const ScenarioTree& tree);

// Assembles the deterministic equivalent from a power-converted scenario tree
// and the parameter bundles. The grid's hour count must match the tree.
CcdProgram build_program(const ScenarioTree& tree, const FarmParams& farm,
                         const EconParams& econ, const EssParams& ess,
                         const CableParams& cable, const ReserveParams& reserve,
                         const TimeGrid& grid);

// Case studies: Base pins storage at 2% of farm rating, droop gains at their
// upper limits and the cable at 2600 MW modules; NoReserve zeroes all reserve
// provision and drops the mandatory-droop floors; NoEss removes the battery.
CcdProgram fix_case(const CcdProgram& program, CaseKind kind);

// Module size used by the Base case's fixed cable sizing, MW.
constexpr double kBaseCableModuleMw = 2600.0;

}  // namespace owfplan
