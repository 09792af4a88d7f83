#pragma once

#include <string>
#include <vector>

#include "owfplan/lp.hpp"
#include "owfplan/params.hpp"
#include "owfplan/time_grid.hpp"

namespace owfplan {

// Constraint families of the planning program. Every row and attributed bound
// carries exactly one; the residual checker reports one figure per family.
enum class Family : int {
  DesignBounds = 0,     // storage size cap and nonnegativity of both designs
  OffshoreBalance,      // sent power equals offshore cable injection (bilinear)
  OnshoreBalance,       // trades/battery balance the onshore injection (bilinear)
  CableLimit,           // safety-factored transfer within cable rating (bilinear)
  VoltageFloorOffshore,
  VoltageCapOffshore,
  VoltageFloorOnshore,
  VoltageCapOnshore,
  RtTradeUpper,         // RT sales capped by wind surprise above expectation
  RtTradeLower,         // RT purchases capped by shortfall below expectation
  HeadroomUp,           // output + up reserve within available wind power
  OutputFloor,          // output covers the down reserve
  WfUpReserveLink,      // farm up reserve = gain x max up deviation
  WfDownReserveLink,
  EssUpReserveLink,
  EssDownReserveLink,
  WfGainFloor,          // farm droop gain within its droop band
  WfGainCap,
  EssGainFloor,         // storage droop gain within its band (couples size)
  EssGainCap,
  JointGainFloor,       // mandatory joint farm+storage droop
  SocDynamics,          // state-of-charge recursion
  SocInitial,           // half-charged start
  ChargeLimit,          // charge + down reserve within rated power
  DischargeLimit,       // discharge + up reserve within rated power
  SocFloor,
  SocCap,               // state of charge within energy capacity (couples size)
  EndSocExpectation,    // expected final SoC = half capacity, per DA node
  CycleExpectation,     // expected daily discharge within cycle limit, per DA node
  Count,
};

constexpr int kFamilyCount = static_cast<int>(Family::Count);
const char* family_name(Family f);

enum class VarRole : int {
  SzE = 0,   // storage rated power, MW
  SzC,       // cable rated power, MW
  Pwd,       // day-ahead trade, MW (per DA node, hour)
  Pw,        // realized farm output, MW (per leaf, hour)
  Pwr,       // real-time trade, MW (per leaf, quarter)
  Pch,       // charge power, MW
  Pdis,      // discharge power, MW
  Soc,       // state of charge, MWh
  V1,        // offshore voltage, pu
  V2,        // onshore voltage, pu
  KResW,     // farm droop gain, MW/pu
  KResB,     // storage droop gain, MW/pu
  ResWU,     // farm up reserve, MW
  ResWD,     // farm down reserve, MW
  ResBU,     // storage up reserve, MW
  ResBD,     // storage down reserve, MW
  Count,
};

const char* role_name(VarRole r);

struct CcdVariable {
  VarRole role = VarRole::SzE;
  int da_node = -1;  // -1 for design variables
  int leaf = -1;     // -1 for design / DA-stage variables
  int time = -1;     // hour for hourly roles, quarter for quarter roles
  double lo = 0.0, hi = kInf;
  double obj = 0.0;
  Family lo_family = Family::Count;  // Count = unattributed structural bound
  Family hi_family = Family::Count;
};

struct BilinTerm {
  int vi = 0, vj = 0;  // product x[vi]*x[vj]
  double coef = 0.0;
};

struct CcdRow {
  Family family = Family::Count;
  Sense sense = Sense::EQ;
  double rhs = 0.0;
  std::vector<LinTerm> lin;
  std::vector<BilinTerm> bilin;
  int da_node = -1;
  int leaf = -1;
  int time = -1;
};

enum class CaseKind { Ccd, Base, NoReserve, NoEss };
const char* to_string(CaseKind c);
CaseKind case_from_string(const std::string& s);

// Deterministic equivalent of the three-stage design/trading program: shared
// design variables, DA-stage trades per scenario-tree node, full schedules
// per leaf, linear rows plus voltage-product terms.
struct CcdProgram {
  int hours = 24;
  int n_da = 0;
  std::vector<int> leaves_per_node;
  std::vector<double> da_prob;               // per DA node
  std::vector<std::vector<double>> rt_prob;  // [node][leaf], conditional

  FarmParams farm;
  EconParams econ;
  EssParams ess;
  CableParams cable;
  ReserveParams reserve;
  double annuity = 0.0;

  // Available wind power per node/leaf/hour and its per-node expectation.
  std::vector<std::vector<std::vector<double>>> wind_power;
  std::vector<std::vector<double>> expected_wind;

  std::vector<CcdVariable> vars;
  std::vector<CcdRow> rows;
  double obj_constant = 0.0;
  CaseKind case_kind = CaseKind::Ccd;

  int quarters() const { return 4 * hours; }
  int num_vars() const { return static_cast<int>(vars.size()); }

  // Variable index helpers (layout: szE, szC, DA blocks, leaf blocks).
  int sz_e() const { return 0; }
  int sz_c() const { return 1; }
  int p_wd(int node, int hour) const;
  int leaf_var(VarRole role, int node, int leaf, int time) const;

  std::string var_name(int v) const;

  // Evaluates every row (including voltage products) and attributed bound at
  // x; returns max absolute violation per family, indexed by Family.
  std::vector<double> residuals_by_family(const std::vector<double>& x) const;

  // Full text dump (variables, bounds, objective, rows with family tags) for
  // differential testing against independent implementations.
  std::string dump() const;

  void set_offsets(std::vector<int> node_off,
                   std::vector<std::vector<int>> leaf_off) {
    node_offset_ = std::move(node_off);
    leaf_offset_ = std::move(leaf_off);
  }

 private:
  std::vector<int> node_offset_;  // first p_wd var of each node
  std::vector<std::vector<int>> leaf_offset_;  // first leaf var of each leaf
};

double eval_row(const CcdRow& row, const std::vector<double>& x);

}  // namespace owfplan
