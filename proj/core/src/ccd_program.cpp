#include "owfplan/ccd_program.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace owfplan {

const char* family_name(Family f) {
  switch (f) {
    case Family::DesignBounds: return "design_bounds";
    case Family::OffshoreBalance: return "offshore_balance";
    case Family::OnshoreBalance: return "onshore_balance";
    case Family::CableLimit: return "cable_limit";
    case Family::VoltageFloorOffshore: return "voltage_floor_offshore";
    case Family::VoltageCapOffshore: return "voltage_cap_offshore";
    case Family::VoltageFloorOnshore: return "voltage_floor_onshore";
    case Family::VoltageCapOnshore: return "voltage_cap_onshore";
    case Family::RtTradeUpper: return "rt_trade_upper";
    case Family::RtTradeLower: return "rt_trade_lower";
    case Family::HeadroomUp: return "headroom_up";
    case Family::OutputFloor: return "output_floor";
    case Family::WfUpReserveLink: return "wf_up_reserve_link";
    case Family::WfDownReserveLink: return "wf_down_reserve_link";
    case Family::EssUpReserveLink: return "ess_up_reserve_link";
    case Family::EssDownReserveLink: return "ess_down_reserve_link";
    case Family::WfGainFloor: return "wf_gain_floor";
    case Family::WfGainCap: return "wf_gain_cap";
    case Family::EssGainFloor: return "ess_gain_floor";
    case Family::EssGainCap: return "ess_gain_cap";
    case Family::JointGainFloor: return "joint_gain_floor";
    case Family::SocDynamics: return "soc_dynamics";
    case Family::SocInitial: return "soc_initial";
    case Family::ChargeLimit: return "charge_limit";
    case Family::DischargeLimit: return "discharge_limit";
    case Family::SocFloor: return "soc_floor";
    case Family::SocCap: return "soc_cap";
    case Family::EndSocExpectation: return "end_soc_expectation";
    case Family::CycleExpectation: return "cycle_expectation";
    case Family::Count: return "none";
  }
  return "?";
}

const char* role_name(VarRole r) {
  switch (r) {
    case VarRole::SzE: return "sz_e";
    case VarRole::SzC: return "sz_c";
    case VarRole::Pwd: return "pwd";
    case VarRole::Pw: return "pw";
    case VarRole::Pwr: return "pwr";
    case VarRole::Pch: return "pch";
    case VarRole::Pdis: return "pdis";
    case VarRole::Soc: return "soc";
    case VarRole::V1: return "v1";
    case VarRole::V2: return "v2";
    case VarRole::KResW: return "k_resw";
    case VarRole::KResB: return "k_resb";
    case VarRole::ResWU: return "res_wu";
    case VarRole::ResWD: return "res_wd";
    case VarRole::ResBU: return "res_bu";
    case VarRole::ResBD: return "res_bd";
    case VarRole::Count: return "?";
  }
  return "?";
}

const char* to_string(CaseKind c) {
  switch (c) {
    case CaseKind::Ccd: return "ccd";
    case CaseKind::Base: return "base";
    case CaseKind::NoReserve: return "no_reserve";
    case CaseKind::NoEss: return "no_ess";
  }
  return "?";
}

CaseKind case_from_string(const std::string& s) {
  if (s == "ccd") return CaseKind::Ccd;
  if (s == "base") return CaseKind::Base;
  if (s == "no_reserve" || s == "noreserve") return CaseKind::NoReserve;
  if (s == "no_ess" || s == "noess") return CaseKind::NoEss;
  throw std::invalid_argument("unknown case label: '" + s +
                              "' (expected ccd|base|no_reserve|no_ess)");
}

namespace {

// Per-leaf variable block layout: hourly output first, then the quarter
// resolution roles in a fixed order.
constexpr VarRole kQuarterRoles[] = {
    VarRole::Pwr,   VarRole::Pch,   VarRole::Pdis,  VarRole::Soc,
    VarRole::V1,    VarRole::V2,    VarRole::KResW, VarRole::KResB,
    VarRole::ResWU, VarRole::ResWD, VarRole::ResBU, VarRole::ResBD};

int quarter_role_slot(VarRole role) {
  for (int i = 0; i < 12; ++i) {
    if (kQuarterRoles[i] == role) return i;
  }
  return -1;
}

}  // namespace

int CcdProgram::p_wd(int node, int hour) const {
  return node_offset_[node] + hour;
}

int CcdProgram::leaf_var(VarRole role, int node, int leaf, int time) const {
  const int base = leaf_offset_[node][leaf];
  if (role == VarRole::Pw) return base + time;
  const int slot = quarter_role_slot(role);
  if (slot < 0) throw std::logic_error("leaf_var: not a leaf role");
  return base + hours + slot * quarters() + time;
}

std::string CcdProgram::var_name(int v) const {
  const CcdVariable& var = vars[v];
  std::ostringstream os;
  os << role_name(var.role);
  if (var.da_node >= 0) {
    os << "[d" << var.da_node;
    if (var.leaf >= 0) os << ",l" << var.leaf;
    if (var.time >= 0) {
      os << (var.role == VarRole::Pw || var.role == VarRole::Pwd ? ",h" : ",q")
         << var.time;
    }
    os << "]";
  }
  return os.str();
}

double eval_row(const CcdRow& row, const std::vector<double>& x) {
  double v = 0.0;
  for (const auto& t : row.lin) v += t.coef * x[t.var];
  for (const auto& b : row.bilin) v += b.coef * x[b.vi] * x[b.vj];
  return v;
}

std::vector<double> CcdProgram::residuals_by_family(
    const std::vector<double>& x) const {
  std::vector<double> worst(kFamilyCount, 0.0);
  auto bump = [&](Family f, double viol) {
    if (f == Family::Count || viol <= 0.0) return;
    auto& w = worst[static_cast<int>(f)];
    if (viol > w) w = viol;
  };
  for (int v = 0; v < num_vars(); ++v) {
    bump(vars[v].lo_family, vars[v].lo - x[v]);
    bump(vars[v].hi_family, x[v] - vars[v].hi);
  }
  for (const auto& row : rows) {
    const double a = eval_row(row, x);
    switch (row.sense) {
      case Sense::LE: bump(row.family, a - row.rhs); break;
      case Sense::GE: bump(row.family, row.rhs - a); break;
      case Sense::EQ: bump(row.family, std::abs(a - row.rhs)); break;
    }
  }
  return worst;
}

std::string CcdProgram::dump() const {
  std::ostringstream os;
  os.precision(17);
  os << "ccd-program v1\n";
  os << "case " << to_string(case_kind) << "\n";
  os << "hours " << hours << "\n";
  os << "da_nodes " << n_da << "\n";
  os << "vars " << num_vars() << "\n";
  os << "rows " << rows.size() << "\n";
  os << "objective_constant " << obj_constant << "\n";
  auto bnd = [&](double b) {
    std::ostringstream s;
    s.precision(17);
    if (b == kInf) {
      s << "inf";
    } else if (b == -kInf) {
      s << "-inf";
    } else {
      s << b;
    }
    return s.str();
  };
  for (int v = 0; v < num_vars(); ++v) {
    const auto& var = vars[v];
    os << "var " << v << " " << var_name(v) << " " << bnd(var.lo) << " "
       << bnd(var.hi) << " " << var.obj;
    if (var.lo_family != Family::Count) {
      os << " lo:" << family_name(var.lo_family);
    }
    if (var.hi_family != Family::Count) {
      os << " hi:" << family_name(var.hi_family);
    }
    os << "\n";
  }
  const char* sense_str[] = {"<=", ">=", "=="};
  for (const auto& row : rows) {
    os << "row " << family_name(row.family) << " "
       << sense_str[static_cast<int>(row.sense)] << " " << row.rhs << " :";
    for (const auto& t : row.lin) {
      os << " " << var_name(t.var) << "*" << t.coef;
    }
    for (const auto& b : row.bilin) {
      os << " " << var_name(b.vi) << "*" << var_name(b.vj) << "*" << b.coef;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace owfplan
