#include "owfplan/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace owfplan {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void EconParams::validate() const {
  require(inflation_rate > 0.0, "EconParams: inflation_rate must be > 0");
  require(lifetime_years >= 1, "EconParams: lifetime_years must be >= 1");
  require(tax_credit >= 0.0, "EconParams: tax_credit must be >= 0");
  require(ess_unit_cost >= 0.0, "EconParams: ess_unit_cost must be >= 0");
  require(cable_unit_cost_per_km >= 0.0,
          "EconParams: cable_unit_cost_per_km must be >= 0");
  require(converter_fixed_cost >= 0.0,
          "EconParams: converter_fixed_cost must be >= 0");
  require(cable_install_cost >= 0.0,
          "EconParams: cable_install_cost must be >= 0");
}

void EssParams::validate() const {
  require(eta_ch > 0.0 && eta_ch <= 1.0, "EssParams: eta_ch must be in (0,1]");
  require(eta_dis > 0.0 && eta_dis <= 1.0,
          "EssParams: eta_dis must be in (0,1]");
  require(duration_h > 0.0, "EssParams: duration_h must be > 0");
  require(cycle_limit > 0.0, "EssParams: cycle_limit must be > 0");
  require(size_cap_fraction > 0.0 && size_cap_fraction <= 1.0,
          "EssParams: size_cap_fraction must be in (0,1]");
}

double CableParams::effective_conductance() const {
  if (conductance > 0.0) return conductance;
  if (distance_km <= 0.0 || resistance_ohm_per_km <= 0.0 || kv_base <= 0.0) {
    throw std::invalid_argument(
        "CableParams: conductance not set and route data incomplete");
  }
  // kV^2 / ohm gives MW directly.
  return kv_base * kv_base / (resistance_ohm_per_km * distance_km);
}

void CableParams::validate() const {
  require(effective_conductance() > 0.0, "CableParams: conductance must be > 0");
  require(v_min > 0.0 && v_min < v_max,
          "CableParams: need 0 < v_min < v_max");
  require(safety_factor >= 1.0, "CableParams: safety_factor must be >= 1");
  require(distance_km >= 0.0, "CableParams: distance_km must be >= 0");
}

void ReserveParams::validate() const {
  require(df_up_max > 0.0, "ReserveParams: df_up_max must be > 0");
  require(df_down_max > 0.0, "ReserveParams: df_down_max must be > 0");
  require(r_min_wf > 0.0 && r_min_wf < r_max_wf,
          "ReserveParams: need 0 < r_min_wf < r_max_wf");
  require(r_min_ess > 0.0 && r_min_ess < r_max_ess,
          "ReserveParams: need 0 < r_min_ess < r_max_ess");
  require(r_all > 0.0, "ReserveParams: r_all must be > 0");
}

void FarmParams::validate() const {
  require(rated_power_mw > 0.0, "FarmParams: rated_power_mw must be > 0");
}

double annuity_factor(const EconParams& econ) {
  const double r = econ.inflation_rate;
  const int y = econ.lifetime_years;
  if (r <= 0.0) {
    throw std::domain_error(
        "annuity_factor: inflation_rate must be > 0 (use Y*365 for r=0)");
  }
  if (y < 1) throw std::domain_error("annuity_factor: lifetime_years must be >= 1");
  const double growth = std::pow(1.0 + r, y);
  return 365.0 * (growth - 1.0) / (r * growth);
}

double droop_reserve(double k_mw_per_pu, double df_pu) {
  if (k_mw_per_pu < 0.0 || df_pu < 0.0) {
    throw std::domain_error("droop_reserve: gain and deviation must be >= 0");
  }
  return k_mw_per_pu * df_pu;
}

}  // namespace owfplan
