#pragma once

#include <string>

namespace owfplan {

// Economic constants of the planning objective. Costs are USD, rates are
// fractions per year.
struct EconParams {
  double tax_credit = 0.7;             // multiplies installation cost (assumption: 30% ITC)
  double ess_unit_cost = 889100.0;     // $/MW of battery rated power
  double cable_unit_cost_per_km = 310.6;  // $/MW/km of cable capacity
  double inflation_rate = 0.03;        // per-year discount rate, > 0
  int lifetime_years = 10;             // battery lifetime driving the annuity
  double converter_fixed_cost = 0.0;   // $ fixed adder reported in net profit
  double cable_install_cost = 0.0;     // $ fixed per-route adder reported in net profit

  // $/MW for the full route.
  double cable_unit_cost(double distance_km) const {
    return cable_unit_cost_per_km * distance_km;
  }
  void validate() const;
};

// Battery storage ratings and operating limits.
struct EssParams {
  double eta_ch = 0.95;        // charge efficiency, (0,1]  (assumption)
  double eta_dis = 0.95;       // discharge efficiency, (0,1]  (assumption)
  double duration_h = 4.0;     // energy capacity = rated power x duration_h
  double cycle_limit = 1.0;    // expected full cycles per day
  double size_cap_fraction = 0.05;  // rated power cap as fraction of farm rating

  void validate() const;
};

// Export cable electrical model: two buses joined by a conductance, voltages
// in per-unit. `conductance` is MW per pu^2 so that v1*(v1-v2)*conductance is
// the MW injected offshore.
struct CableParams {
  double conductance = 0.0;    // MW/pu^2; 0 means "derive from route data"
  double v_min = 0.95;         // pu, both buses  (assumption)
  double v_max = 1.05;         // pu  (assumption)
  double safety_factor = 1.1;  // capacity margin on transmitted power
  double distance_km = 0.0;    // route length
  double kv_base = 320.0;      // DC voltage base used when deriving conductance
  double resistance_ohm_per_km = 0.011;  // used when deriving conductance

  // conductance if set, else kv_base^2 / (resistance_ohm_per_km * distance_km).
  double effective_conductance() const;
  void validate() const;
};

// Droop-control reserve parameters. Gains k are MW per pu frequency
// deviation; droop bounds R translate available power into gain ranges
// (k in [P/r_max, P/r_min]).
struct ReserveParams {
  double df_up_max = 0.01;    // pu frequency rise bound  (assumption)
  double df_down_max = 0.01;  // pu frequency drop bound  (assumption)
  double r_min_wf = 0.1;
  double r_max_wf = 0.5;
  double r_min_ess = 0.01;
  double r_max_ess = 0.5;
  double r_all = 0.2;         // joint mandatory droop for farm + storage

  void validate() const;
};

struct FarmParams {
  double rated_power_mw = 1500.0;
  std::string poi_name = "WCASCADE";

  void validate() const;
};

// Present value of one dollar of daily revenue over the asset lifetime:
// 365 * ((1+r)^Y - 1) / (r (1+r)^Y). Throws std::domain_error for r <= 0
// (the r->0 limit, Y*365, must be requested explicitly by the caller).
double annuity_factor(const EconParams& econ);

// Droop law: reserve power (MW) delivered at gain k for deviation df.
// Inputs must be nonnegative.
double droop_reserve(double k_mw_per_pu, double df_pu);

}  // namespace owfplan
