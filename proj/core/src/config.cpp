#include "owfplan/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace owfplan {

using nlohmann::json;

namespace {

// Reads one JSON object section, rejecting keys outside the declared set and
// recording which assumption-backed keys were left at their defaults.
class Section {
 public:
  Section(const json& j, std::string name, std::vector<std::string>* assumed)
      : obj_(j), name_(std::move(name)), assumed_(assumed) {
    if (!obj_.is_object()) {
      throw std::invalid_argument("config: section '" + name_ +
                                  "' must be an object");
    }
  }

  template <typename T>
  void get(const char* key, T& into, bool assumption = false) {
    known_.insert(key);
    if (obj_.contains(key)) {
      into = obj_.at(key).get<T>();
    } else if (assumption && assumed_) {
      assumed_->push_back(name_ + "." + key);
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!known_.count(it.key())) {
        throw std::invalid_argument("config: unknown key '" + name_ + "." +
                                    it.key() + "'");
      }
    }
  }

 private:
  const json& obj_;
  std::string name_;
  std::vector<std::string>* assumed_;
  std::set<std::string> known_;
};

}  // namespace

PlanningConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: root must be an object");

  PlanningConfig cfg;
  auto* assumed = &cfg.assumed_defaults;
  std::set<std::string> top_known = {"schema_version"};

  if (j.contains("farm")) {
    Section s(j["farm"], "farm", assumed);
    s.get("rated_power_mw", cfg.farm.rated_power_mw);
    s.get("poi_name", cfg.farm.poi_name);
    s.finish();
  }
  top_known.insert("farm");

  if (j.contains("econ")) {
    Section s(j["econ"], "econ", assumed);
    s.get("tax_credit", cfg.econ.tax_credit, true);
    s.get("ess_unit_cost_usd_per_mw", cfg.econ.ess_unit_cost);
    s.get("cable_unit_cost_usd_per_mw_km", cfg.econ.cable_unit_cost_per_km);
    s.get("inflation_rate_per_year", cfg.econ.inflation_rate);
    s.get("lifetime_years", cfg.econ.lifetime_years, true);
    s.get("converter_fixed_cost_usd", cfg.econ.converter_fixed_cost);
    s.get("cable_install_cost_usd", cfg.econ.cable_install_cost);
    s.finish();
  }
  top_known.insert("econ");

  if (j.contains("ess")) {
    Section s(j["ess"], "ess", assumed);
    s.get("charge_efficiency", cfg.ess.eta_ch, true);
    s.get("discharge_efficiency", cfg.ess.eta_dis, true);
    s.get("duration_h", cfg.ess.duration_h, true);
    s.get("cycle_limit_per_day", cfg.ess.cycle_limit, true);
    s.get("size_cap_fraction", cfg.ess.size_cap_fraction);
    s.finish();
  }
  top_known.insert("ess");

  if (j.contains("cable")) {
    Section s(j["cable"], "cable", assumed);
    s.get("conductance_mw_per_pu2", cfg.cable.conductance);
    s.get("v_min_pu", cfg.cable.v_min, true);
    s.get("v_max_pu", cfg.cable.v_max, true);
    s.get("safety_factor", cfg.cable.safety_factor);
    s.get("distance_km", cfg.cable.distance_km);
    s.get("kv_base", cfg.cable.kv_base, true);
    s.get("resistance_ohm_per_km", cfg.cable.resistance_ohm_per_km, true);
    s.finish();
  }
  top_known.insert("cable");

  if (j.contains("reserve")) {
    Section s(j["reserve"], "reserve", assumed);
    s.get("df_up_max_pu", cfg.reserve.df_up_max, true);
    s.get("df_down_max_pu", cfg.reserve.df_down_max, true);
    s.get("r_min_wf", cfg.reserve.r_min_wf);
    s.get("r_max_wf", cfg.reserve.r_max_wf);
    s.get("r_min_ess", cfg.reserve.r_min_ess);
    s.get("r_max_ess", cfg.reserve.r_max_ess);
    s.get("r_all", cfg.reserve.r_all);
    s.finish();
  }
  top_known.insert("reserve");

  if (j.contains("grid")) {
    Section s(j["grid"], "grid", assumed);
    s.get("hours", cfg.grid_hours);
    s.finish();
  }
  top_known.insert("grid");

  if (j.contains("timezone_offset_hours")) {
    cfg.timezone_offset_hours = j.at("timezone_offset_hours").get<double>();
  }
  top_known.insert("timezone_offset_hours");

  if (j.contains("scenarios")) {
    Section s(j["scenarios"], "scenarios", assumed);
    s.get("da_count", cfg.scenarios.da_count);
    s.get("rt_count", cfg.scenarios.rt_count);
    s.get("pool_size", cfg.scenarios.pool_size);
    s.get("markovian", cfg.scenarios.markovian);
    s.get("kmeans_restarts", cfg.scenarios.kmeans_restarts);
    s.get("seed", cfg.scenarios.seed);
    s.finish();
  }
  top_known.insert("scenarios");

  if (j.contains("freq")) {
    Section s(j["freq"], "freq", assumed);
    s.get("inertia_2h_s", cfg.freq.inertia_2h_s, true);
    s.get("load_damping_pu", cfg.freq.load_damping_pu, true);
    s.get("nominal_hz", cfg.freq.nominal_hz);
    s.get("deadband_hz", cfg.freq.deadband_hz);
    s.get("actuation_lag_s", cfg.freq.actuation_lag_s, true);
    s.get("base_mva", cfg.freq.base_mva);
    s.get("trip_mw", cfg.freq.trip_mw);
    s.get("horizon_s", cfg.freq.horizon_s);
    s.get("dt_s", cfg.freq.dt_s);
    s.finish();
  }
  top_known.insert("freq");

  if (j.contains("solver")) {
    Section s(j["solver"], "solver", assumed);
    s.get("max_outer_iters", cfg.solver.max_outer_iters);
    s.get("trust_radius_init_pu", cfg.solver.trust_radius_init_pu);
    s.get("convergence_tol_obj", cfg.solver.convergence_tol_obj);
    s.get("feasibility_tol", cfg.solver.feasibility_tol);
    s.get("lp_engine", cfg.solver.lp_engine);
    s.finish();
  }
  top_known.insert("solver");

  if (j.contains("power_curve")) {
    cfg.base_curve = parse_curve_json(j.at("power_curve").dump());
  } else {
    cfg.base_curve = default_turbine_curve();
    assumed->push_back("power_curve");
  }
  top_known.insert("power_curve");

  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!top_known.count(it.key())) {
      throw std::invalid_argument("config: unknown key '" + it.key() + "'");
    }
  }

  cfg.validate();
  return cfg;
}

void PlanningConfig::validate() const {
  farm.validate();
  econ.validate();
  ess.validate();
  cable.validate();
  reserve.validate();
  base_curve.validate();
  if (grid_hours <= 0) {
    throw std::invalid_argument("config: grid.hours must be positive");
  }
  if (scenarios.da_count < 1 || scenarios.rt_count < 1) {
    throw std::invalid_argument("config: scenario counts must be >= 1");
  }
  if (scenarios.pool_size < scenarios.da_count * scenarios.rt_count) {
    throw std::invalid_argument(
        "config: scenarios.pool_size must cover da_count*rt_count leaves");
  }
}

PlanningConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string config_to_json(const PlanningConfig& cfg) {
  json j;
  j["schema_version"] = 1;
  j["farm"] = {{"rated_power_mw", cfg.farm.rated_power_mw},
               {"poi_name", cfg.farm.poi_name}};
  j["econ"] = {{"tax_credit", cfg.econ.tax_credit},
               {"ess_unit_cost_usd_per_mw", cfg.econ.ess_unit_cost},
               {"cable_unit_cost_usd_per_mw_km", cfg.econ.cable_unit_cost_per_km},
               {"inflation_rate_per_year", cfg.econ.inflation_rate},
               {"lifetime_years", cfg.econ.lifetime_years},
               {"converter_fixed_cost_usd", cfg.econ.converter_fixed_cost},
               {"cable_install_cost_usd", cfg.econ.cable_install_cost}};
  j["ess"] = {{"charge_efficiency", cfg.ess.eta_ch},
              {"discharge_efficiency", cfg.ess.eta_dis},
              {"duration_h", cfg.ess.duration_h},
              {"cycle_limit_per_day", cfg.ess.cycle_limit},
              {"size_cap_fraction", cfg.ess.size_cap_fraction}};
  j["cable"] = {{"conductance_mw_per_pu2", cfg.cable.conductance},
                {"v_min_pu", cfg.cable.v_min},
                {"v_max_pu", cfg.cable.v_max},
                {"safety_factor", cfg.cable.safety_factor},
                {"distance_km", cfg.cable.distance_km},
                {"kv_base", cfg.cable.kv_base},
                {"resistance_ohm_per_km", cfg.cable.resistance_ohm_per_km}};
  j["reserve"] = {{"df_up_max_pu", cfg.reserve.df_up_max},
                  {"df_down_max_pu", cfg.reserve.df_down_max},
                  {"r_min_wf", cfg.reserve.r_min_wf},
                  {"r_max_wf", cfg.reserve.r_max_wf},
                  {"r_min_ess", cfg.reserve.r_min_ess},
                  {"r_max_ess", cfg.reserve.r_max_ess},
                  {"r_all", cfg.reserve.r_all}};
  j["grid"] = {{"hours", cfg.grid_hours}};
  j["timezone_offset_hours"] = cfg.timezone_offset_hours;
  j["scenarios"] = {{"da_count", cfg.scenarios.da_count},
                    {"rt_count", cfg.scenarios.rt_count},
                    {"pool_size", cfg.scenarios.pool_size},
                    {"markovian", cfg.scenarios.markovian},
                    {"kmeans_restarts", cfg.scenarios.kmeans_restarts},
                    {"seed", cfg.scenarios.seed}};
  j["freq"] = {{"inertia_2h_s", cfg.freq.inertia_2h_s},
               {"load_damping_pu", cfg.freq.load_damping_pu},
               {"nominal_hz", cfg.freq.nominal_hz},
               {"deadband_hz", cfg.freq.deadband_hz},
               {"actuation_lag_s", cfg.freq.actuation_lag_s},
               {"base_mva", cfg.freq.base_mva},
               {"trip_mw", cfg.freq.trip_mw},
               {"horizon_s", cfg.freq.horizon_s},
               {"dt_s", cfg.freq.dt_s}};
  j["solver"] = {{"max_outer_iters", cfg.solver.max_outer_iters},
                 {"trust_radius_init_pu", cfg.solver.trust_radius_init_pu},
                 {"convergence_tol_obj", cfg.solver.convergence_tol_obj},
                 {"feasibility_tol", cfg.solver.feasibility_tol},
                 {"lp_engine", cfg.solver.lp_engine}};
  j["power_curve"] = json::parse(curve_to_json(cfg.base_curve));
  return j.dump(2);
}

}  // namespace owfplan
