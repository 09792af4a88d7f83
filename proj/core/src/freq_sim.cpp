#include "owfplan/freq_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace owfplan {

namespace {

struct State {
  double df = 0.0;                 // pu frequency deviation
  std::vector<double> p;           // pu asset outputs

  State operator+(const State& o) const {
    State r = *this;
    r.df += o.df;
    for (size_t i = 0; i < p.size(); ++i) r.p[i] += o.p[i];
    return r;
  }
  State scaled(double f) const {
    State r = *this;
    r.df *= f;
    for (auto& v : r.p) v *= f;
    return r;
  }
};

}  // namespace

FreqTrajectory simulate_trip(const GridAggregate& grid, double trip_mw,
                             const std::vector<FreqAsset>& assets,
                             double horizon_s, double dt_s) {
  if (dt_s <= 0.0 || horizon_s <= 0.0) {
    throw std::invalid_argument("simulate_trip: dt and horizon must be > 0");
  }
  if (dt_s > grid.actuation_lag_s / 5.0 + 1e-12) {
    throw std::invalid_argument(
        "simulate_trip: dt must be at most actuation_lag/5 for the lag ODE");
  }
  const double base = grid.base_mva;
  const double dp_trip = trip_mw / base;
  const double db_pu = grid.deadband_hz / grid.nominal_hz;
  const size_t na = assets.size();

  std::vector<double> k_pu(na), up_pu(na), dn_pu(na);
  for (size_t i = 0; i < na; ++i) {
    k_pu[i] = assets[i].droop_gain_mw_per_pu / base;
    up_pu[i] = assets[i].reserve_up_mw / base;
    dn_pu[i] = assets[i].reserve_down_mw / base;
  }

  auto deriv = [&](const State& s) {
    State d;
    d.p.resize(na);
    double support = 0.0;
    // Deadband-shaped deviation seen by the droop controllers.
    const double mag = std::max(std::abs(s.df) - db_pu, 0.0);
    const double df_db = s.df >= 0.0 ? mag : -mag;
    for (size_t i = 0; i < na; ++i) {
      const double target = std::clamp(-k_pu[i] * df_db, -dn_pu[i], up_pu[i]);
      d.p[i] = (target - s.p[i]) / grid.actuation_lag_s;
      support += s.p[i];
    }
    d.df = (-dp_trip + support - grid.load_damping_pu * s.df) /
           grid.inertia_2h_s;
    return d;
  };

  const int steps = static_cast<int>(std::ceil(horizon_s / dt_s));
  State s;
  s.p.assign(na, 0.0);

  FreqTrajectory traj;
  traj.time_s.reserve(steps + 1);
  traj.freq_hz.reserve(steps + 1);
  traj.asset_power_mw.assign(na, {});
  traj.nadir_hz = grid.nominal_hz;

  auto record = [&](double t, const State& st) {
    traj.time_s.push_back(t);
    const double f = grid.nominal_hz * (1.0 + st.df);
    traj.freq_hz.push_back(f);
    traj.nadir_hz = std::min(traj.nadir_hz, f);
    for (size_t i = 0; i < na; ++i) {
      traj.asset_power_mw[i].push_back(st.p[i] * base);
    }
  };

  record(0.0, s);
  for (int step = 1; step <= steps; ++step) {
    const State k1 = deriv(s);
    const State k2 = deriv(s + k1.scaled(0.5 * dt_s));
    const State k3 = deriv(s + k2.scaled(0.5 * dt_s));
    const State k4 = deriv(s + k3.scaled(dt_s));
    s = s + (k1 + k2.scaled(2.0) + k3.scaled(2.0) + k4).scaled(dt_s / 6.0);
    if (!std::isfinite(s.df) || std::abs(s.df) > 1.0) {
      traj.stable = false;
      break;
    }
    record(step * dt_s, s);
  }
  traj.steady_state_hz = traj.freq_hz.back();
  return traj;
}

void write_trajectory_csv(const FreqTrajectory& traj,
                          const std::vector<FreqAsset>& assets,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trajectory csv: " + path);
  out << "time_s,frequency_hz";
  for (const auto& a : assets) out << "," << a.name << "_mw";
  out << "\n";
  for (size_t i = 0; i < traj.time_s.size(); ++i) {
    out << traj.time_s[i] << "," << traj.freq_hz[i];
    for (const auto& p : traj.asset_power_mw) out << "," << p[i];
    out << "\n";
  }
}

std::vector<FreqAsset> assets_from_solution(const DesignSolution& sol,
                                            int da_node, int leaf, int quarter) {
  const auto& ls = sol.schedules.at(da_node).at(leaf);
  FreqAsset wf;
  wf.name = "wind_farm";
  wf.droop_gain_mw_per_pu = ls.k_resw.at(quarter);
  wf.reserve_up_mw = ls.res_wu.at(quarter);
  wf.reserve_down_mw = ls.res_wd.at(quarter);
  FreqAsset ess;
  ess.name = "storage";
  ess.droop_gain_mw_per_pu = ls.k_resb.at(quarter);
  ess.reserve_up_mw = ls.res_bu.at(quarter);
  ess.reserve_down_mw = ls.res_bd.at(quarter);
  return {wf, ess};
}

ReserveDeliveryReport verify_reserve_delivery(const DesignSolution& sol,
                                              int da_node, int leaf, int quarter,
                                              const GridAggregate& grid,
                                              const FreqTrajectory& traj) {
  const auto assets = assets_from_solution(sol, da_node, leaf, quarter);
  if (traj.asset_power_mw.size() != assets.size()) {
    throw std::invalid_argument(
        "verify_reserve_delivery: trajectory asset count mismatch");
  }
  ReserveDeliveryReport rep;
  rep.df_ss_pu = traj.steady_state_hz / grid.nominal_hz - 1.0;
  const double db_pu = grid.deadband_hz / grid.nominal_hz;
  const double mag = std::max(std::abs(rep.df_ss_pu) - db_pu, 0.0);

  rep.pass = true;
  for (size_t i = 0; i < assets.size(); ++i) {
    AssetDelivery d;
    d.name = assets[i].name;
    d.gain_mw_per_pu = assets[i].droop_gain_mw_per_pu;
    d.scheduled_mw = rep.df_ss_pu <= 0.0 ? assets[i].reserve_up_mw
                                         : assets[i].reserve_down_mw;
    d.delivered_mw = std::abs(traj.asset_power_mw[i].back());
    const double tol = 1e-6 + 1e-3 * std::max(1.0, d.scheduled_mw);
    d.within_schedule = d.delivered_mw <= d.scheduled_mw + tol;
    const double expected = d.gain_mw_per_pu * mag;
    if (expected < d.scheduled_mw - tol) {
      d.droop_consistent =
          std::abs(d.delivered_mw - expected) <= 0.01 * std::max(expected, 1e-9);
    } else {
      d.droop_consistent = true;  // capped at the schedule, droop saturated
    }
    rep.pass = rep.pass && d.within_schedule && d.droop_consistent;
    rep.assets.push_back(d);
  }
  return rep;
}

}  // namespace owfplan
