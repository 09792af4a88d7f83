#include "owfplan/scenario_tree.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace owfplan {

using nlohmann::json;

int ScenarioTree::leaf_count() const {
  int n = 0;
  for (const auto& d : da_nodes) n += static_cast<int>(d.leaves.size());
  return n;
}

void ScenarioTree::validate() const {
  constexpr double kProbTol = 1e-9;
  if (hours <= 0) throw std::runtime_error("tree: bad hour count");
  if (da_nodes.empty()) throw std::runtime_error("tree: no DA nodes");

  double da_sum = 0.0;
  for (const auto& d : da_nodes) {
    da_sum += d.prob;
    if (static_cast<int>(d.da_price.size()) != hours) {
      throw std::runtime_error("tree: DA price length mismatch");
    }
    if (d.leaves.empty()) throw std::runtime_error("tree: DA node without leaves");
    if (static_cast<int>(d.expected_wind.size()) != hours) {
      throw std::runtime_error("tree: expected_wind length mismatch");
    }
    double rt_sum = 0.0;
    std::vector<double> expw(hours, 0.0);
    for (const auto& l : d.leaves) {
      rt_sum += l.prob;
      if (static_cast<int>(l.rt_price.size()) != quarters() ||
          static_cast<int>(l.reserve_up_price.size()) != quarters() ||
          static_cast<int>(l.reserve_down_price.size()) != quarters()) {
        throw std::runtime_error("tree: quarter channel length mismatch");
      }
      if (static_cast<int>(l.wind.size()) != hours) {
        throw std::runtime_error("tree: wind channel length mismatch");
      }
      for (int t = 0; t < hours; ++t) {
        if (wind_is_power &&
            (l.wind[t] < -1e-9 || l.wind[t] > rated_power_mw + 1e-9)) {
          throw std::runtime_error("tree: wind power outside [0, rated]");
        }
        expw[t] += l.prob * l.wind[t];
      }
    }
    if (std::abs(rt_sum - 1.0) > kProbTol) {
      throw std::runtime_error("tree: RT probabilities sum to " +
                               std::to_string(rt_sum));
    }
    for (int t = 0; t < hours; ++t) {
      if (std::abs(expw[t] - d.expected_wind[t]) > kProbTol) {
        throw std::runtime_error("tree: expected_wind inconsistent at hour " +
                                 std::to_string(t));
      }
    }
  }
  if (std::abs(da_sum - 1.0) > kProbTol) {
    throw std::runtime_error("tree: DA probabilities sum to " +
                             std::to_string(da_sum));
  }
}

void ScenarioTree::recompute_expected_wind() {
  for (auto& d : da_nodes) {
    d.expected_wind.assign(hours, 0.0);
    for (const auto& l : d.leaves) {
      for (int t = 0; t < hours; ++t) d.expected_wind[t] += l.prob * l.wind[t];
    }
  }
}

ScenarioTree wind_to_power_tree(const ScenarioTree& tree,
                                const PowerCurve& farm_curve) {
  if (tree.wind_is_power) {
    throw std::invalid_argument(
        "wind_to_power_tree: tree already carries power");
  }
  ScenarioTree out = tree;
  out.wind_is_power = true;
  out.rated_power_mw = farm_curve.rated_power_mw;
  for (auto& d : out.da_nodes) {
    for (auto& l : d.leaves) {
      for (auto& w : l.wind) w = farm_curve.power_at(w);
    }
  }
  out.recompute_expected_wind();
  return out;
}

std::string tree_to_json(const ScenarioTree& tree) {
  json j;
  j["schema_version"] = 1;
  j["hours"] = tree.hours;
  j["shape"] = tree.shape;
  j["wind_is_power"] = tree.wind_is_power;
  j["rated_power_mw"] = tree.rated_power_mw;
  j["seed"] = tree.seed;
  j["floored_reserve_prices"] = tree.floored_reserve_prices;
  j["da_nodes"] = json::array();
  int node_id = 0;
  for (const auto& d : tree.da_nodes) {
    json jd;
    jd["id"] = node_id;
    jd["stage"] = 1;
    jd["parent"] = 0;
    jd["prob"] = d.prob;
    jd["da_price"] = d.da_price;
    jd["expected_wind"] = d.expected_wind;
    jd["leaves"] = json::array();
    int leaf_id = 0;
    for (const auto& l : d.leaves) {
      json jl;
      jl["id"] = leaf_id;
      jl["stage"] = 2;
      jl["parent"] = node_id;
      jl["prob"] = l.prob;
      jl["rt_price"] = l.rt_price;
      jl["reserve_up_price"] = l.reserve_up_price;
      jl["reserve_down_price"] = l.reserve_down_price;
      jl["wind"] = l.wind;
      jd["leaves"].push_back(std::move(jl));
      ++leaf_id;
    }
    j["da_nodes"].push_back(std::move(jd));
    ++node_id;
  }
  return j.dump();
}

ScenarioTree tree_from_json(const std::string& text) {
  json j = json::parse(text);
  ScenarioTree tree;
  tree.hours = j.at("hours").get<int>();
  tree.shape = j.value("shape", std::vector<int>{});
  tree.wind_is_power = j.at("wind_is_power").get<bool>();
  tree.rated_power_mw = j.value("rated_power_mw", 0.0);
  tree.seed = j.value("seed", 0ULL);
  tree.floored_reserve_prices = j.value("floored_reserve_prices", 0);
  for (const auto& jd : j.at("da_nodes")) {
    DaNode d;
    d.prob = jd.at("prob").get<double>();
    d.da_price = jd.at("da_price").get<std::vector<double>>();
    d.expected_wind = jd.at("expected_wind").get<std::vector<double>>();
    for (const auto& jl : jd.at("leaves")) {
      RtLeaf l;
      l.prob = jl.at("prob").get<double>();
      l.rt_price = jl.at("rt_price").get<std::vector<double>>();
      l.reserve_up_price = jl.at("reserve_up_price").get<std::vector<double>>();
      l.reserve_down_price =
          jl.at("reserve_down_price").get<std::vector<double>>();
      l.wind = jl.at("wind").get<std::vector<double>>();
      d.leaves.push_back(std::move(l));
    }
    tree.da_nodes.push_back(std::move(d));
  }
  tree.validate();
  return tree;
}

void save_tree(const ScenarioTree& tree, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write tree file: " + path);
  out << tree_to_json(tree);
}

ScenarioTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tree file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return tree_from_json(ss.str());
}

}  // namespace owfplan
