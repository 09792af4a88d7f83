#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "owfplan/power_curve.hpp"

namespace owfplan {

// Third-stage leaf: quarter-hour prices plus hourly wind, conditional
// probability within its parent node.
struct RtLeaf {
  double prob = 0.0;                    // conditional on the parent DA node
  std::vector<double> rt_price;         // $/MWh, one per quarter
  std::vector<double> reserve_up_price;    // $/MWh, one per quarter
  std::vector<double> reserve_down_price;  // $/MWh, one per quarter
  std::vector<double> wind;             // hourly; m/s, or MW once converted
};

// Second-stage node: a day-ahead price realization and its RT children.
struct DaNode {
  double prob = 0.0;
  std::vector<double> da_price;       // $/MWh, one per hour
  std::vector<RtLeaf> leaves;
  std::vector<double> expected_wind;  // hourly, probability-weighted over leaves
};

// Design -> DA -> RT scenario tree. The design root is implicit (single node);
// trailing singleton stages of the shape vector are structural no-ops kept as
// metadata.
struct ScenarioTree {
  int hours = 24;
  std::vector<int> shape;  // e.g. {1, 20, 5, 1, 1, 1}
  bool wind_is_power = false;
  double rated_power_mw = 0.0;  // set by the power conversion
  std::uint64_t seed = 0;
  int floored_reserve_prices = 0;  // negative reserve prices clamped to zero
  std::vector<DaNode> da_nodes;

  int quarters() const { return 4 * hours; }
  int leaf_count() const;

  // Probability sums (1e-9), channel lengths, power range when converted,
  // expected_wind consistency. Throws std::runtime_error on violation.
  void validate() const;

  void recompute_expected_wind();
};

// Replaces the wind-speed channel with farm power via curve.power_at and
// recomputes expected wind power. Requires a speed-carrying tree.
ScenarioTree wind_to_power_tree(const ScenarioTree& tree,
                                const PowerCurve& farm_curve);

std::string tree_to_json(const ScenarioTree& tree);
ScenarioTree tree_from_json(const std::string& text);
void save_tree(const ScenarioTree& tree, const std::string& path);
ScenarioTree load_tree(const std::string& path);

}  // namespace owfplan
