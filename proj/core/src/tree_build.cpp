#include "owfplan/tree_build.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "owfplan/kmeans.hpp"
#include "owfplan/rng.hpp"

namespace owfplan {

namespace {

// Hourly means of one channel of a quarter-resolution trajectory (row-major
// T x K).
std::vector<double> hourly_channel(const std::vector<double>& traj, int hours,
                                   int chan) {
  std::vector<double> out(hours, 0.0);
  for (int h = 0; h < hours; ++h) {
    double s = 0.0;
    for (int q = 4 * h; q < 4 * h + 4; ++q) {
      s += traj[static_cast<size_t>(q) * kChanCount + chan];
    }
    out[h] = 0.25 * s;
  }
  return out;
}

std::vector<double> quarter_channel(const std::vector<double>& traj,
                                    int quarters, int chan) {
  std::vector<double> out(quarters);
  for (int q = 0; q < quarters; ++q) {
    out[q] = traj[static_cast<size_t>(q) * kChanCount + chan];
  }
  return out;
}

void check_shape(const std::vector<int>& shape) {
  if (shape.size() < 3) {
    throw std::invalid_argument("tree shape needs at least 3 stages");
  }
  if (shape[0] != 1) {
    throw std::invalid_argument("tree shape must start with a single root");
  }
  if (shape[1] < 1 || shape[2] < 1) {
    throw std::invalid_argument("tree shape stage sizes must be >= 1");
  }
  for (size_t i = 3; i < shape.size(); ++i) {
    if (shape[i] != 1) {
      throw std::invalid_argument(
          "tree shape stages beyond the third must be singleton");
    }
  }
}

}  // namespace

HistoryTensor history_from_days(const std::vector<DayData>& days) {
  if (days.empty()) throw std::invalid_argument("history_from_days: no days");
  const int n = static_cast<int>(days.size());
  HistoryTensor hist(n, 96, kChanCount);
  for (int i = 0; i < n; ++i) {
    const auto& d = days[i];
    for (int q = 0; q < 96; ++q) {
      hist.at(i, q, kChanDa) = d.da_price[q / 4];
      hist.at(i, q, kChanRt) = d.rt_price[q];
      hist.at(i, q, kChanResUp) = d.reserve_up_price[q];
      hist.at(i, q, kChanResDown) = d.reserve_down_price[q];
      hist.at(i, q, kChanWind) = d.wind_ms[q / 4];
    }
  }
  return hist;
}

ScenarioTree build_tree(const std::vector<std::vector<double>>& pool,
                        const std::vector<int>& shape, int hours,
                        int kmeans_restarts, std::uint64_t seed) {
  check_shape(shape);
  const int scn1 = shape[1];
  const int scn2 = shape[2];
  const int quarters = 4 * hours;
  const size_t traj_len = static_cast<size_t>(quarters) * kChanCount;
  if (static_cast<int>(pool.size()) < scn1 * scn2) {
    throw std::invalid_argument(
        "build_tree: pool of " + std::to_string(pool.size()) +
        " trajectories is smaller than the " + std::to_string(scn1 * scn2) +
        " leaves requested");
  }
  for (const auto& traj : pool) {
    if (traj.size() != traj_len) {
      throw std::invalid_argument("build_tree: trajectory length mismatch");
    }
  }

  // Stage 2: cluster on the day-ahead observable.
  std::vector<std::vector<double>> da_features(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    da_features[i] = hourly_channel(pool[i], hours, kChanDa);
  }
  Rng seeder(seed);
  const KMeansResult da_clusters =
      kmeans(da_features, scn1, kmeans_restarts, seeder.child(0).next_u64());

  // Stage 3 features: remaining channels, standardized over the whole pool so
  // prices and speeds weigh comparably.
  const size_t rt_dim = static_cast<size_t>(3 * quarters + hours);
  std::vector<std::vector<double>> rt_features(pool.size(),
                                               std::vector<double>(rt_dim));
  for (size_t i = 0; i < pool.size(); ++i) {
    auto& f = rt_features[i];
    size_t at = 0;
    for (int chan : {kChanRt, kChanResUp, kChanResDown}) {
      for (int q = 0; q < quarters; ++q) {
        f[at++] = pool[i][static_cast<size_t>(q) * kChanCount + chan];
      }
    }
    const auto w = hourly_channel(pool[i], hours, kChanWind);
    for (int h = 0; h < hours; ++h) f[at++] = w[h];
  }
  for (size_t d = 0; d < rt_dim; ++d) {
    double mean = 0.0;
    for (const auto& f : rt_features) mean += f[d];
    mean /= static_cast<double>(rt_features.size());
    double var = 0.0;
    for (const auto& f : rt_features) var += (f[d] - mean) * (f[d] - mean);
    const double sd = std::sqrt(var / static_cast<double>(rt_features.size()));
    if (sd > 1e-12) {
      for (auto& f : rt_features) f[d] = (f[d] - mean) / sd;
    } else {
      for (auto& f : rt_features) f[d] = 0.0;
    }
  }

  ScenarioTree tree;
  tree.hours = hours;
  tree.shape = shape;
  tree.seed = seed;

  for (int c = 0; c < scn1; ++c) {
    std::vector<int> members;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (da_clusters.assignment[i] == c) members.push_back(static_cast<int>(i));
    }
    if (static_cast<int>(members.size()) < scn2) {
      throw std::runtime_error(
          "build_tree: stage-2 cluster " + std::to_string(c) + " has only " +
          std::to_string(members.size()) + " members, needs >= " +
          std::to_string(scn2) + "; enlarge the pool");
    }

    DaNode node;
    node.prob = static_cast<double>(members.size()) /
                static_cast<double>(pool.size());
    node.da_price = hourly_channel(pool[da_clusters.medoids[c]], hours, kChanDa);

    std::vector<std::vector<double>> member_feats(members.size());
    for (size_t m = 0; m < members.size(); ++m) {
      member_feats[m] = rt_features[members[m]];
    }
    const KMeansResult rt_clusters =
        kmeans(member_feats, scn2, kmeans_restarts,
               seeder.child(100 + c).next_u64());

    for (int l = 0; l < scn2; ++l) {
      RtLeaf leaf;
      leaf.prob = static_cast<double>(rt_clusters.sizes[l]) /
                  static_cast<double>(members.size());
      const int medoid = members[rt_clusters.medoids[l]];
      leaf.rt_price = quarter_channel(pool[medoid], quarters, kChanRt);
      leaf.reserve_up_price = quarter_channel(pool[medoid], quarters, kChanResUp);
      leaf.reserve_down_price =
          quarter_channel(pool[medoid], quarters, kChanResDown);
      for (auto* prices : {&leaf.reserve_up_price, &leaf.reserve_down_price}) {
        for (auto& p : *prices) {
          if (p < 0.0) {
            p = 0.0;
            tree.floored_reserve_prices += 1;
          }
        }
      }
      leaf.wind = hourly_channel(pool[medoid], hours, kChanWind);
      for (auto& w : leaf.wind) w = std::max(w, 0.0);  // kernel noise can dip below 0
      node.leaves.push_back(std::move(leaf));
    }
    std::sort(node.leaves.begin(), node.leaves.end(),
              [](const RtLeaf& a, const RtLeaf& b) {
                if (a.prob != b.prob) return a.prob > b.prob;
                return a.rt_price < b.rt_price;
              });
    tree.da_nodes.push_back(std::move(node));
  }

  std::sort(tree.da_nodes.begin(), tree.da_nodes.end(),
            [](const DaNode& a, const DaNode& b) {
              if (a.prob != b.prob) return a.prob > b.prob;
              return a.da_price < b.da_price;
            });
  tree.recompute_expected_wind();
  tree.validate();
  return tree;
}

ScenarioTree generate_tree(const HistoryTensor& history, int pool_size,
                           bool markovian, const std::vector<int>& shape,
                           int hours, int kmeans_restarts, std::uint64_t seed) {
  const auto pool = kde_sample_pool(history, pool_size, markovian, seed);
  ScenarioTree tree = build_tree(pool, shape, hours, kmeans_restarts, seed);
  return tree;
}

}  // namespace owfplan
