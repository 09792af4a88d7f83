#pragma once

#include <cstdint>
#include <vector>

#include "owfplan/align.hpp"
#include "owfplan/kde.hpp"
#include "owfplan/scenario_tree.hpp"

namespace owfplan {

// Channel order used throughout the sampling pipeline.
enum TreeChannel : int {
  kChanDa = 0,
  kChanRt = 1,
  kChanResUp = 2,
  kChanResDown = 3,
  kChanWind = 4,
  kChanCount = 5,
};

// Stacks aligned days into the sampling tensor: T = quarters, K = 5, with the
// hourly channels (DA price, wind) held constant inside each hour.
HistoryTensor history_from_days(const std::vector<DayData>& days);

// Clusters a trajectory pool into the staged tree. Stage 2 clusters on the
// day-ahead observable (hourly DA price), stage 3 on the remaining channels
// (standardized) within each stage-2 cluster. Node values are cluster medoids
// so every node is a realizable sampled history; probabilities are cluster
// mass fractions. `shape` is {1, SCN1, SCN2} with optional trailing 1s.
ScenarioTree build_tree(const std::vector<std::vector<double>>& pool,
                        const std::vector<int>& shape, int hours,
                        int kmeans_restarts, std::uint64_t seed);

// history -> KDE pool -> clustered tree, in one call.
ScenarioTree generate_tree(const HistoryTensor& history, int pool_size,
                           bool markovian, const std::vector<int>& shape,
                           int hours, int kmeans_restarts, std::uint64_t seed);

}  // namespace owfplan
