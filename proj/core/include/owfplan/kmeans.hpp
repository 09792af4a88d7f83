#pragma once

#include <cstdint>
#include <vector>

namespace owfplan {

struct KMeansResult {
  std::vector<int> assignment;           // point -> cluster
  std::vector<std::vector<double>> centroids;
  std::vector<int> sizes;                // points per cluster
  std::vector<int> medoids;              // point index nearest its centroid
  double inertia = 0.0;                  // sum of squared distances
};

// Seeded Lloyd's algorithm with k-means++ initialization, Euclidean distance,
// `restarts` independent starts (best inertia wins, ties to the earliest
// restart). Empty clusters are reseeded from the farthest point. Fully
// deterministic in `seed`.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    int restarts, std::uint64_t seed, int max_iters = 100);

}  // namespace owfplan
