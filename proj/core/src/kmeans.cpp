#include "owfplan/kmeans.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "owfplan/rng.hpp"

namespace owfplan {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

KMeansResult run_once(const std::vector<std::vector<double>>& pts, int k,
                      Rng rng, int max_iters) {
  const int n = static_cast<int>(pts.size());
  const size_t dim = pts[0].size();

  // k-means++ seeding.
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  centroids.push_back(pts[rng.uniform_int(n)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const auto& c : centroids) best = std::min(best, sq_dist(pts[i], c));
      d2[i] = best;
      total += best;
    }
    int pick = 0;
    if (total > 0.0) {
      const double u = rng.uniform01() * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.uniform_int(n);  // all points identical
    }
    centroids.push_back(pts[pick]);
  }

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bestd = std::numeric_limits<double>::max();
      for (int c = 0; c < k; ++c) {
        const double d = sq_dist(pts[i], centroids[c]);
        if (d < bestd) {
          bestd = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      counts[assign[i]] += 1;
      for (size_t j = 0; j < dim; ++j) sums[assign[i]][j] += pts[i][j];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Reseed the empty cluster from the globally farthest point.
        int far = 0;
        double fard = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d = sq_dist(pts[i], centroids[assign[i]]);
          if (d > fard) {
            fard = d;
            far = i;
          }
        }
        centroids[c] = pts[far];
        assign[far] = c;
        changed = true;
      } else {
        for (size_t j = 0; j < dim; ++j) {
          centroids[c][j] = sums[c][j] / counts[c];
        }
      }
    }
    if (!changed && iter > 0) break;
  }

  KMeansResult res;
  res.assignment = assign;
  res.centroids = centroids;
  res.sizes.assign(k, 0);
  res.medoids.assign(k, -1);
  std::vector<double> medoid_d(k, std::numeric_limits<double>::max());
  res.inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    const int c = assign[i];
    res.sizes[c] += 1;
    const double d = sq_dist(pts[i], centroids[c]);
    res.inertia += d;
    if (d < medoid_d[c]) {
      medoid_d[c] = d;
      res.medoids[c] = i;
    }
  }
  return res;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    int restarts, std::uint64_t seed, int max_iters) {
  if (points.empty()) throw std::invalid_argument("kmeans: no points");
  if (k < 1 || k > static_cast<int>(points.size())) {
    throw std::invalid_argument("kmeans: need 1 <= k <= point count");
  }
  if (restarts < 1) restarts = 1;
  Rng root(seed);
  KMeansResult best;
  double best_inertia = std::numeric_limits<double>::max();
  for (int r = 0; r < restarts; ++r) {
    KMeansResult res = run_once(points, k, root.child(r), max_iters);
    if (res.inertia < best_inertia) {
      best_inertia = res.inertia;
      best = std::move(res);
    }
  }
  return best;
}

}  // namespace owfplan
