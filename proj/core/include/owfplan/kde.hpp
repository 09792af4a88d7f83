#pragma once

#include <cstdint>
#include <vector>

namespace owfplan {

// Dense N x T x K tensor of historical trajectories (sample, time, channel).
class HistoryTensor {
 public:
  HistoryTensor(int n, int t, int k)
      : n_(n), t_(t), k_(k), data_(static_cast<size_t>(n) * t * k, 0.0) {}

  int samples() const { return n_; }
  int steps() const { return t_; }
  int channels() const { return k_; }

  double& at(int n, int t, int k) {
    return data_[(static_cast<size_t>(n) * t_ + t) * k_ + k];
  }
  double at(int n, int t, int k) const {
    return data_[(static_cast<size_t>(n) * t_ + t) * k_ + k];
  }

 private:
  int n_, t_, k_;
  std::vector<double> data_;
};

// One trajectory drawn from the stepwise weighted kernel density over the
// history: at each step the weights are renormalized, a donor sample is drawn,
// Gaussian kernel noise with a Silverman bandwidth (computed on the weighted
// sample) is added per channel, and - in Markovian mode - weights are updated
// by kernel affinity between each history sample and the freshly drawn value.
// Non-Markovian mode resets the weights to uniform each step. Output is T x K
// row-major. Deterministic in `seed`.
std::vector<double> kde_sample_trajectory(const HistoryTensor& history,
                                          bool markovian, std::uint64_t seed);

// pool_size independent trajectories with per-trajectory seeds derived from
// root_seed (stable under any evaluation order).
std::vector<std::vector<double>> kde_sample_pool(const HistoryTensor& history,
                                                 int pool_size, bool markovian,
                                                 std::uint64_t root_seed);

}  // namespace owfplan
