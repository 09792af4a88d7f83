#include "owfplan/kde.hpp"

#include <cmath>
#include <stdexcept>

#include "owfplan/rng.hpp"

namespace owfplan {

std::vector<double> kde_sample_trajectory(const HistoryTensor& history,
                                          bool markovian, std::uint64_t seed) {
  const int n = history.samples();
  const int tsteps = history.steps();
  const int nchan = history.channels();
  if (n < 2) {
    throw std::invalid_argument("kde_sample_trajectory: need >= 2 history samples");
  }
  if (tsteps < 1 || nchan < 1) {
    throw std::invalid_argument("kde_sample_trajectory: empty history");
  }

  Rng rng(seed);
  std::vector<double> w(n, 1.0);
  std::vector<double> x(static_cast<size_t>(tsteps) * nchan, 0.0);
  std::vector<double> h(nchan, 0.0);

  for (int t = 0; t < tsteps; ++t) {
    double wsum = 0.0;
    for (double wi : w) wsum += wi;
    if (!(wsum > 0.0) || !std::isfinite(wsum)) {
      // Weight collapse (all affinities underflowed); restart from uniform.
      std::fill(w.begin(), w.end(), 1.0);
      wsum = static_cast<double>(n);
    }
    for (double& wi : w) wi /= wsum;

    // Effective sample size of the weighted history at this step.
    double w2 = 0.0;
    for (double wi : w) w2 += wi * wi;
    const double neff = 1.0 / w2;

    // Weighted standard deviation and Silverman bandwidth per channel.
    for (int k = 0; k < nchan; ++k) {
      double mean = 0.0;
      for (int i = 0; i < n; ++i) mean += w[i] * history.at(i, t, k);
      double var = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = history.at(i, t, k) - mean;
        var += w[i] * d * d;
      }
      const double sigma = std::sqrt(std::max(var, 0.0));
      h[k] = sigma * std::pow(4.0 / ((nchan + 2.0) * neff),
                              1.0 / (nchan + 4.0));
    }

    // Draw a donor index from the categorical weights.
    const double u = rng.uniform01();
    int donor = n - 1;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += w[i];
      if (u < acc) {
        donor = i;
        break;
      }
    }

    for (int k = 0; k < nchan; ++k) {
      x[static_cast<size_t>(t) * nchan + k] =
          history.at(donor, t, k) + h[k] * rng.normal();
    }

    if (markovian) {
      for (int i = 0; i < n; ++i) {
        double q = 0.0;
        for (int k = 0; k < nchan; ++k) {
          const double scale = std::max(h[k], 1e-12);
          const double d =
              (history.at(i, t, k) - x[static_cast<size_t>(t) * nchan + k]) /
              scale;
          q += d * d;
        }
        w[i] *= std::exp(-0.5 * q);
      }
    } else {
      std::fill(w.begin(), w.end(), 1.0);
    }
  }
  return x;
}

std::vector<std::vector<double>> kde_sample_pool(const HistoryTensor& history,
                                                 int pool_size, bool markovian,
                                                 std::uint64_t root_seed) {
  if (pool_size < 1) {
    throw std::invalid_argument("kde_sample_pool: pool_size must be >= 1");
  }
  Rng root(root_seed);
  std::vector<std::vector<double>> pool(pool_size);
  for (int i = 0; i < pool_size; ++i) {
    // Child seeds are a pure function of (root_seed, i).
    pool[i] = kde_sample_trajectory(history, markovian,
                                    root.child(static_cast<std::uint64_t>(i))
                                        .next_u64());
  }
  return pool;
}

}  // namespace owfplan
