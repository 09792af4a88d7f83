#pragma once

#include <vector>

#include "owfplan/rng.hpp"

namespace owfplan {

// Maximum-likelihood Weibull fit plus a Kolmogorov-Smirnov goodness check
// against the fitted CDF.
struct WeibullFit {
  double shape_k = 0.0;
  double scale_lambda = 0.0;  // m/s
  double ks_statistic = 0.0;
  bool ks_pass = false;  // at the 5% level
  int sample_count = 0;
};

// Fits the positive samples (at least 100 required). Throws
// std::invalid_argument for too-few/degenerate data (all zero or constant).
WeibullFit fit_weibull(const std::vector<double>& samples_ms);

double weibull_cdf(double x, double k, double lambda);
double weibull_quantile(double u, double k, double lambda);  // u in [0,1)
double weibull_sample(Rng& rng, double k, double lambda);

// Two-sided KS statistic of `samples` against the (k, lambda) CDF.
double weibull_ks_statistic(const std::vector<double>& samples, double k,
                            double lambda);

// Stephens' approximation of the 5% KS critical value for n samples.
double ks_critical_5pct(int n);

}  // namespace owfplan
