#include "owfplan/weibull.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace owfplan {

namespace {

// d/dk of the profile log-likelihood is proportional to
//   S1(k)/S0(k) - 1/k - mean(ln v),  S_j = sum v^k (ln v)^j.
double mle_gradient(const std::vector<double>& v, double k, double mean_log) {
  double s0 = 0.0, s1 = 0.0;
  for (double x : v) {
    const double p = std::pow(x, k);
    s0 += p;
    s1 += p * std::log(x);
  }
  return s1 / s0 - 1.0 / k - mean_log;
}

}  // namespace

WeibullFit fit_weibull(const std::vector<double>& samples_ms) {
  std::vector<double> v;
  v.reserve(samples_ms.size());
  for (double x : samples_ms) {
    if (x > 0.0) v.push_back(x);
  }
  if (v.size() < 100) {
    throw std::invalid_argument("fit_weibull: need >= 100 positive samples, got " +
                                std::to_string(v.size()));
  }
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  if (*mx - *mn <= 1e-12 * *mx) {
    throw std::invalid_argument(
        "fit_weibull: degenerate (constant) sample, shape is unbounded");
  }

  double mean_log = 0.0;
  for (double x : v) mean_log += std::log(x);
  mean_log /= static_cast<double>(v.size());

  // mle_gradient is decreasing in k; bracket the root then bisect.
  double lo = 1e-2, hi = 1.0;
  while (mle_gradient(v, hi, mean_log) > 0.0 && hi < 1e3) hi *= 2.0;
  if (hi >= 1e3) {
    throw std::invalid_argument("fit_weibull: shape parameter diverged");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mle_gradient(v, mid, mean_log) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12 * hi) break;
  }
  const double k = 0.5 * (lo + hi);

  double sk = 0.0;
  for (double x : v) sk += std::pow(x, k);
  const double lambda = std::pow(sk / static_cast<double>(v.size()), 1.0 / k);

  WeibullFit fit;
  fit.shape_k = k;
  fit.scale_lambda = lambda;
  fit.sample_count = static_cast<int>(v.size());
  fit.ks_statistic = weibull_ks_statistic(v, k, lambda);
  fit.ks_pass = fit.ks_statistic <= ks_critical_5pct(fit.sample_count);
  return fit;
}

double weibull_cdf(double x, double k, double lambda) {
  if (x <= 0.0) return 0.0;
  return 1.0 - std::exp(-std::pow(x / lambda, k));
}

double weibull_quantile(double u, double k, double lambda) {
  if (u < 0.0 || u >= 1.0) {
    throw std::domain_error("weibull_quantile: u must be in [0,1)");
  }
  return lambda * std::pow(-std::log1p(-u), 1.0 / k);
}

double weibull_sample(Rng& rng, double k, double lambda) {
  return weibull_quantile(rng.uniform01(), k, lambda);
}

double weibull_ks_statistic(const std::vector<double>& samples, double k,
                            double lambda) {
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    const double f = weibull_cdf(sorted[i], k, lambda);
    const double hi = (static_cast<double>(i) + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

double ks_critical_5pct(int n) {
  const double rn = std::sqrt(static_cast<double>(n));
  return 1.3581 / (rn + 0.12 + 0.11 / rn);
}

}  // namespace owfplan
