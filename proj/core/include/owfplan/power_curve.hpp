#pragma once

#include <string>
#include <utility>
#include <vector>

namespace owfplan {

// One quadratic piece p(v) = coeff[0] v^2 + coeff[1] v + coeff[2] on
// [lo_ms, hi_ms]; power in MW, speed in m/s.
struct CurveSegment {
  double lo_ms = 0.0;
  double hi_ms = 0.0;
  double coeff[3] = {0.0, 0.0, 0.0};  // quadratic, linear, constant

  double eval(double v) const { return (coeff[0] * v + coeff[1]) * v + coeff[2]; }
};

// Piecewise-quadratic turbine (or farm) power curve: zero below cut-in and at
// or above cut-out, rated on [rated_speed, cut_out), segment polynomials in
// between, always clamped to [0, rated_power].
struct PowerCurve {
  double cut_in_ms = 3.5;
  double rated_speed_ms = 14.0;
  double cut_out_ms = 25.0;
  double rated_power_mw = 1.5;
  std::vector<CurveSegment> segments;  // contiguous cover of [cut_in, rated_speed]

  double power_at(double speed_ms) const;

  // Checks anchor ordering, segment cover, and value continuity at joints
  // (tolerance 1e-6 * rated_power). Throws std::invalid_argument on failure.
  void validate() const;
};

struct PowerCurveFit {
  PowerCurve curve;
  double residual_rms = 0.0;
};

// Least-squares quadratic per knot interval with value continuity enforced at
// interior knots. `samples` must be sorted by speed; every interval needs at
// least 3 samples or the fit is rejected naming the offending segment.
PowerCurveFit fit_power_curve(const std::vector<std::pair<double, double>>& samples,
                              const std::vector<double>& knots,
                              double cut_out_ms = 25.0);

// Same curve with every power value scaled by farm_rating / rated_power.
PowerCurve upscale(const PowerCurve& curve, double farm_rating_mw);

// Smooth S-shaped 1.5 MW reference curve (anchors 3.5 / 14 / 25 m/s). The
// anchor values are configuration defaults, not measured data.
PowerCurve default_turbine_curve();

PowerCurve parse_curve_json(const std::string& text);
std::string curve_to_json(const PowerCurve& curve);
PowerCurve load_curve(const std::string& path);

// speed,power_mw rows from 0 to cut_out + 2 m/s for external plotting.
void write_curve_csv(const PowerCurve& curve, const std::string& path,
                     double step_ms = 0.25);

}  // namespace owfplan
