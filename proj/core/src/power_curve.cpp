#include "owfplan/power_curve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace owfplan {

using nlohmann::json;

double PowerCurve::power_at(double speed_ms) const {
  if (speed_ms < cut_in_ms) return 0.0;
  if (speed_ms >= cut_out_ms) return 0.0;
  if (speed_ms >= rated_speed_ms) return rated_power_mw;
  for (const auto& seg : segments) {
    if (speed_ms >= seg.lo_ms && speed_ms <= seg.hi_ms) {
      return std::clamp(seg.eval(speed_ms), 0.0, rated_power_mw);
    }
  }
  // Segments cover [cut_in, rated_speed] after validate(); reaching here
  // means an unvalidated curve with a gap.
  throw std::logic_error("PowerCurve: no segment covers speed " +
                         std::to_string(speed_ms));
}

void PowerCurve::validate() const {
  if (!(0.0 < cut_in_ms && cut_in_ms < rated_speed_ms &&
        rated_speed_ms < cut_out_ms)) {
    throw std::invalid_argument(
        "PowerCurve: need 0 < cut_in < rated_speed < cut_out");
  }
  if (rated_power_mw <= 0.0) {
    throw std::invalid_argument("PowerCurve: rated_power must be > 0");
  }
  if (segments.empty()) {
    throw std::invalid_argument("PowerCurve: no segments");
  }
  const double tol = 1e-6 * rated_power_mw;
  if (std::abs(segments.front().lo_ms - cut_in_ms) > 1e-9 ||
      std::abs(segments.back().hi_ms - rated_speed_ms) > 1e-9) {
    throw std::invalid_argument(
        "PowerCurve: segments must cover [cut_in, rated_speed]");
  }
  for (size_t i = 0; i + 1 < segments.size(); ++i) {
    if (std::abs(segments[i].hi_ms - segments[i + 1].lo_ms) > 1e-9) {
      throw std::invalid_argument("PowerCurve: segment gap after segment " +
                                  std::to_string(i));
    }
    const double joint = segments[i].hi_ms;
    if (std::abs(segments[i].eval(joint) - segments[i + 1].eval(joint)) > tol) {
      throw std::invalid_argument("PowerCurve: discontinuity at joint " +
                                  std::to_string(joint));
    }
  }
}

PowerCurveFit fit_power_curve(const std::vector<std::pair<double, double>>& samples,
                              const std::vector<double>& knots,
                              double cut_out_ms) {
  if (knots.size() < 2) {
    throw std::invalid_argument("fit_power_curve: need at least 2 knots");
  }
  if (!std::is_sorted(knots.begin(), knots.end())) {
    throw std::invalid_argument("fit_power_curve: knots must be sorted");
  }
  if (!std::is_sorted(samples.begin(), samples.end(),
                      [](auto& a, auto& b) { return a.first < b.first; })) {
    throw std::invalid_argument("fit_power_curve: samples must be sorted by speed");
  }

  const int nseg = static_cast<int>(knots.size()) - 1;
  std::vector<std::vector<int>> members(nseg);
  for (int s = 0; s < static_cast<int>(samples.size()); ++s) {
    const double v = samples[s].first;
    if (v < knots.front() || v > knots.back()) continue;
    int seg = int(std::upper_bound(knots.begin(), knots.end(), v) -
                  knots.begin()) - 1;
    seg = std::clamp(seg, 0, nseg - 1);
    members[seg].push_back(s);
  }
  for (int j = 0; j < nseg; ++j) {
    if (members[j].size() < 3) {
      throw std::invalid_argument(
          "fit_power_curve: segment " + std::to_string(j) + " [" +
          std::to_string(knots[j]) + "," + std::to_string(knots[j + 1]) +
          "] has " + std::to_string(members[j].size()) +
          " samples, need >= 3 (underdetermined)");
    }
  }

  // Stack per-segment design matrices and couple them with value-continuity
  // equalities at interior knots; solve the KKT system of the constrained
  // least-squares problem.
  const int nvar = 3 * nseg;
  const int ncon = nseg - 1;
  int nrows = 0;
  for (auto& m : members) nrows += static_cast<int>(m.size());

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nrows, nvar);
  Eigen::VectorXd y(nrows);
  int r = 0;
  for (int j = 0; j < nseg; ++j) {
    for (int s : members[j]) {
      const double v = samples[s].first;
      A(r, 3 * j + 0) = v * v;
      A(r, 3 * j + 1) = v;
      A(r, 3 * j + 2) = 1.0;
      y(r) = samples[s].second;
      ++r;
    }
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(ncon, nvar);
  for (int j = 0; j < ncon; ++j) {
    const double k = knots[j + 1];
    C(j, 3 * j + 0) = k * k;
    C(j, 3 * j + 1) = k;
    C(j, 3 * j + 2) = 1.0;
    C(j, 3 * (j + 1) + 0) = -k * k;
    C(j, 3 * (j + 1) + 1) = -k;
    C(j, 3 * (j + 1) + 2) = -1.0;
  }

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nvar + ncon, nvar + ncon);
  kkt.topLeftCorner(nvar, nvar) = 2.0 * A.transpose() * A;
  if (ncon > 0) {
    kkt.topRightCorner(nvar, ncon) = C.transpose();
    kkt.bottomLeftCorner(ncon, nvar) = C;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nvar + ncon);
  rhs.head(nvar) = 2.0 * A.transpose() * y;
  Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  if (!sol.allFinite()) {
    throw std::runtime_error("fit_power_curve: singular normal equations");
  }

  PowerCurveFit out;
  out.curve.cut_in_ms = knots.front();
  out.curve.rated_speed_ms = knots.back();
  out.curve.cut_out_ms = cut_out_ms;
  out.curve.segments.resize(nseg);
  for (int j = 0; j < nseg; ++j) {
    auto& seg = out.curve.segments[j];
    seg.lo_ms = knots[j];
    seg.hi_ms = knots[j + 1];
    seg.coeff[0] = sol(3 * j + 0);
    seg.coeff[1] = sol(3 * j + 1);
    seg.coeff[2] = sol(3 * j + 2);
  }
  out.curve.rated_power_mw = out.curve.segments.back().eval(knots.back());
  if (out.curve.rated_power_mw <= 0.0) {
    throw std::runtime_error(
        "fit_power_curve: fitted power at rated speed is not positive");
  }
  out.residual_rms = std::sqrt((A * sol.head(nvar) - y).squaredNorm() /
                               static_cast<double>(nrows));
  out.curve.validate();
  return out;
}

PowerCurve upscale(const PowerCurve& curve, double farm_rating_mw) {
  if (farm_rating_mw <= 0.0) {
    throw std::invalid_argument("upscale: farm rating must be > 0");
  }
  const double scale = farm_rating_mw / curve.rated_power_mw;
  PowerCurve out = curve;
  out.rated_power_mw = farm_rating_mw;
  for (auto& seg : out.segments) {
    seg.coeff[0] *= scale;
    seg.coeff[1] *= scale;
    seg.coeff[2] *= scale;
  }
  return out;
}

PowerCurve default_turbine_curve() {
  // Two quadratics meeting at the midpoint with matched value and slope:
  // c*(v-cut_in)^2 rising into rated - c*(rated_speed-v)^2.
  PowerCurve c;
  c.cut_in_ms = 3.5;
  c.rated_speed_ms = 14.0;
  c.cut_out_ms = 25.0;
  c.rated_power_mw = 1.5;
  const double mid = 0.5 * (c.cut_in_ms + c.rated_speed_ms);
  const double half = mid - c.cut_in_ms;
  const double k = 0.5 * c.rated_power_mw / (half * half);

  CurveSegment lo;
  lo.lo_ms = c.cut_in_ms;
  lo.hi_ms = mid;
  lo.coeff[0] = k;
  lo.coeff[1] = -2.0 * k * c.cut_in_ms;
  lo.coeff[2] = k * c.cut_in_ms * c.cut_in_ms;

  CurveSegment hi;
  hi.lo_ms = mid;
  hi.hi_ms = c.rated_speed_ms;
  hi.coeff[0] = -k;
  hi.coeff[1] = 2.0 * k * c.rated_speed_ms;
  hi.coeff[2] = c.rated_power_mw - k * c.rated_speed_ms * c.rated_speed_ms;

  c.segments = {lo, hi};
  c.validate();
  return c;
}

PowerCurve parse_curve_json(const std::string& text) {
  json j = json::parse(text);
  PowerCurve c;
  if (j.contains("samples")) {
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : j.at("samples")) {
      samples.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    }
    std::vector<double> knots = j.at("knots").get<std::vector<double>>();
    const double cut_out = j.value("cut_out_ms", 25.0);
    return fit_power_curve(samples, knots, cut_out).curve;
  }
  c.cut_in_ms = j.at("cut_in_ms").get<double>();
  c.rated_speed_ms = j.at("rated_speed_ms").get<double>();
  c.cut_out_ms = j.at("cut_out_ms").get<double>();
  c.rated_power_mw = j.at("rated_power_mw").get<double>();
  for (const auto& js : j.at("segments")) {
    CurveSegment seg;
    seg.lo_ms = js.at("lo_ms").get<double>();
    seg.hi_ms = js.at("hi_ms").get<double>();
    auto coeffs = js.at("coeffs").get<std::vector<double>>();
    if (coeffs.size() != 3) {
      throw std::invalid_argument("curve segment needs 3 coefficients");
    }
    seg.coeff[0] = coeffs[0];
    seg.coeff[1] = coeffs[1];
    seg.coeff[2] = coeffs[2];
    c.segments.push_back(seg);
  }
  c.validate();
  return c;
}

std::string curve_to_json(const PowerCurve& curve) {
  json j;
  j["cut_in_ms"] = curve.cut_in_ms;
  j["rated_speed_ms"] = curve.rated_speed_ms;
  j["cut_out_ms"] = curve.cut_out_ms;
  j["rated_power_mw"] = curve.rated_power_mw;
  j["segments"] = json::array();
  for (const auto& seg : curve.segments) {
    j["segments"].push_back(
        {{"lo_ms", seg.lo_ms},
         {"hi_ms", seg.hi_ms},
         {"coeffs", {seg.coeff[0], seg.coeff[1], seg.coeff[2]}}});
  }
  return j.dump(2);
}

PowerCurve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open curve file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_curve_json(ss.str());
}

void write_curve_csv(const PowerCurve& curve, const std::string& path,
                     double step_ms) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write curve csv: " + path);
  out << "speed_ms,power_mw\n";
  for (double v = 0.0; v <= curve.cut_out_ms + 2.0 + 1e-9; v += step_ms) {
    out << v << "," << curve.power_at(v) << "\n";
  }
}

}  // namespace owfplan
