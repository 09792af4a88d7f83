#include "owfplan/align.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace owfplan {

using nlohmann::json;

namespace {

// Mean-aggregates samples into `nbins` equal bins over [day_start,
// day_start+86400). Gap runs of <= max_fill are forward-filled; longer runs
// (or a gap in the first bin) abort with the missing intervals listed.
std::vector<double> bin_series(const std::vector<EpochSeconds>& ts,
                               const std::vector<double>& vals,
                               EpochSeconds day_start, int nbins,
                               const std::string& label, int* filled) {
  const double bin_len = 86400.0 / nbins;
  std::vector<double> sum(nbins, 0.0);
  std::vector<int> count(nbins, 0);
  for (size_t i = 0; i < ts.size(); ++i) {
    const double rel = static_cast<double>(ts[i] - day_start);
    if (rel < 0.0 || rel >= 86400.0) continue;
    const int bin = std::min(nbins - 1, static_cast<int>(rel / bin_len));
    sum[bin] += vals[i];
    count[bin] += 1;
  }

  std::vector<int> missing;
  for (int b = 0; b < nbins; ++b) {
    if (count[b] == 0) missing.push_back(b);
  }
  constexpr int kMaxFill = 2;
  bool fatal = false;
  if (!missing.empty()) {
    if (count[0] == 0) fatal = true;
    int run = 0;
    for (int b = 0; b < nbins; ++b) {
      run = (count[b] == 0) ? run + 1 : 0;
      if (run > kMaxFill) fatal = true;
    }
  }
  if (fatal) {
    std::ostringstream msg;
    msg << label << ": coverage gap on market day starting "
        << format_iso8601_utc(day_start) << "; missing intervals:";
    for (size_t i = 0; i < missing.size() && i < 16; ++i) {
      msg << " " << format_iso8601_utc(day_start +
                                       static_cast<EpochSeconds>(missing[i] * bin_len));
    }
    if (missing.size() > 16) msg << " ... (" << missing.size() << " total)";
    throw std::runtime_error(msg.str());
  }

  std::vector<double> out(nbins);
  for (int b = 0; b < nbins; ++b) {
    if (count[b] > 0) {
      out[b] = sum[b] / count[b];
    } else {
      out[b] = out[b - 1];  // b>0 guaranteed by the leading-gap check
      if (filled) ++(*filled);
    }
  }
  return out;
}

std::string date_of_day_start(EpochSeconds day_start) {
  return format_iso8601_utc(day_start).substr(0, 10);
}

}  // namespace

std::int64_t market_day_from_date(const std::string& date,
                                  double tz_offset_hours) {
  if (date.size() != 10) {
    throw std::invalid_argument("expected YYYY-MM-DD date, got '" + date + "'");
  }
  const EpochSeconds t = parse_iso8601_utc(date + "T00:00:00Z");
  // The date names the local market day; its index is that of its first second.
  return market_day_index(t - static_cast<EpochSeconds>(std::llround(
                                  tz_offset_hours * 3600.0)),
                          tz_offset_hours);
}

DayData align_day(const DayInputs& inputs, std::int64_t market_day,
                  double tz_offset_hours) {
  if (!inputs.da || !inputs.rt || !inputs.reserve_up || !inputs.reserve_down ||
      !inputs.wind) {
    throw std::invalid_argument("align_day: all five series are required");
  }
  const EpochSeconds start = day_start_utc(market_day, tz_offset_hours);
  DayData day;
  day.day_index = market_day;
  day.date = date_of_day_start(start + static_cast<EpochSeconds>(
                                           std::llround(tz_offset_hours * 3600.0)));
  int filled = 0;
  auto da = bin_series(inputs.da->timestamps, inputs.da->values, start, 24,
                       "da price", &filled);
  auto rt = bin_series(inputs.rt->timestamps, inputs.rt->values, start, 96,
                       "rt price", &filled);
  auto ru = bin_series(inputs.reserve_up->timestamps, inputs.reserve_up->values,
                       start, 96, "up-reserve price", &filled);
  auto rd = bin_series(inputs.reserve_down->timestamps,
                       inputs.reserve_down->values, start, 96,
                       "down-reserve price", &filled);
  auto wind = bin_series(inputs.wind->timestamps, inputs.wind->speeds_ms, start,
                         24, "wind speed", &filled);
  std::copy(da.begin(), da.end(), day.da_price.begin());
  std::copy(rt.begin(), rt.end(), day.rt_price.begin());
  std::copy(ru.begin(), ru.end(), day.reserve_up_price.begin());
  std::copy(rd.begin(), rd.end(), day.reserve_down_price.begin());
  std::copy(wind.begin(), wind.end(), day.wind_ms.begin());
  day.forward_filled_intervals = filled;
  return day;
}

std::vector<DayData> align_all_days(const DayInputs& inputs,
                                    double tz_offset_hours) {
  if (!inputs.da || !inputs.da->size()) return {};
  // Candidate days: those spanned by the DA series.
  const std::int64_t first =
      market_day_index(inputs.da->timestamps.front(), tz_offset_hours);
  const std::int64_t last =
      market_day_index(inputs.da->timestamps.back(), tz_offset_hours);
  std::vector<DayData> out;
  for (std::int64_t d = first; d <= last; ++d) {
    try {
      out.push_back(align_day(inputs, d, tz_offset_hours));
    } catch (const std::runtime_error&) {
      // Partially covered edge days are expected; skip them.
    }
  }
  return out;
}

DataManifest load_data_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("manifest " + path + ": invalid JSON: " + e.what());
  }
  DataManifest m;
  m.poi = j.at("poi").get<std::string>();
  m.year = j.value("year", 0);
  const auto& files = j.at("files");
  const auto dir = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (dir / fp).string();
  };
  m.da_path = resolve(files.at("da").get<std::string>());
  m.rt_path = resolve(files.at("rt").get<std::string>());
  m.reserve_up_path = resolve(files.at("reserve_up").get<std::string>());
  m.reserve_down_path = resolve(files.at("reserve_down").get<std::string>());
  m.wind_path = resolve(files.at("wind").get<std::string>());
  return m;
}

std::string dayset_to_json(const std::vector<DayData>& days,
                           const std::string& poi) {
  json j;
  j["schema_version"] = 1;
  j["poi"] = poi;
  j["days"] = json::array();
  for (const auto& d : days) {
    json jd;
    jd["day_index"] = d.day_index;
    jd["date"] = d.date;
    jd["da_price"] = d.da_price;
    jd["rt_price"] = d.rt_price;
    jd["reserve_up_price"] = d.reserve_up_price;
    jd["reserve_down_price"] = d.reserve_down_price;
    jd["wind_ms"] = d.wind_ms;
    jd["forward_filled_intervals"] = d.forward_filled_intervals;
    j["days"].push_back(std::move(jd));
  }
  return j.dump();
}

std::vector<DayData> dayset_from_json(const std::string& text,
                                      std::string* poi) {
  json j = json::parse(text);
  if (poi) *poi = j.value("poi", "");
  std::vector<DayData> out;
  for (const auto& jd : j.at("days")) {
    DayData d;
    d.day_index = jd.at("day_index").get<std::int64_t>();
    d.date = jd.at("date").get<std::string>();
    auto copy_to = [](const json& arr, auto& dst) {
      if (arr.size() != dst.size()) {
        throw std::runtime_error("dayset: bad array length");
      }
      for (size_t i = 0; i < dst.size(); ++i) dst[i] = arr[i].get<double>();
    };
    copy_to(jd.at("da_price"), d.da_price);
    copy_to(jd.at("rt_price"), d.rt_price);
    copy_to(jd.at("reserve_up_price"), d.reserve_up_price);
    copy_to(jd.at("reserve_down_price"), d.reserve_down_price);
    copy_to(jd.at("wind_ms"), d.wind_ms);
    d.forward_filled_intervals = jd.value("forward_filled_intervals", 0);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace owfplan
