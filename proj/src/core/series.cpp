#include "core/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace bess {
namespace {

constexpr std::int64_t kStepSeconds = 900;
constexpr std::int64_t kHourSeconds = 3600;
constexpr std::int64_t kDaySeconds = 86400;

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned kLengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return kLengths[m - 1];
}

bool parse_fixed_uint(const std::string& s, std::size_t pos, std::size_t width, unsigned& out) {
  if (pos + width > s.size()) return false;
  unsigned value = 0;
  for (std::size_t i = 0; i < width; ++i) {
    const char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + static_cast<unsigned>(c - '0');
  }
  out = value;
  return true;
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct RawSeries {
  std::vector<std::int64_t> ts;
  std::vector<double> value;
};

RawSeries read_csv(const std::string& path, const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header)
    throw SchemaError(path + ": expected header '" + expected_header + "', got '" + line + "'");

  RawSeries out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw SchemaError(path + ": row " + std::to_string(row) + " is not two fields");
    std::int64_t ts;
    try {
      ts = parse_timestamp(line.substr(0, comma));
    } catch (const SchemaError& e) {
      throw SchemaError(path + ": row " + std::to_string(row) + ": " + e.what());
    }
    const char* begin = line.data() + comma + 1;
    const char* end = line.data() + line.size();
    double value = 0.0;
    const auto parsed = std::from_chars(begin, end, value);
    if (parsed.ec != std::errc{} || parsed.ptr != end || !std::isfinite(value))
      throw SchemaError(path + ": row " + std::to_string(row) + ": bad numeric value");
    out.ts.push_back(ts);
    out.value.push_back(value);
  }
  return out;
}

// Puts samples on a uniform grid at `cadence` seconds. A single missing sample
// is forward-filled; anything wider is an error.
RawSeries regularize(const RawSeries& raw, std::int64_t cadence, const std::string& name) {
  RawSeries out;
  out.ts.push_back(raw.ts.front());
  out.value.push_back(raw.value.front());
  for (std::size_t i = 1; i < raw.ts.size(); ++i) {
    const std::int64_t delta = raw.ts[i] - out.ts.back();
    if (delta <= 0) throw SchemaError(name + ": timestamps not strictly increasing");
    if (delta % cadence != 0)
      throw AlignmentError(name + ": timestamp " + format_timestamp(raw.ts[i]) +
                           " is off the sampling grid");
    const std::int64_t missing = delta / cadence - 1;
    if (missing > 1)
      throw AlignmentError(name + ": gap of " + std::to_string(missing) + " steps before " +
                           format_timestamp(raw.ts[i]));
    if (missing == 1) {
      out.ts.push_back(out.ts.back() + cadence);
      out.value.push_back(out.value.back());
    }
    out.ts.push_back(raw.ts[i]);
    out.value.push_back(raw.value[i]);
  }
  return out;
}

RawSeries expand_hourly(const RawSeries& hourly) {
  RawSeries out;
  out.ts.reserve(hourly.ts.size() * 4);
  out.value.reserve(hourly.ts.size() * 4);
  for (std::size_t i = 0; i < hourly.ts.size(); ++i) {
    for (int q = 0; q < 4; ++q) {
      out.ts.push_back(hourly.ts[i] + q * kStepSeconds);
      out.value.push_back(hourly.value[i]);
    }
  }
  return out;
}

struct GridSeries {
  std::int64_t start = 0;
  std::vector<double> value;
  std::int64_t end() const {
    return start + static_cast<std::int64_t>(value.size()) * kStepSeconds;
  }
};

GridSeries to_grid(const RawSeries& raw) {
  return {raw.ts.front(), raw.value};
}

std::vector<double> trim(const GridSeries& grid, std::int64_t begin, std::int64_t end) {
  const auto first = static_cast<std::size_t>((begin - grid.start) / kStepSeconds);
  const auto count = static_cast<std::size_t>((end - begin) / kStepSeconds);
  return {grid.value.begin() + static_cast<std::ptrdiff_t>(first),
          grid.value.begin() + static_cast<std::ptrdiff_t>(first + count)};
}

}  // namespace

ExogenousSample SeriesSet::at(std::size_t i) const {
  ExogenousSample s;
  s.lmp = lmp.at(i);
  s.solar_power = solar_mw.at(i);
  if (has_demand()) s.demand = demand_mw.at(i);
  return s;
}

SeriesSet SeriesSet::slice(std::size_t begin, std::size_t count) const {
  if (begin + count > size()) throw std::invalid_argument("slice outside series");
  SeriesSet out;
  out.start_time = start_time + static_cast<std::int64_t>(begin) * kStepSeconds;
  out.dt = dt;
  out.lmp.assign(lmp.begin() + static_cast<std::ptrdiff_t>(begin),
                 lmp.begin() + static_cast<std::ptrdiff_t>(begin + count));
  out.solar_mw.assign(solar_mw.begin() + static_cast<std::ptrdiff_t>(begin),
                      solar_mw.begin() + static_cast<std::ptrdiff_t>(begin + count));
  if (has_demand())
    out.demand_mw.assign(demand_mw.begin() + static_cast<std::ptrdiff_t>(begin),
                         demand_mw.begin() + static_cast<std::ptrdiff_t>(begin + count));
  return out;
}

void ScenarioConfig::validate() const {
  if (pv_scale < 0.0) throw std::invalid_argument("pv_scale must be >= 0");
  if ((pv_sizing == PvSizing::Zero) != (pv_scale == 0.0))
    throw std::invalid_argument("pv_sizing zero requires pv_scale 0 and vice versa");
  if (split_train_weeks < 1 || split_test_weeks < 1)
    throw std::invalid_argument("split weeks must be >= 1");
}

double ScenarioConfig::default_scale(PvSizing sizing) {
  switch (sizing) {
    case PvSizing::Zero: return 0.0;
    case PvSizing::Small: return 1.0;
    case PvSizing::Large: return 2.0;
  }
  return 1.0;
}

SeriesSet load_series(const LoadOptions& options) {
  const RawSeries lmp_raw = read_csv(options.lmp_path, "timestamp,lmp_usd_per_mwh");
  if (lmp_raw.ts.empty()) throw SchemaError(options.lmp_path + ": no data rows");
  const GridSeries lmp_grid = to_grid(regularize(lmp_raw, kStepSeconds, options.lmp_path));

  std::int64_t begin = lmp_grid.start;
  std::int64_t end = lmp_grid.end();

  GridSeries solar_grid;
  bool have_solar = false;
  if (!options.solar_path.empty()) {
    const RawSeries raw = read_csv(options.solar_path, "timestamp,power_mw");
    if (!raw.ts.empty()) {
      solar_grid = to_grid(expand_hourly(regularize(raw, kHourSeconds, options.solar_path)));
      if ((solar_grid.start - lmp_grid.start) % kStepSeconds != 0)
        throw AlignmentError(options.solar_path + ": clock offset against the price series");
      begin = std::max(begin, solar_grid.start);
      end = std::min(end, solar_grid.end());
      have_solar = true;
    }
  }

  GridSeries demand_grid;
  bool have_demand = false;
  if (!options.demand_path.empty()) {
    const RawSeries raw = read_csv(options.demand_path, "timestamp,demand_mw");
    if (!raw.ts.empty()) {
      demand_grid = to_grid(expand_hourly(regularize(raw, kHourSeconds, options.demand_path)));
      if ((demand_grid.start - lmp_grid.start) % kStepSeconds != 0)
        throw AlignmentError(options.demand_path + ": clock offset against the price series");
      begin = std::max(begin, demand_grid.start);
      end = std::min(end, demand_grid.end());
      have_demand = true;
    }
  }

  if (end <= begin) throw AlignmentError("series have no overlapping range");

  SeriesSet out;
  out.start_time = begin;
  out.dt = 0.25;
  out.lmp = trim(lmp_grid, begin, end);
  out.solar_mw = have_solar ? trim(solar_grid, begin, end)
                            : std::vector<double>(out.lmp.size(), 0.0);
  if (have_demand) out.demand_mw = trim(demand_grid, begin, end);
  return out;
}

void scale_pv(SeriesSet& series, double factor) {
  if (factor < 0.0) throw std::invalid_argument("pv scale must be >= 0");
  for (double& v : series.solar_mw) v *= factor;
}

SeriesSet scale_pv(SeriesSet series, const ScenarioConfig& config) {
  config.validate();
  scale_pv(series, config.pv_scale);
  return series;
}

SplitResult chronological_split(const SeriesSet& series, int train_weeks, int test_weeks) {
  if (train_weeks < 1 || test_weeks < 1)
    throw std::invalid_argument("split weeks must be >= 1");
  const auto train_steps = static_cast<std::size_t>(train_weeks) * kStepsPerWeek;
  const auto test_steps = static_cast<std::size_t>(test_weeks) * kStepsPerWeek;
  if (series.size() < train_steps + test_steps)
    throw InsufficientDataError("need " + std::to_string(train_steps + test_steps) +
                                " steps for a " + std::to_string(train_weeks) + "+" +
                                std::to_string(test_weeks) + " week split, have " +
                                std::to_string(series.size()));
  return {series.slice(0, train_steps), series.slice(train_steps, test_steps)};
}

SplitResult chronological_split(const SeriesSet& series, const ScenarioConfig& config) {
  return chronological_split(series, config.split_train_weeks, config.split_test_weeks);
}

SeriesSet synthesize(const SynthesisConfig& config) {
  if (config.days < 1) throw std::invalid_argument("days must be >= 1");
  const bool summer = config.profile == SeasonProfile::SummerLike;

  const double base = summer ? 52.0 : 42.0;
  const double amplitude = summer ? 24.0 : 16.0;
  const double noise_sigma = summer ? 6.0 : 2.5;
  const double peak_hour = summer ? 11.0 : 10.0;
  const double weather_lo = summer ? 0.8 : 0.4;
  const double weather_hi = 1.0;
  const double spike_prob = 2.0 / static_cast<double>(kStepsPerWeek);

  // Clear-sky bell sampled at hour starts; its mean fixes the plant peak that
  // delivers the requested all-hours mean output.
  double bell_sum = 0.0;
  for (int h = 0; h < 24; ++h)
    bell_sum += std::max(0.0, std::sin(std::numbers::pi * (h - 6) / 12.0));
  const double bell_mean = bell_sum / 24.0;
  const double peak_mw =
      config.solar_mean_mw / (bell_mean * 0.5 * (weather_lo + weather_hi));

  SeriesSet out;
  out.start_time = parse_timestamp(summer ? "2023-06-01T00:00:00Z" : "2023-01-01T00:00:00Z");
  out.dt = 0.25;
  const std::size_t steps = static_cast<std::size_t>(config.days) * kStepsPerDay;
  out.lmp.reserve(steps);
  out.solar_mw.reserve(steps);
  out.demand_mw.reserve(steps);

  Rng rng(config.seed);
  for (int day = 0; day < config.days; ++day) {
    const double weather = rng.uniform(weather_lo, weather_hi);
    for (int hour = 0; hour < 24; ++hour) {
      double bell = std::sin(std::numbers::pi * (hour - 6) / 12.0);
      if (bell < 1e-9) bell = 0.0;
      const double solar = peak_mw * weather * bell;
      const double demand = std::max(
          0.0, 80.0 + 18.0 * std::exp(-0.5 * std::pow((hour - 8.5) / 2.5, 2)) +
                   26.0 * std::exp(-0.5 * std::pow((hour - 19.0) / 3.0, 2)) +
                   rng.normal(0.0, 2.0));
      for (int quarter = 0; quarter < 4; ++quarter) {
        const double h = hour + 0.25 * quarter;
        double price = base +
                       amplitude * std::sin(2.0 * std::numbers::pi * (h - peak_hour) / 24.0) +
                       rng.normal(0.0, noise_sigma);
        if (summer && rng.uniform() < spike_prob) price += amplitude * rng.uniform(4.0, 8.0);
        out.lmp.push_back(price);
        out.solar_mw.push_back(solar);
        out.demand_mw.push_back(demand);
      }
    }
  }
  return out;
}

std::int64_t parse_timestamp(const std::string& text) {
  const bool zulu = !text.empty() && text.back() == 'Z';
  const std::size_t len = zulu ? text.size() - 1 : text.size();
  unsigned year, month, day, hour, minute, second;
  const bool shape_ok =
      len == 19 && text[4] == '-' && text[7] == '-' && text[10] == 'T' && text[13] == ':' &&
      text[16] == ':' && parse_fixed_uint(text, 0, 4, year) && parse_fixed_uint(text, 5, 2, month) &&
      parse_fixed_uint(text, 8, 2, day) && parse_fixed_uint(text, 11, 2, hour) &&
      parse_fixed_uint(text, 14, 2, minute) && parse_fixed_uint(text, 17, 2, second);
  if (!shape_ok) throw SchemaError("bad timestamp '" + text + "'");
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) || hour > 23 ||
      minute > 59 || second > 59)
    throw SchemaError("timestamp field out of range in '" + text + "'");
  return days_from_civil(year, month, day) * kDaySeconds + hour * 3600 + minute * 60 + second;
}

std::string format_timestamp(std::int64_t unix_seconds) {
  std::int64_t days = unix_seconds / kDaySeconds;
  std::int64_t rem = unix_seconds % kDaySeconds;
  if (rem < 0) {
    rem += kDaySeconds;
    --days;
  }
  std::int64_t year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<long long>(year), month, day, static_cast<int>(rem / 3600),
                static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return buf;
}

namespace {

void write_column_csv(const std::string& path, const std::string& header,
                      const SeriesSet& series, const std::vector<double>& column,
                      std::size_t stride) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << header << '\n';
  for (std::size_t i = 0; i < column.size(); i += stride) {
    out << format_timestamp(series.start_time + static_cast<std::int64_t>(i) * kStepSeconds)
        << ',' << format_double(column[i]) << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace

void write_lmp_csv(const std::string& path, const SeriesSet& series) {
  write_column_csv(path, "timestamp,lmp_usd_per_mwh", series, series.lmp, 1);
}

void write_solar_csv_hourly(const std::string& path, const SeriesSet& series) {
  write_column_csv(path, "timestamp,power_mw", series, series.solar_mw, 4);
}

void write_demand_csv_hourly(const std::string& path, const SeriesSet& series) {
  if (!series.has_demand()) throw std::invalid_argument("series has no demand column");
  write_column_csv(path, "timestamp,demand_mw", series, series.demand_mw, 4);
}

}  // namespace bess
