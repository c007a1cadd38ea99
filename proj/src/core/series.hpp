#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace bess {

// Aligned exogenous inputs on a fixed 15-minute grid. Columns share one clock:
// sample i covers [start_time + i*dt, start_time + (i+1)*dt).
struct SeriesSet {
  std::int64_t start_time = 0;  // unix seconds, UTC
  double dt = 0.25;             // hours per step
  std::vector<double> lmp;      // $/MWh
  std::vector<double> solar_mw; // plant output, MW
  std::vector<double> demand_mw;  // empty when no demand file was given

  std::size_t size() const { return lmp.size(); }
  bool has_demand() const { return !demand_mw.empty(); }
  ExogenousSample at(std::size_t i) const;
  SeriesSet slice(std::size_t begin, std::size_t count) const;
};

enum class SeasonProfile { WinterLike, SummerLike };
enum class PvSizing { Zero, Small, Large };

struct ScenarioConfig {
  std::string node_label;
  SeasonProfile season = SeasonProfile::WinterLike;
  PvSizing pv_sizing = PvSizing::Small;
  double pv_scale = 1.0;
  int split_train_weeks = 12;
  int split_test_weeks = 1;

  void validate() const;
  static double default_scale(PvSizing sizing);
};

struct LoadOptions {
  std::string lmp_path;
  std::string solar_path;   // empty path or header-only file: all-zero plant
  std::string demand_path;  // optional column
};

SeriesSet load_series(const LoadOptions& options);

// Multiplies the solar column pointwise.
void scale_pv(SeriesSet& series, double factor);
SeriesSet scale_pv(SeriesSet series, const ScenarioConfig& config);

struct SplitResult {
  SeriesSet train;
  SeriesSet test;
};

// Train takes the first train_weeks*672 samples, test the next test_weeks*672.
// Throws InsufficientDataError when the series is shorter than both together.
SplitResult chronological_split(const SeriesSet& series, int train_weeks, int test_weeks);
SplitResult chronological_split(const SeriesSet& series, const ScenarioConfig& config);

struct SynthesisConfig {
  SeasonProfile profile = SeasonProfile::WinterLike;
  int days = 91;
  std::uint64_t seed = 0;
  double solar_mean_mw = 9.1;  // all-hours mean plant output to calibrate to
};

// Deterministic synthetic scenario: diurnal price sinusoid plus noise (sparse
// spikes in the summer profile), an hourly clear-sky solar bell shaped by a
// per-day weather factor, and an hourly double-peak demand curve.
SeriesSet synthesize(const SynthesisConfig& config);

// "YYYY-MM-DDTHH:MM:SS[Z]" <-> unix seconds, UTC only.
std::int64_t parse_timestamp(const std::string& text);
std::string format_timestamp(std::int64_t unix_seconds);

// CSV writers used by the data generator. LMP writes every 15-minute row;
// solar and demand write the sample at each hour boundary.
void write_lmp_csv(const std::string& path, const SeriesSet& series);
void write_solar_csv_hourly(const std::string& path, const SeriesSet& series);
void write_demand_csv_hourly(const std::string& path, const SeriesSet& series);

}  // namespace bess
