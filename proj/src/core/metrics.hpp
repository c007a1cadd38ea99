#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/policy.hpp"

namespace bess {

// Replicated evaluations of one method, one run per seed.
struct SeedEnsemble {
  std::vector<EvaluationRun> runs;
  std::vector<std::uint64_t> seeds;
};

std::vector<double> cumulative_profit(const EvaluationRun& run);

struct MeanCi {
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
};

// Pointwise mean with a z-score confidence band (sample standard deviation,
// n-1). A single curve collapses to a zero-width band.
MeanCi mean_ci(const std::vector<std::vector<double>>& curves, double z = 1.96);

struct ProfitDecomposition {
  double solar_sell = 0.0;     // plant output sold as it arrived
  double solar_battery = 0.0;  // discharge revenue carried by solar-charged energy
  double grid_battery = 0.0;   // discharge revenue carried by grid-charged energy, net of purchases
  double total() const { return solar_sell + solar_battery + grid_battery; }
};

// Splits realized profit by energy provenance. Discharge revenue divides
// between the solar and grid buckets by the provenance shares of the battery
// contents entering the step; purchase costs land on grid_battery. The three
// parts always sum to the run's total profit.
ProfitDecomposition decompose_profit(const EvaluationRun& run);

struct DiurnalProfile {
  std::array<double, 24> solar_mwh{};
  std::array<double, 24> grid_mwh{};
};

// Mean stored energy by provenance per hour of day, averaged across runs and
// days. The post-step state is attributed to the hour in which the step began.
DiurnalProfile diurnal_soc_profile(const SeedEnsemble& ensemble);

// (energy out - energy in) / dt per step, in MW; positive injects to the grid.
std::vector<double> net_load_series(const EvaluationRun& run);

struct DayPeriodStats {
  std::string label;
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
};

struct CrossCorrelation {
  std::vector<double> contributions;       // net_load_t * (demand_t - mean demand)
  std::array<DayPeriodStats, 4> periods;   // 21-06 (wraps), 06-12, 12-18, 18-21
};

// Pointwise product of net load with mean-centered demand, plus distribution
// summaries over the four day periods. start_time places sample 0 on the
//24-hour clock.
CrossCorrelation cross_correlation(std::span<const double> net_load,
                                   std::span<const double> demand,
                                   std::int64_t start_time = 0);

}  // namespace bess
