#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bess {
namespace {

int hour_of_day(std::int64_t start_time, std::size_t step) {
  const std::int64_t t = start_time + static_cast<std::int64_t>(step) * 900;
  const std::int64_t sec = ((t % 86400) + 86400) % 86400;
  return static_cast<int>(sec / 3600);
}

double quantile(std::vector<double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

std::vector<double> cumulative_profit(const EvaluationRun& run) {
  std::vector<double> out;
  out.reserve(run.rewards.size());
  double acc = 0.0;
  for (double r : run.rewards) out.push_back(acc += r);
  return out;
}

MeanCi mean_ci(const std::vector<std::vector<double>>& curves, double z) {
  if (curves.empty()) throw std::invalid_argument("need at least one curve");
  const std::size_t len = curves.front().size();
  for (const auto& c : curves)
    if (c.size() != len) throw std::invalid_argument("curves differ in length");

  const auto n = static_cast<double>(curves.size());
  MeanCi out;
  out.mean.resize(len);
  out.lower.resize(len);
  out.upper.resize(len);
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c[t];
    const double mean = sum / n;
    double half = 0.0;
    if (curves.size() > 1) {
      double ss = 0.0;
      for (const auto& c : curves) ss += (c[t] - mean) * (c[t] - mean);
      half = z * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    out.mean[t] = mean;
    out.lower[t] = mean - half;
    out.upper[t] = mean + half;
  }
  return out;
}

ProfitDecomposition decompose_profit(const EvaluationRun& run) {
  if (run.flow_trace.size() != run.size() || run.lmp.size() != run.size())
    throw std::invalid_argument("run is missing flow or price traces");

  ProfitDecomposition out;
  for (std::size_t t = 0; t < run.size(); ++t) {
    const BatteryState& prior = t == 0 ? run.initial_state : run.soc_trace[t - 1];
    const double solar_share = prior.total() > 0.0 ? prior.e_solar / prior.total() : 0.0;
    const FlowLedger& flows = run.flow_trace[t];
    const double price = run.lmp[t];
    out.solar_sell += flows.solar_sold_energy * price;
    const double sale = flows.grid_sell_energy * price;
    out.solar_battery += solar_share * sale;
    out.grid_battery += (1.0 - solar_share) * sale - flows.grid_buy_energy * price;
  }
  return out;
}

DiurnalProfile diurnal_soc_profile(const SeedEnsemble& ensemble) {
  if (ensemble.runs.empty()) throw std::invalid_argument("empty ensemble");
  const std::size_t len = ensemble.runs.front().size();
  for (const auto& run : ensemble.runs)
    if (run.size() != len) throw std::invalid_argument("runs differ in length");
  if (len < static_cast<std::size_t>(kStepsPerDay))
    throw std::invalid_argument("need at least one full day per run");

  DiurnalProfile out;
  std::array<double, 24> count{};
  for (const auto& run : ensemble.runs) {
    for (std::size_t t = 0; t < len; ++t) {
      const int h = hour_of_day(run.start_time, t);
      out.solar_mwh[h] += run.soc_trace[t].e_solar;
      out.grid_mwh[h] += run.soc_trace[t].e_grid;
      count[h] += 1.0;
    }
  }
  for (int h = 0; h < 24; ++h) {
    if (count[h] > 0.0) {
      out.solar_mwh[h] /= count[h];
      out.grid_mwh[h] /= count[h];
    }
  }
  return out;
}

std::vector<double> net_load_series(const EvaluationRun& run) {
  if (run.flow_trace.size() != run.size())
    throw std::invalid_argument("run is missing flow traces");
  std::vector<double> out;
  out.reserve(run.size());
  for (const FlowLedger& flows : run.flow_trace)
    out.push_back((flows.grid_sell_energy + flows.solar_sold_energy - flows.grid_buy_energy) /
                  run.dt);
  return out;
}

CrossCorrelation cross_correlation(std::span<const double> net_load,
                                   std::span<const double> demand,
                                   std::int64_t start_time) {
  if (net_load.size() != demand.size())
    throw std::invalid_argument("net load and demand differ in length");
  if (net_load.empty()) throw std::invalid_argument("empty input");

  double demand_mean = 0.0;
  for (double d : demand) demand_mean += d;
  demand_mean /= static_cast<double>(demand.size());

  CrossCorrelation out;
  out.contributions.reserve(net_load.size());
  std::array<std::vector<double>, 4> by_period;
  for (std::size_t t = 0; t < net_load.size(); ++t) {
    const double c = net_load[t] * (demand[t] - demand_mean);
    out.contributions.push_back(c);
    const int h = hour_of_day(start_time, t);
    const int period = (h >= 21 || h < 6) ? 0 : h < 12 ? 1 : h < 18 ? 2 : 3;
    by_period[period].push_back(c);
  }

  static const char* kLabels[4] = {"21-06", "06-12", "12-18", "18-21"};
  for (int p = 0; p < 4; ++p) {
    DayPeriodStats& stats = out.periods[p];
    stats.label = kLabels[p];
    std::vector<double>& values = by_period[p];
    stats.count = values.size();
    if (values.empty()) {
      stats.mean = stats.min = stats.max = stats.q25 = stats.q50 = stats.q75 =
          std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    stats.min = values.front();
    stats.max = values.back();
    stats.q25 = quantile(values, 0.25);
    stats.q50 = quantile(values, 0.50);
    stats.q75 = quantile(values, 0.75);
  }
  return out;
}

}  // namespace bess
