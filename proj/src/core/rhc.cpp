#include "core/rhc.hpp"

#include <algorithm>
#include <stdexcept>

#include "core/errors.hpp"

namespace bess {

std::vector<double> seasonal_naive_forecast(std::span<const double> history,
                                            std::size_t horizon) {
  if (history.size() < static_cast<std::size_t>(kStepsPerDay))
    throw InsufficientHistoryError("seasonal forecast needs at least one day of history");
  std::vector<double> out;
  out.reserve(horizon);
  const std::size_t n = history.size();
  for (std::size_t i = 0; i < horizon; ++i) {
    const std::size_t source = n + i - kStepsPerDay;
    out.push_back(source < n ? history[source] : out[source - n]);
  }
  return out;
}

std::vector<double> GroundTruthForecaster::predict(std::span<const double> history,
                                                   std::size_t horizon) {
  std::vector<double> out(horizon, 0.0);
  for (std::size_t i = 0; i < horizon; ++i) {
    const std::size_t t = history.size() + i;
    if (t < timeline_.size()) out[i] = timeline_[t];
  }
  return out;
}

void RhcConfig::validate() const {
  if (horizon_steps < 1) throw std::invalid_argument("horizon_steps must be >= 1");
  if (replan_every < 1) throw std::invalid_argument("replan_every must be >= 1");
  if (!(soc_grid > 0.0)) throw std::invalid_argument("soc_grid must be positive");
}

RhcPolicy::RhcPolicy(std::shared_ptr<Forecaster> forecaster, RhcConfig config,
                     BatteryParams params)
    : forecaster_(std::move(forecaster)), config_(config), params_(params) {
  if (!forecaster_) throw std::invalid_argument("forecaster is required");
  config_.validate();
  params_.validate();
}

void RhcPolicy::prime(std::span<const double> lmp, std::span<const double> solar) {
  if (lmp.size() != solar.size())
    throw std::invalid_argument("primer columns differ in length");
  lmp_primer_.assign(lmp.begin(), lmp.end());
  solar_primer_.assign(solar.begin(), solar.end());
  reset();
}

void RhcPolicy::reset() {
  lmp_hist_ = lmp_primer_;
  solar_hist_ = solar_primer_;
  pending_.clear();
  pending_used_ = 0;
}

Action RhcPolicy::decide(const Observation& observation) {
  lmp_hist_.push_back(observation.lmp.back());
  solar_hist_.push_back(observation.solar.back());

  const auto consumed_limit =
      std::min(pending_.size(), static_cast<std::size_t>(config_.replan_every));
  if (pending_used_ >= consumed_limit) {
    const auto horizon = static_cast<std::size_t>(config_.horizon_steps);
    SeriesSet window;
    window.dt = params_.dt;
    window.lmp.reserve(horizon);
    window.solar_mw.reserve(horizon);
    window.lmp.push_back(lmp_hist_.back());
    window.solar_mw.push_back(solar_hist_.back());
    const std::vector<double> price_fc = forecaster_->predict(lmp_hist_, horizon - 1);
    window.lmp.insert(window.lmp.end(), price_fc.begin(), price_fc.end());
    // Solar outlook: yesterday's observed profile, repeated.
    const std::size_t n = solar_hist_.size();
    for (std::size_t j = 1; j < horizon; ++j) {
      const std::size_t back = static_cast<std::size_t>(kStepsPerDay) - (j - 1) % kStepsPerDay;
      window.solar_mw.push_back(back <= n ? solar_hist_[n - back] : 0.0);
    }

    const OracleConfig oracle_config{OracleMode::Exact, config_.soc_grid};
    DpPlan plan =
        dp_plan(window, params_, oracle_config, BatteryState{0.0, observation.soc});
    pending_ = std::move(plan.actions);
    pending_used_ = 0;
  }
  return pending_[pending_used_++];
}

}  // namespace bess
