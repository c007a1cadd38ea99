#pragma once

#include <memory>
#include <span>
#include <vector>

#include "core/dp.hpp"
#include "core/policy.hpp"

namespace bess {

class Forecaster {
 public:
  virtual ~Forecaster() = default;
  // Returns exactly `horizon` predicted prices for the steps following the
  // given history.
  virtual std::vector<double> predict(std::span<const double> history, std::size_t horizon) = 0;
};

// Prediction for step t+k repeats the observation from the same quarter-hour
// one day earlier, extended recursively past 24 hours.
std::vector<double> seasonal_naive_forecast(std::span<const double> history,
                                            std::size_t horizon);

class SeasonalNaiveForecaster : public Forecaster {
 public:
  std::vector<double> predict(std::span<const double> history, std::size_t horizon) override {
    return seasonal_naive_forecast(history, horizon);
  }
};

// Reads future values straight from a fixed timeline, indexed by how much
// history the caller has accumulated; zero past the end. The timeline must be
// the concatenation of whatever primed the policy and the evaluation series.
class GroundTruthForecaster : public Forecaster {
 public:
  explicit GroundTruthForecaster(std::vector<double> timeline)
      : timeline_(std::move(timeline)) {}

  std::vector<double> predict(std::span<const double> history, std::size_t horizon) override;

 private:
  std::vector<double> timeline_;
};

struct RhcConfig {
  int horizon_steps = 96;  // 24 h lookahead
  int replan_every = 1;
  double soc_grid = 0.25;  // MWh, forwarded to the planner

  void validate() const;
};

// At each replan point: assembles a price window (current price plus the
// forecaster's output), a solar window persisting the latest observed daily
// profile, plans over it with the exact-mode planner from the observed SoC,
// and follows the plan until the next replan. decide() must be called exactly
// once per step; reset() drops everything accumulated since prime().
class RhcPolicy : public Policy {
 public:
  RhcPolicy(std::shared_ptr<Forecaster> forecaster, RhcConfig config, BatteryParams params);

  // Installs historical context preceding the evaluation window (typically the
  // tail of the training split) and resets.
  void prime(std::span<const double> lmp, std::span<const double> solar);

  Action decide(const Observation& observation) override;
  void reset() override;

 private:
  std::shared_ptr<Forecaster> forecaster_;
  RhcConfig config_;
  BatteryParams params_;
  std::vector<double> lmp_primer_, solar_primer_;
  std::vector<double> lmp_hist_, solar_hist_;
  std::vector<Action> pending_;
  std::size_t pending_used_ = 0;
};

}  // namespace bess
