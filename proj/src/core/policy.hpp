#pragma once

#include <cstdint>
#include <vector>

#include "core/series.hpp"
#include "core/types.hpp"

namespace bess {

// A controller. decide() must be deterministic given internal state and the
// observation; stochastic policies own a seeded generator. reset() returns the
// policy to its start-of-episode state.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action decide(const Observation& observation) = 0;
  virtual void reset() {}
};

// One evaluated episode. Traces are per step; soc_trace holds the state after
// each step. The exogenous columns are carried along so reports can be built
// from the run alone.
struct EvaluationRun {
  std::vector<Action> actions;
  std::vector<double> rewards;
  std::vector<BatteryState> soc_trace;
  std::vector<FlowLedger> flow_trace;
  double total_profit = 0.0;

  BatteryState initial_state;
  std::int64_t start_time = 0;
  double dt = 0.25;
  std::vector<double> lmp;
  std::vector<double> solar_mw;
  std::vector<double> demand_mw;

  std::size_t size() const { return actions.size(); }
};

EvaluationRun evaluate_policy(Policy& policy, const SeriesSet& series,
                              const BatteryParams& params, const BatteryState& initial);

// Replays a precomputed action sequence, one per step.
class PlaybackPolicy : public Policy {
 public:
  explicit PlaybackPolicy(std::vector<Action> actions) : actions_(std::move(actions)) {}

  Action decide(const Observation&) override;
  void reset() override { next_ = 0; }

 private:
  std::vector<Action> actions_;
  std::size_t next_ = 0;
};

}  // namespace bess
