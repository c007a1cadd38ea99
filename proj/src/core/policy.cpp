#include "core/policy.hpp"

#include <stdexcept>

#include "core/battery.hpp"
#include "core/errors.hpp"

namespace bess {

EvaluationRun evaluate_policy(Policy& policy, const SeriesSet& series,
                              const BatteryParams& params, const BatteryState& initial) {
  if (series.size() == 0) throw InsufficientDataError("cannot evaluate on an empty series");
  params.validate();

  policy.reset();
  EvaluationRun run;
  const std::size_t n = series.size();
  run.actions.reserve(n);
  run.rewards.reserve(n);
  run.soc_trace.reserve(n);
  run.flow_trace.reserve(n);
  run.initial_state = initial;
  run.start_time = series.start_time;
  run.dt = series.dt;
  run.lmp = series.lmp;
  run.solar_mw = series.solar_mw;
  run.demand_mw = series.demand_mw;

  BatteryState state = initial;
  for (std::size_t t = 0; t < n; ++t) {
    const Observation obs = make_observation(series.lmp, series.solar_mw, t, state);
    const Action action = policy.decide(obs);
    const StepOutcome outcome = step(state, action, series.at(t), params);
    state = outcome.next_state;
    run.actions.push_back(action);
    run.rewards.push_back(outcome.reward);
    run.soc_trace.push_back(state);
    run.flow_trace.push_back(outcome.flows);
    run.total_profit += outcome.reward;
  }
  return run;
}

Action PlaybackPolicy::decide(const Observation&) {
  if (next_ >= actions_.size()) throw std::out_of_range("playback ran past its action list");
  return actions_[next_++];
}

}  // namespace bess
