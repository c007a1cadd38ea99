#include "core/dp.hpp"

#include <cmath>
#include <string>

#include "core/battery.hpp"
#include "core/errors.hpp"

namespace bess {
namespace {

bool divides(double quantum, double grid) {
  const double ratio = quantum / grid;
  return std::abs(ratio - std::round(ratio)) < 1e-9;
}

// Reward and next total SoC; provenance never affects either, so the lattice
// can live over totals alone.
std::pair<double, double> step_total(double total, Action action, const ExogenousSample& sample,
                                     const BatteryParams& params) {
  const StepOutcome outcome = step(BatteryState{0.0, total}, action, sample, params);
  return {outcome.next_state.total(), outcome.reward};
}

double interp(const std::vector<double>& row, double soc, double grid) {
  const double x = soc / grid;
  const auto k = static_cast<std::size_t>(x);
  if (k + 1 >= row.size()) return row.back();
  const double frac = x - static_cast<double>(k);
  return row[k] * (1.0 - frac) + row[k + 1] * frac;
}

}  // namespace

DpPlan dp_plan(const SeriesSet& series, const BatteryParams& params, const OracleConfig& config,
               const BatteryState& initial) {
  params.validate();
  if (series.size() == 0) throw InsufficientDataError("cannot plan over an empty series");
  if (!(config.soc_grid > 0.0)) throw LatticeError("soc_grid must be positive");

  BatteryParams plan_params = params;
  if (config.mode == OracleMode::Relaxed) {
    plan_params.eta = 1.0;
    plan_params.beta = 0.0;
  }
  if (!divides(plan_params.charge_quantum(), config.soc_grid) ||
      !divides(plan_params.discharge_quantum(), config.soc_grid) ||
      !divides(plan_params.e_max, config.soc_grid))
    throw LatticeError("soc_grid " + std::to_string(config.soc_grid) +
                       " does not divide the per-step energy quanta");

  const double grid = config.soc_grid;
  const auto nodes = static_cast<std::size_t>(std::llround(plan_params.e_max / grid)) + 1;
  const std::size_t horizon = series.size();

  // value[t][k]: best achievable reward over steps t..end from SoC k*grid.
  std::vector<std::vector<double>> value(horizon + 1, std::vector<double>(nodes, 0.0));
  for (std::size_t t = horizon; t-- > 0;) {
    const ExogenousSample sample = series.at(t);
    for (std::size_t k = 0; k < nodes; ++k) {
      const double soc = static_cast<double>(k) * grid;
      double best = 0.0;
      bool first = true;
      for (const Action action : kActionTieOrder) {
        const auto [next_soc, reward] = step_total(soc, action, sample, plan_params);
        const double q = reward + interp(value[t + 1], next_soc, grid);
        if (first || q > best) {
          best = q;
          first = false;
        }
      }
      value[t][k] = best;
    }
  }

  DpPlan plan;
  plan.value_at_initial = interp(value[0], initial.total(), grid);
  plan.actions.reserve(horizon);
  double soc = initial.total();
  for (std::size_t t = 0; t < horizon; ++t) {
    const ExogenousSample sample = series.at(t);
    Action best_action = kActionTieOrder.front();
    double best_q = 0.0;
    double best_next = soc;
    bool first = true;
    for (const Action action : kActionTieOrder) {
      const auto [next_soc, reward] = step_total(soc, action, sample, plan_params);
      const double q = reward + interp(value[t + 1], next_soc, grid);
      if (first || q > best_q) {
        best_q = q;
        best_action = action;
        best_next = next_soc;
        first = false;
      }
    }
    plan.actions.push_back(best_action);
    soc = best_next;
  }
  return plan;
}

EvaluationRun dp_oracle(const SeriesSet& series, const BatteryParams& params,
                        const OracleConfig& config, const BatteryState& initial) {
  const DpPlan plan = dp_plan(series, params, config, initial);
  PlaybackPolicy playback(plan.actions);
  return evaluate_policy(playback, series, params, initial);
}

}  // namespace bess
