#pragma once

#include <vector>

#include "core/policy.hpp"

namespace bess {

enum class OracleMode { Exact, Relaxed };

struct OracleConfig {
  OracleMode mode = OracleMode::Exact;
  double soc_grid = 0.25;  // MWh per lattice node
};

struct DpPlan {
  std::vector<Action> actions;
  double value_at_initial = 0.0;  // planning-kernel value at the initial SoC
};

// Backward induction over (step, SoC lattice) with value interpolation between
// nodes, then a forward pass that re-evaluates the argmax from the realized
// (possibly off-lattice) state at every step. Exact mode plans with the true
// kernel; relaxed mode plans with eta=1 and beta=0 and leaves the mismatch to
// show up when the plan is executed. Ties break by the fixed action order.
DpPlan dp_plan(const SeriesSet& series, const BatteryParams& params, const OracleConfig& config,
               const BatteryState& initial);

// Plans, then executes the planned actions under the true kernel.
EvaluationRun dp_oracle(const SeriesSet& series, const BatteryParams& params,
                        const OracleConfig& config, const BatteryState& initial);

}  // namespace bess
