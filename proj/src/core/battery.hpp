#pragma once

#include <span>
#include <utility>

#include "core/types.hpp"

namespace bess {

// Multiplicative self-discharge above the SoC threshold: both provenance
// components scale by (1 - beta), so the solar/grid split is preserved.
// Returns the decayed state and the energy lost.
std::pair<BatteryState, double> apply_self_discharge(const BatteryState& state,
                                                     const BatteryParams& params);

// One transition of the battery/market kernel. Self-discharge applies first,
// then the action's energy transfer with projection onto [0, e_max]. Rewards
// use the actual (post-projection) energy deltas.
StepOutcome step(const BatteryState& state, Action action, const ExogenousSample& sample,
                 const BatteryParams& params);

// Observation at step t: SoC plus the price and solar windows covering
// t-16..t. Entries before the start of the history repeat the first sample.
Observation make_observation(std::span<const double> lmp_history,
                             std::span<const double> solar_history, std::size_t t,
                             const BatteryState& state);

Observation make_observation(std::span<const ExogenousSample> history, std::size_t t,
                             const BatteryState& state);

}  // namespace bess
