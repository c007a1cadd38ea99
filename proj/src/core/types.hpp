#pragma once

#include <array>
#include <cstddef>
#include <optional>

namespace bess {

// Observation windows hold the current sample plus 16 quarter-hour lags (4 hours).
inline constexpr int kWindowSteps = 17;
// Flattened observation layout: [soc, lmp window oldest-first, solar window oldest-first].
inline constexpr int kObservationDim = 2 * kWindowSteps + 1;

inline constexpr int kStepsPerDay = 96;
inline constexpr int kStepsPerWeek = 7 * kStepsPerDay;

// Index map used by the Q-network output head.
enum class Action : int { Buy = 0, Sell = 1, Null = 2 };

// Canonical tie-break order: Buy before Null before Sell. All argmax-style
// selections (DP backups, greedy action choice) walk actions in this order and
// keep only strict improvements.
inline constexpr std::array<Action, 3> kActionTieOrder{Action::Buy, Action::Null, Action::Sell};

constexpr std::size_t action_index(Action a) { return static_cast<std::size_t>(a); }

// Argmax over per-action values indexed by action_index, ties resolved by
// kActionTieOrder (strict improvements only).
constexpr Action argmax_action(const std::array<double, 3>& values) {
  Action best = kActionTieOrder.front();
  for (std::size_t i = 1; i < kActionTieOrder.size(); ++i) {
    const Action candidate = kActionTieOrder[i];
    if (values[action_index(candidate)] > values[action_index(best)]) best = candidate;
  }
  return best;
}

constexpr const char* to_string(Action a) {
  switch (a) {
    case Action::Buy: return "buy";
    case Action::Sell: return "sell";
    case Action::Null: return "null";
  }
  return "?";
}

struct BatteryParams {
  double e_max = 400.0;          // energy capacity, MWh
  double charge_rate = 100.0;    // MW
  double discharge_rate = 100.0; // MW
  double dt = 0.25;              // time step, hours
  double eta = 0.93;             // (dis)charge efficiency
  double beta = 0.1 / 96.0;      // per-step self-discharge fraction above the SoC threshold
  double self_discharge_soc_threshold = 0.9;  // fraction of e_max

  // Energy added to the stock by one full-rate Buy step.
  double charge_quantum() const { return charge_rate * dt * eta; }
  // Energy removed from the stock by one full-rate Sell step.
  double discharge_quantum() const { return discharge_rate * dt; }

  void validate() const;  // throws std::invalid_argument
};

// State of charge partitioned by energy provenance.
struct BatteryState {
  double e_solar = 0.0;  // MWh charged from solar
  double e_grid = 0.0;   // MWh charged from the grid

  double total() const { return e_solar + e_grid; }
};

struct ExogenousSample {
  double lmp = 0.0;              // $/MWh, may be negative
  double solar_power = 0.0;      // MW
  std::optional<double> demand;  // MW, evaluation-only data
};

// Per-step energy movements, all in MWh and non-negative.
struct FlowLedger {
  double grid_buy_energy = 0.0;          // bought from the grid, measured at the plug
  double grid_sell_energy = 0.0;         // delivered to the grid from the battery
  double solar_sold_energy = 0.0;        // solar sold directly
  double solar_stored_energy = 0.0;      // solar routed into the charger, measured at the plug
  double battery_discharge_energy = 0.0; // drawn from the battery stock
  double self_discharge_loss = 0.0;      // lost to self-discharge
};

struct StepOutcome {
  BatteryState next_state;
  double reward = 0.0;  // $
  FlowLedger flows;
};

struct Observation {
  double soc = 0.0;                           // MWh
  std::array<double, kWindowSteps> lmp{};     // $/MWh, oldest first
  std::array<double, kWindowSteps> solar{};   // MW, oldest first

  // Writes the flattened 35-dim vector: soc, then lmp window, then solar window.
  void flatten(double* out) const {
    out[0] = soc;
    for (int i = 0; i < kWindowSteps; ++i) {
      out[1 + i] = lmp[static_cast<std::size_t>(i)];
      out[1 + kWindowSteps + i] = solar[static_cast<std::size_t>(i)];
    }
  }
};

}  // namespace bess
