#include "core/battery.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace bess {

void BatteryParams::validate() const {
  if (!(e_max > 0.0)) throw std::invalid_argument("e_max must be positive");
  if (!(charge_rate > 0.0)) throw std::invalid_argument("charge_rate must be positive");
  if (!(discharge_rate > 0.0)) throw std::invalid_argument("discharge_rate must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0, 1]");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in [0, 1)");
  if (!(self_discharge_soc_threshold >= 0.0 && self_discharge_soc_threshold <= 1.0))
    throw std::invalid_argument("self_discharge_soc_threshold must be in [0, 1]");
}

std::pair<BatteryState, double> apply_self_discharge(const BatteryState& state,
                                                     const BatteryParams& params) {
  const double total = state.total();
  if (total >= params.self_discharge_soc_threshold * params.e_max) {
    const double keep = 1.0 - params.beta;
    BatteryState next{state.e_solar * keep, state.e_grid * keep};
    return {next, total - next.total()};
  }
  return {state, 0.0};
}

StepOutcome step(const BatteryState& state, Action action, const ExogenousSample& sample,
                 const BatteryParams& params) {
  auto [decayed, loss] = apply_self_discharge(state, params);
  const double pre_total = decayed.total();
  const double solar_energy = sample.solar_power * params.dt;  // MWh offered this step

  StepOutcome out;
  out.flows.self_discharge_loss = loss;

  switch (action) {
    case Action::Buy: {
      const double attempted = params.charge_quantum();
      const double next_total = std::min(params.e_max, pre_total + attempted);
      const double stored = next_total - pre_total;
      const double plug_input = stored / params.eta;
      // Solar feeds the charger first, up to the charge rate; grid supplies the
      // rest. A projection clip scales both contributions pro rata.
      const double clip = attempted > 0.0 ? stored / attempted : 0.0;
      const double solar_input = std::min(sample.solar_power, params.charge_rate) * params.dt * clip;
      out.next_state.e_solar = decayed.e_solar + params.eta * solar_input;
      out.next_state.e_grid = std::max(0.0, next_total - out.next_state.e_solar);
      out.reward = ((pre_total - next_total) / params.eta + solar_energy) * sample.lmp;
      out.flows.grid_buy_energy = std::max(0.0, plug_input - solar_input);
      out.flows.solar_stored_energy = solar_input;
      out.flows.solar_sold_energy = std::max(0.0, solar_energy - solar_input);
      break;
    }
    case Action::Sell: {
      const double attempted = params.discharge_quantum();
      const double next_total = std::max(0.0, pre_total - attempted);
      const double discharged = pre_total - next_total;
      // Discharge draws from both stocks proportionally to their shares.
      const double solar_share = pre_total > 0.0 ? decayed.e_solar / pre_total : 0.0;
      out.next_state.e_solar = std::max(0.0, decayed.e_solar - solar_share * discharged);
      out.next_state.e_grid = std::max(0.0, next_total - out.next_state.e_solar);
      out.reward = (params.eta * (pre_total - next_total) + solar_energy) * sample.lmp;
      out.flows.grid_sell_energy = params.eta * discharged;
      out.flows.battery_discharge_energy = discharged;
      out.flows.solar_sold_energy = solar_energy;
      break;
    }
    case Action::Null: {
      out.next_state = decayed;
      out.reward = solar_energy * sample.lmp;
      out.flows.solar_sold_energy = solar_energy;
      break;
    }
  }
  return out;
}

Observation make_observation(std::span<const double> lmp_history,
                             std::span<const double> solar_history, std::size_t t,
                             const BatteryState& state) {
  if (lmp_history.size() != solar_history.size())
    throw std::invalid_argument("lmp and solar histories differ in length");
  if (t >= lmp_history.size()) throw std::invalid_argument("step index outside history");

  Observation obs;
  obs.soc = state.total();
  for (int k = 0; k < kWindowSteps; ++k) {
    const auto lag = static_cast<std::ptrdiff_t>(t) - (kWindowSteps - 1 - k);
    const std::size_t j = lag < 0 ? 0 : static_cast<std::size_t>(lag);
    obs.lmp[static_cast<std::size_t>(k)] = lmp_history[j];
    obs.solar[static_cast<std::size_t>(k)] = solar_history[j];
  }
  return obs;
}

Observation make_observation(std::span<const ExogenousSample> history, std::size_t t,
                             const BatteryState& state) {
  std::vector<double> lmp(history.size()), solar(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    lmp[i] = history[i].lmp;
    solar[i] = history[i].solar_power;
  }
  return make_observation(lmp, solar, t, state);
}

}  // namespace bess
