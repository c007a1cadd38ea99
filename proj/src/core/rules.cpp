#include "core/rules.hpp"

#include <algorithm>
#include <stdexcept>

#include "core/rng.hpp"

namespace bess {

Action rules_decide(double lmp, const Thresholds& thresholds) {
  if (lmp <= thresholds.buy_below) return Action::Buy;
  if (lmp >= thresholds.sell_above) return Action::Sell;
  return Action::Null;
}

Action RulesPolicy::decide(const Observation& observation) {
  return rules_decide(observation.lmp.back(), thresholds_);
}

void GaConfig::validate() const {
  if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
  if (generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (tournament_size < 1 || tournament_size > population_size)
    throw std::invalid_argument("tournament_size must be in [1, population_size]");
  if (crossover_rate < 0.0 || crossover_rate > 1.0)
    throw std::invalid_argument("crossover_rate must be in [0, 1]");
  if (mutation_rate < 0.0 || mutation_rate > 1.0)
    throw std::invalid_argument("mutation_rate must be in [0, 1]");
  if (mutation_sigma < 0.0) throw std::invalid_argument("mutation_sigma must be >= 0");
  if (!(price_lo < price_hi)) throw std::invalid_argument("price bounds must satisfy lo < hi");
}

GaResult ga_tune(const SeriesSet& train, const BatteryParams& params, const GaConfig& config) {
  config.validate();
  Rng rng(config.seed);

  const auto fitness_of = [&](const Thresholds& th) {
    RulesPolicy policy(th);
    return evaluate_policy(policy, train, params, BatteryState{}).total_profit;
  };
  const auto clip = [&](double v) { return std::clamp(v, config.price_lo, config.price_hi); };

  const auto n = static_cast<std::size_t>(config.population_size);
  std::vector<Thresholds> population(n);
  for (auto& th : population) {
    th.buy_below = rng.uniform(config.price_lo, config.price_hi);
    th.sell_above = rng.uniform(config.price_lo, config.price_hi);
  }

  std::vector<double> fitness(n);
  GaResult result;
  bool have_best = false;
  const auto score_population = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      fitness[i] = fitness_of(population[i]);
      if (!have_best || fitness[i] > result.fitness) {
        result = {population[i], fitness[i]};
        have_best = true;
      }
    }
  };
  score_population();

  const auto tournament = [&]() -> const Thresholds& {
    std::size_t winner = rng.below(n);
    for (int k = 1; k < config.tournament_size; ++k) {
      const std::size_t rival = rng.below(n);
      if (fitness[rival] > fitness[winner]) winner = rival;
    }
    return population[winner];
  };

  for (int gen = 1; gen < config.generations; ++gen) {
    std::vector<Thresholds> next;
    next.reserve(n);
    next.push_back(result.best);
    while (next.size() < n) {
      const Thresholds& a = tournament();
      const Thresholds& b = tournament();
      Thresholds child = a;
      if (rng.uniform() < config.crossover_rate) {
        child.buy_below = rng.uniform() < 0.5 ? a.buy_below : b.buy_below;
        child.sell_above = rng.uniform() < 0.5 ? a.sell_above : b.sell_above;
      }
      if (rng.uniform() < config.mutation_rate)
        child.buy_below = clip(child.buy_below + rng.normal(0.0, config.mutation_sigma));
      if (rng.uniform() < config.mutation_rate)
        child.sell_above = clip(child.sell_above + rng.normal(0.0, config.mutation_sigma));
      next.push_back(child);
    }
    population = std::move(next);
    score_population();
  }
  return result;
}

}  // namespace bess
