#pragma once

#include <cstdint>
#include <utility>

#include "core/policy.hpp"

namespace bess {

struct Thresholds {
  double buy_below = 0.0;   // $/MWh
  double sell_above = 0.0;  // $/MWh
};

// Buy branch wins when the thresholds overlap.
Action rules_decide(double lmp, const Thresholds& thresholds);

class RulesPolicy : public Policy {
 public:
  explicit RulesPolicy(Thresholds thresholds) : thresholds_(thresholds) {}
  Action decide(const Observation& observation) override;
  const Thresholds& thresholds() const { return thresholds_; }

 private:
  Thresholds thresholds_;
};

// Never cycles the battery; plant output is sold as it arrives.
class SellOnlyPolicy : public Policy {
 public:
  Action decide(const Observation&) override { return Action::Null; }
};

struct GaConfig {
  int population_size = 32;
  int generations = 64;
  int tournament_size = 3;
  double crossover_rate = 0.9;
  double mutation_rate = 0.2;
  double mutation_sigma = 5.0;  // $/MWh
  double price_lo = 0.0;
  double price_hi = 200.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GaResult {
  Thresholds best;
  double fitness = 0.0;  // training-split profit of the best individual
};

// Tournament selection, uniform crossover, Gaussian mutation over real-coded
// threshold pairs. The best individual ever evaluated is kept (elitism) and
// returned. Fitness is the training-split profit starting from an empty
// battery. Deterministic for a fixed seed.
GaResult ga_tune(const SeriesSet& train, const BatteryParams& params, const GaConfig& config);

}  // namespace bess
