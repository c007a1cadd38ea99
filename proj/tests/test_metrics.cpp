#include "doctest.h"

#include "core/battery.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"
#include "core/rules.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace bess;

namespace {

EvaluationRun run_rules(const SeriesSet& series, Thresholds th,
                        BatteryState initial = BatteryState{}) {
  RulesPolicy policy(th);
  return evaluate_policy(policy, series, BatteryParams{}, initial);
}

SeriesSet two_step_solar_cycle() {
  SeriesSet s;
  s.start_time = 0;
  s.lmp = {0.0, 100.0};
  s.solar_mw = {40.0, 0.0};
  return s;
}

}  // namespace

TEST_CASE("cumulative profit is the running reward sum") {
  EvaluationRun run;
  run.rewards = {1.0, -2.0, 4.0};
  run.actions.resize(3);
  const std::vector<double> cum = cumulative_profit(run);
  CHECK(cum == std::vector<double>{1.0, -1.0, 3.0});
}

TEST_CASE("mean band over three singleton curves") {
  const MeanCi ci = mean_ci({{1.0}, {2.0}, {3.0}});
  REQUIRE(ci.mean.size() == 1);
  CHECK(ci.mean[0] == doctest::Approx(2.0));
  const double half = ci.upper[0] - ci.mean[0];
  CHECK(half == doctest::Approx(1.1316).epsilon(1e-4));
  CHECK(ci.lower[0] == doctest::Approx(2.0 - half));
}

TEST_CASE("mean band is pointwise") {
  const MeanCi ci = mean_ci({{0.0, 10.0, 4.0}, {2.0, 14.0, 4.0}}, 2.0);
  CHECK(ci.mean == std::vector<double>{1.0, 12.0, 4.0});
  // n=2: s = |a-b|/sqrt(2), half = z*s/sqrt(2) = z*|a-b|/2.
  CHECK(ci.upper[0] - ci.mean[0] == doctest::Approx(2.0));
  CHECK(ci.upper[1] - ci.mean[1] == doctest::Approx(4.0));
  CHECK(ci.upper[2] - ci.mean[2] == doctest::Approx(0.0));
}

TEST_CASE("mean band degenerates cleanly") {
  const MeanCi ci = mean_ci({{5.0, 6.0}});
  CHECK(ci.lower == ci.mean);
  CHECK(ci.upper == ci.mean);
  CHECK_THROWS_AS(mean_ci({}), std::invalid_argument);
  CHECK_THROWS_AS(mean_ci({{1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("profit decomposition follows stored provenance") {
  // Charge once from a 40 MW plant at a zero price, then sell everything at 100.
  const SeriesSet s = two_step_solar_cycle();
  const EvaluationRun run = run_rules(s, {0.0, 60.0});
  REQUIRE(run.actions == std::vector<Action>{Action::Buy, Action::Sell});

  const ProfitDecomposition d = decompose_profit(run);
  // Step 1 enters with 23.25 MWh stored of which eta*10 = 9.3 MWh is solar.
  const double revenue = 0.93 * 23.25 * 100.0;
  CHECK(d.solar_battery == doctest::Approx(0.4 * revenue).epsilon(1e-9));
  CHECK(d.grid_battery == doctest::Approx(0.6 * revenue).epsilon(1e-9));
  CHECK(d.solar_sell == doctest::Approx(0.0));
  CHECK(d.total() == doctest::Approx(run.total_profit).epsilon(1e-12));
}

TEST_CASE("decomposition splits plant revenue from arbitrage") {
  SeriesSet s;
  s.start_time = 0;
  s.lmp = {50.0, 50.0};
  s.solar_mw = {12.0, 12.0};
  SellOnlyPolicy sell_only;
  const EvaluationRun run = evaluate_policy(sell_only, s, BatteryParams{}, BatteryState{});
  const ProfitDecomposition d = decompose_profit(run);
  CHECK(d.solar_sell == doctest::Approx(12.0 * 0.25 * 50.0 * 2.0));
  CHECK(d.solar_battery == doctest::Approx(0.0));
  CHECK(d.grid_battery == doctest::Approx(0.0));
}

TEST_CASE("decomposition always adds up to total profit") {
  SynthesisConfig cfg;
  cfg.profile = SeasonProfile::SummerLike;
  cfg.days = 4;
  cfg.seed = 31;
  const SeriesSet s = synthesize(cfg);
  for (const Thresholds th : {Thresholds{30.0, 60.0}, Thresholds{55.0, 58.0}}) {
    const EvaluationRun run = run_rules(s, th, BatteryState{120.0, 230.0});
    const ProfitDecomposition d = decompose_profit(run);
    const double scale = std::max(1.0, std::fabs(run.total_profit));
    CHECK(std::fabs(d.total() - run.total_profit) <= 1e-9 * scale);
  }
}

TEST_CASE("diurnal profile buckets post-step state by start hour") {
  EvaluationRun run;
  run.start_time = 0;
  const std::size_t n = 96;
  for (std::size_t t = 0; t < n; ++t) {
    run.actions.push_back(Action::Null);
    run.rewards.push_back(0.0);
    run.soc_trace.push_back({1.0, static_cast<double>(t)});
    run.flow_trace.push_back({});
  }
  SeedEnsemble ensemble;
  ensemble.runs.push_back(run);
  ensemble.seeds.push_back(0);
  const DiurnalProfile p = diurnal_soc_profile(ensemble);
  for (int h = 0; h < 24; ++h) {
    CHECK(p.solar_mwh[h] == doctest::Approx(1.0));
    CHECK(p.grid_mwh[h] == doctest::Approx(4.0 * h + 1.5));
  }
}

TEST_CASE("diurnal profile respects the series clock") {
  EvaluationRun run;
  run.start_time = 3600;  // first step begins at 01:00
  for (std::size_t t = 0; t < 96; ++t) {
    run.actions.push_back(Action::Null);
    run.rewards.push_back(0.0);
    run.soc_trace.push_back({0.0, static_cast<double>(t)});
    run.flow_trace.push_back({});
  }
  SeedEnsemble ensemble;
  ensemble.runs.push_back(run);
  const DiurnalProfile p = diurnal_soc_profile(ensemble);
  CHECK(p.grid_mwh[1] == doctest::Approx(1.5));   // steps 0..3
  CHECK(p.grid_mwh[0] == doctest::Approx(93.5));  // steps 92..95 wrap to midnight
}

TEST_CASE("diurnal profile averages runs and days") {
  SeedEnsemble ensemble;
  for (double level : {10.0, 30.0}) {
    EvaluationRun run;
    run.start_time = 0;
    for (std::size_t t = 0; t < 192; ++t) {
      run.actions.push_back(Action::Null);
      run.rewards.push_back(0.0);
      run.soc_trace.push_back({level, 2.0 * level});
      run.flow_trace.push_back({});
    }
    ensemble.runs.push_back(run);
  }
  const DiurnalProfile p = diurnal_soc_profile(ensemble);
  for (int h = 0; h < 24; ++h) {
    CHECK(p.solar_mwh[h] == doctest::Approx(20.0));
    CHECK(p.grid_mwh[h] == doctest::Approx(40.0));
  }
}

TEST_CASE("diurnal profile rejects bad ensembles") {
  SeedEnsemble empty;
  CHECK_THROWS_AS(diurnal_soc_profile(empty), std::invalid_argument);

  SeedEnsemble shorty;
  EvaluationRun run;
  run.start_time = 0;
  for (std::size_t t = 0; t < 50; ++t) {
    run.actions.push_back(Action::Null);
    run.soc_trace.push_back({});
    run.flow_trace.push_back({});
    run.rewards.push_back(0.0);
  }
  shorty.runs.push_back(run);
  CHECK_THROWS_AS(diurnal_soc_profile(shorty), std::invalid_argument);
}

TEST_CASE("net load reflects grid exchange per step") {
  SeriesSet s;
  s.start_time = 0;
  s.lmp = {10.0, 10.0, 100.0};
  s.solar_mw = {8.0, 0.0, 0.0};
  const EvaluationRun run = run_rules(s, {20.0, 90.0});
  REQUIRE(run.actions == std::vector<Action>{Action::Buy, Action::Buy, Action::Sell});
  const std::vector<double> net = net_load_series(run);
  REQUIRE(net.size() == 3);
  // Step 0 buys 25 MWh of plug energy, 2 MWh of it covered by the plant.
  CHECK(net[0] == doctest::Approx(-(25.0 - 2.0) / 0.25));
  CHECK(net[1] == doctest::Approx(-25.0 / 0.25));
  CHECK(net[2] == doctest::Approx(0.93 * 25.0 / 0.25));
}

TEST_CASE("cross correlation products and period stats") {
  const std::vector<double> net{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> demand{10.0, 20.0, 30.0, 40.0};
  const CrossCorrelation cc = cross_correlation(net, demand, 0);
  CHECK(cc.contributions == std::vector<double>{-15.0, -10.0, 15.0, 60.0});

  const DayPeriodStats& night = cc.periods[0];
  CHECK(night.label == "21-06");
  CHECK(night.count == 4);
  CHECK(night.mean == doctest::Approx(12.5));
  CHECK(night.min == doctest::Approx(-15.0));
  CHECK(night.max == doctest::Approx(60.0));
  CHECK(night.q25 == doctest::Approx(-11.25));
  CHECK(night.q50 == doctest::Approx(2.5));
  CHECK(night.q75 == doctest::Approx(26.25));

  for (int k = 1; k < 4; ++k) {
    CHECK(cc.periods[k].count == 0);
    CHECK(std::isnan(cc.periods[k].mean));
    CHECK(std::isnan(cc.periods[k].q50));
  }
}

TEST_CASE("cross correlation places samples on the day clock") {
  const std::vector<double> net{1.0, 1.0, 1.0, 1.0};
  const std::vector<double> demand{1.0, 2.0, 3.0, 4.0};
  const CrossCorrelation cc = cross_correlation(net, demand, 6 * 3600);
  CHECK(cc.periods[1].count == 4);
  CHECK(cc.periods[0].count == 0);

  // A whole day starting at midnight: 9h night, 6h morning, 6h afternoon, 3h evening.
  std::vector<double> day_net(96, 1.0);
  std::vector<double> day_demand(96, 1.0);
  day_demand[0] = 2.0;  // break the zero variance so products are not all zero
  const CrossCorrelation day = cross_correlation(day_net, day_demand, 0);
  CHECK(day.periods[0].count == 36);
  CHECK(day.periods[1].count == 24);
  CHECK(day.periods[2].count == 24);
  CHECK(day.periods[3].count == 12);
  CHECK(day.periods[0].label == "21-06");
  CHECK(day.periods[1].label == "06-12");
  CHECK(day.periods[2].label == "12-18");
  CHECK(day.periods[3].label == "18-21");
}

TEST_CASE("cross correlation validates its inputs") {
  CHECK_THROWS_AS(cross_correlation(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cross_correlation(std::vector<double>{}, std::vector<double>{}),
                  std::invalid_argument);
}
