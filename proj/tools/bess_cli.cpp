// bess-lab: experiment runner for the battery arbitrage toolkit.
//
// Subcommands: gen-data, tune-rules, train-dqn, run, compare. Everything goes
// through the C API in besslab.h; configs and summaries are JSON, series and
// trajectories are CSV.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "besslab.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---- logging ----------------------------------------------------------

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("BESS_LAB_LOG");
    if (!env) return LogLevel::Info;
    const std::string v = env;
    if (v == "debug") return LogLevel::Debug;
    if (v == "info") return LogLevel::Info;
    if (v == "warn") return LogLevel::Warn;
    if (v == "error") return LogLevel::Error;
    return LogLevel::Info;
  }();
  return level;
}

std::mutex g_log_mutex;

void log(LogLevel level, const std::string& message) {
  if (level < log_threshold()) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  const std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << "[" << names[static_cast<int>(level)] << "] " << message << "\n";
}

// ---- error plumbing ----------------------------------------------------

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

struct CliError {
  int exit_code;
  std::string message;
};

int exit_code_for(bess_status status) {
  switch (status) {
    case BESS_ERR_SCHEMA:
    case BESS_ERR_ALIGNMENT:
    case BESS_ERR_INSUFFICIENT_DATA:
    case BESS_ERR_INSUFFICIENT_HISTORY:
    case BESS_ERR_IO:
      return kExitData;
    case BESS_ERR_DIVERGENCE:
      return kExitDivergence;
    case BESS_ERR_INVALID_ARGUMENT:
    case BESS_ERR_LATTICE:
      return kExitConfig;
    default:
      return 1;
  }
}

void check(bess_status status, const std::string& context) {
  if (status != BESS_OK)
    throw CliError{exit_code_for(status), context + ": " + bess_last_error()};
}

// ---- handle wrappers ----------------------------------------------------

struct SeriesDeleter {
  void operator()(bess_series* s) const { bess_series_free(s); }
};
struct PolicyDeleter {
  void operator()(bess_policy* p) const { bess_policy_free(p); }
};
struct RunDeleter {
  void operator()(bess_run* r) const { bess_run_free(r); }
};
using SeriesPtr = std::unique_ptr<bess_series, SeriesDeleter>;
using PolicyPtr = std::unique_ptr<bess_policy, PolicyDeleter>;
using RunPtr = std::unique_ptr<bess_run, RunDeleter>;

// ---- config handling ----------------------------------------------------

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitData, "cannot open " + path};
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw CliError{kExitConfig, path + ": " + e.what()};
  }
}

bess_battery_params battery_from_config(const json& config) {
  bess_battery_params params;
  bess_battery_params_default(&params);
  if (!config.contains("battery")) return params;
  const json& b = config.at("battery");
  if (b.contains("e_max_mwh")) params.e_max_mwh = b.at("e_max_mwh").get<double>();
  if (b.contains("charge_rate_mw")) params.charge_rate_mw = b.at("charge_rate_mw").get<double>();
  if (b.contains("discharge_rate_mw"))
    params.discharge_rate_mw = b.at("discharge_rate_mw").get<double>();
  if (b.contains("dt_hours")) params.dt_hours = b.at("dt_hours").get<double>();
  if (b.contains("eta")) params.eta = b.at("eta").get<double>();
  if (b.contains("beta")) params.beta = b.at("beta").get<double>();
  if (b.contains("self_discharge_soc_threshold"))
    params.self_discharge_soc_threshold = b.at("self_discharge_soc_threshold").get<double>();
  return params;
}

struct Scenario {
  std::string label;
  SeriesPtr train;
  SeriesPtr test;
  json descriptor;  // echoed into summaries
};

// Builds the train/test split described by config.scenario. The data block is
// either {"synthetic": {...}} or {"files": {...}}.
Scenario build_scenario(const json& config) {
  if (!config.contains("scenario"))
    throw CliError{kExitConfig, "config is missing the scenario block"};
  const json& sc = config.at("scenario");
  if (!sc.contains("data")) throw CliError{kExitConfig, "scenario is missing the data block"};
  const json& data = sc.at("data");

  bess_series* raw = nullptr;
  if (data.contains("synthetic")) {
    const json& syn = data.at("synthetic");
    const std::string profile = syn.value("profile", std::string("winter"));
    const int days = syn.value("days", 91);
    const auto seed = syn.value("seed", std::uint64_t{0});
    const double solar_mean = syn.value("solar_mean_mw", 9.1);
    check(bess_series_synthesize(profile.c_str(), days, seed, solar_mean, &raw),
          "synthesizing data");
  } else if (data.contains("files")) {
    const json& files = data.at("files");
    if (!files.contains("lmp")) throw CliError{kExitConfig, "data.files.lmp is required"};
    const std::string lmp = files.at("lmp").get<std::string>();
    const std::string solar = files.value("solar", std::string());
    const std::string demand = files.value("demand", std::string());
    check(bess_series_load(lmp.c_str(), solar.empty() ? nullptr : solar.c_str(),
                           demand.empty() ? nullptr : demand.c_str(), &raw),
          "loading data");
  } else {
    throw CliError{kExitConfig, "scenario.data needs either 'synthetic' or 'files'"};
  }
  SeriesPtr full(raw);

  const double pv_scale = sc.value("pv_scale", 1.0);
  if (pv_scale != 1.0) check(bess_series_scale_pv(full.get(), pv_scale), "scaling solar");

  const int train_weeks = sc.value("train_weeks", 12);
  const int test_weeks = sc.value("test_weeks", 1);
  bess_series* train = nullptr;
  bess_series* test = nullptr;
  check(bess_series_split(full.get(), train_weeks, test_weeks, &train, &test),
        "splitting data");

  Scenario out;
  out.label = sc.value("label", std::string("scenario"));
  out.train.reset(train);
  out.test.reset(test);
  out.descriptor = sc;
  log(LogLevel::Debug, "scenario '" + out.label + "': train " +
                           std::to_string(bess_series_len(out.train.get())) + " steps, test " +
                           std::to_string(bess_series_len(out.test.get())) + " steps");
  return out;
}

std::pair<double, double> initial_soc(const json& config) {
  double solar = 0.0, grid = 0.0;
  if (config.contains("initial_soc")) {
    solar = config.at("initial_soc").value("solar_mwh", 0.0);
    grid = config.at("initial_soc").value("grid_mwh", 0.0);
  }
  return {solar, grid};
}

json with_seed(json block, std::uint64_t seed) {
  block["seed"] = seed;
  return block;
}

// ---- output writers ------------------------------------------------------

std::string action_name(int action) {
  switch (action) {
    case BESS_ACTION_BUY: return "buy";
    case BESS_ACTION_SELL: return "sell";
    case BESS_ACTION_NULL: return "null";
    default: return "?";
  }
}

void write_trajectory_csv(const std::string& path, const bess_run* run) {
  const size_t n = bess_run_len(run);
  std::vector<int> actions(n);
  std::vector<double> rewards(n), cum(n), soc(n), soc_solar(n), soc_grid(n), lmp(n), solar(n),
      net_load(n);
  check(bess_run_actions(run, actions.data()), "reading actions");
  check(bess_run_rewards(run, rewards.data()), "reading rewards");
  check(bess_run_cum_profit(run, cum.data()), "reading cumulative profit");
  check(bess_run_soc(run, soc.data()), "reading SoC");
  check(bess_run_soc_solar(run, soc_solar.data()), "reading solar SoC");
  check(bess_run_soc_grid(run, soc_grid.data()), "reading grid SoC");
  check(bess_run_lmp(run, lmp.data()), "reading prices");
  check(bess_run_solar(run, solar.data()), "reading solar");
  check(bess_run_net_load(run, net_load.data()), "reading net load");

  std::ofstream out(path);
  if (!out) throw CliError{kExitData, "cannot open " + path + " for writing"};
  out << "step,timestamp,lmp_usd_per_mwh,solar_mw,action,soc_mwh,soc_solar_mwh,soc_grid_mwh,"
         "reward_usd,cum_profit_usd,net_load_mw\n";
  const int64_t start = bess_run_start_time(run);
  const auto step_seconds = static_cast<int64_t>(bess_run_dt_hours(run) * 3600.0);
  out.precision(10);
  for (size_t t = 0; t < n; ++t) {
    char stamp[24];
    check(bess_format_timestamp(start + static_cast<int64_t>(t) * step_seconds, stamp,
                                sizeof stamp),
          "formatting timestamp");
    out << t << ',' << stamp << ',' << lmp[t] << ',' << solar[t] << ',' << action_name(actions[t])
        << ',' << soc[t] << ',' << soc_solar[t] << ',' << soc_grid[t] << ',' << rewards[t] << ','
        << cum[t] << ',' << net_load[t] << '\n';
  }
  if (!out) throw CliError{kExitData, "failed writing " + path};
}

json period_stats_json(const bess_period_stats& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"min", s.min},
          {"max", s.max},     {"q25", s.q25},   {"q50", s.q50},
          {"q75", s.q75}};
}

void write_json_file(const std::string& path, const json& value) {
  std::ofstream out(path);
  if (!out) throw CliError{kExitData, "cannot open " + path + " for writing"};
  out << value.dump(2) << "\n";
  if (!out) throw CliError{kExitData, "failed writing " + path};
}

// ---- per-method policy construction ---------------------------------------

struct SeedResult {
  std::uint64_t seed = 0;
  RunPtr run;
  json extra;  // method artifacts (thresholds, weight paths, ...)
};

SeedResult run_one_seed(const json& config, const std::string& method, const Scenario& scenario,
                        const bess_battery_params& params, std::uint64_t seed,
                        const std::string& out_dir) {
  SeedResult result;
  result.seed = seed;
  const auto [e0_solar, e0_grid] = initial_soc(config);

  PolicyPtr policy;
  if (method == "sell-only") {
    bess_policy* p = nullptr;
    check(bess_policy_sell_only(&p), "building sell-only policy");
    policy.reset(p);
  } else if (method == "rules") {
    double buy = 0.0, sell = 0.0;
    if (config.contains("rules")) {
      buy = config.at("rules").at("buy_below").get<double>();
      sell = config.at("rules").at("sell_above").get<double>();
    } else {
      const json ga = with_seed(config.value("ga", json::object()), seed);
      double fitness = 0.0;
      check(bess_ga_tune(scenario.train.get(), &params, ga.dump().c_str(), &buy, &sell,
                         &fitness),
            "tuning thresholds");
      result.extra["fitness_usd"] = fitness;
      log(LogLevel::Debug, "seed " + std::to_string(seed) + ": thresholds " +
                               std::to_string(buy) + "/" + std::to_string(sell));
    }
    result.extra["buy_below"] = buy;
    result.extra["sell_above"] = sell;
    bess_policy* p = nullptr;
    check(bess_policy_rules(buy, sell, &p), "building rules policy");
    policy.reset(p);
  } else if (method == "dqn") {
    const json dqn = with_seed(config.value("dqn", json::object()), seed);
    bess_policy* p = nullptr;
    check(bess_dqn_train(scenario.train.get(), &params, dqn.dump().c_str(), &p),
          "training DQN");
    policy.reset(p);
    const std::string weights_path =
        (fs::path(out_dir) / ("weights_seed" + std::to_string(seed) + ".bin")).string();
    check(bess_dqn_save(policy.get(), weights_path.c_str()), "saving weights");
    size_t dim = 0;
    check(bess_dqn_norm_dim(policy.get(), &dim), "reading normalisation");
    std::vector<double> mean(dim), stddev(dim);
    check(bess_dqn_norm(policy.get(), mean.data(), stddev.data()), "reading normalisation");
    write_json_file(weights_path + ".json",
                    {{"config", dqn}, {"normalization", {{"mean", mean}, {"std", stddev}}}});
    result.extra["weights"] = weights_path;
  } else if (method == "rhc") {
    json rhc = config.value("rhc", json::object());
    const std::string forecaster = rhc.value("forecaster", std::string("seasonal_naive"));
    bess_policy* p = nullptr;
    check(bess_policy_rhc(&params, rhc.dump().c_str(), scenario.train.get(),
                          forecaster == "ground_truth" ? scenario.test.get() : nullptr, &p),
          "building RHC policy");
    policy.reset(p);
  } else if (method == "oracle-exact" || method == "oracle-relaxed") {
    const double soc_grid = config.value("oracle", json::object()).value("soc_grid", 0.25);
    bess_run* r = nullptr;
    check(bess_dp_oracle(scenario.test.get(), &params,
                         method == "oracle-exact" ? "exact" : "relaxed", soc_grid, e0_solar,
                         e0_grid, &r),
          "running oracle");
    result.run.reset(r);
    return result;
  } else {
    throw CliError{kExitConfig, "unknown method '" + method + "'"};
  }

  bess_run* r = nullptr;
  check(bess_evaluate(policy.get(), scenario.test.get(), &params, e0_solar, e0_grid, &r),
        "evaluating policy");
  result.run.reset(r);
  return result;
}

// ---- subcommands -----------------------------------------------------------

int cmd_gen_data(const std::string& profile, int days, std::uint64_t seed, double solar_mean,
                 const std::string& out_dir) {
  fs::create_directories(out_dir);
  bess_series* raw = nullptr;
  check(bess_series_synthesize(profile.c_str(), days, seed, solar_mean, &raw),
        "synthesizing data");
  SeriesPtr series(raw);
  const fs::path dir(out_dir);
  check(bess_series_write_csv(series.get(), (dir / "lmp.csv").c_str(),
                              (dir / "solar.csv").c_str(), (dir / "demand.csv").c_str()),
        "writing CSVs");
  log(LogLevel::Info, "wrote " + std::to_string(bess_series_len(series.get())) +
                          " steps to " + out_dir);
  return 0;
}

int cmd_tune_rules(const std::string& config_path, std::optional<std::uint64_t> seed,
                   const std::string& out_path) {
  const json config = load_json_file(config_path);
  const Scenario scenario = build_scenario(config);
  const bess_battery_params params = battery_from_config(config);

  json ga = config.value("ga", json::object());
  if (seed) ga["seed"] = *seed;
  double buy = 0.0, sell = 0.0, fitness = 0.0;
  check(bess_ga_tune(scenario.train.get(), &params, ga.dump().c_str(), &buy, &sell, &fitness),
        "tuning thresholds");

  const json result = {{"buy_below", buy}, {"sell_above", sell}, {"fitness_usd", fitness}};
  if (out_path.empty()) {
    std::cout << result.dump(2) << "\n";
  } else {
    write_json_file(out_path, result);
    log(LogLevel::Info, "thresholds written to " + out_path);
  }
  return 0;
}

int cmd_train_dqn(const std::string& config_path, std::optional<std::uint64_t> seed,
                  const std::string& out_path) {
  const json config = load_json_file(config_path);
  const Scenario scenario = build_scenario(config);
  const bess_battery_params params = battery_from_config(config);

  json dqn = config.value("dqn", json::object());
  if (seed) dqn["seed"] = *seed;
  bess_policy* raw = nullptr;
  check(bess_dqn_train(scenario.train.get(), &params, dqn.dump().c_str(), &raw),
        "training DQN");
  PolicyPtr policy(raw);

  if (const fs::path parent = fs::path(out_path).parent_path(); !parent.empty())
    fs::create_directories(parent);
  check(bess_dqn_save(policy.get(), out_path.c_str()), "saving weights");
  size_t dim = 0;
  check(bess_dqn_norm_dim(policy.get(), &dim), "reading normalisation");
  std::vector<double> mean(dim), stddev(dim);
  check(bess_dqn_norm(policy.get(), mean.data(), stddev.data()), "reading normalisation");
  write_json_file(out_path + ".json",
                  {{"config", dqn}, {"normalization", {{"mean", mean}, {"std", stddev}}}});
  log(LogLevel::Info, "weights written to " + out_path);
  return 0;
}

int cmd_run(const std::string& config_path, std::vector<std::uint64_t> seeds, int jobs,
            const std::string& out_dir) {
  const json config = load_json_file(config_path);
  if (!config.contains("method")) throw CliError{kExitConfig, "config is missing 'method'"};
  const std::string method = config.at("method").get<std::string>();
  const Scenario scenario = build_scenario(config);
  const bess_battery_params params = battery_from_config(config);

  if (seeds.empty()) {
    if (config.contains("seeds"))
      seeds = config.at("seeds").get<std::vector<std::uint64_t>>();
    else
      for (std::uint64_t s = 0; s < 10; ++s) seeds.push_back(s);
  }
  fs::create_directories(out_dir);

  std::vector<SeedResult> results(seeds.size());
  std::vector<std::string> failures(seeds.size());
  std::atomic<size_t> next{0};
  const auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < seeds.size(); i = next.fetch_add(1)) {
      try {
        results[i] = run_one_seed(config, method, scenario, params, seeds[i], out_dir);
        log(LogLevel::Info,
            "seed " + std::to_string(seeds[i]) + ": profit " +
                std::to_string(bess_run_total_profit(results[i].run.get())) + " USD");
      } catch (const CliError& e) {
        failures[i] = e.message;
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(seeds.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (size_t i = 0; i < seeds.size(); ++i)
    if (!failures[i].empty())
      throw CliError{1, "seed " + std::to_string(seeds[i]) + " failed: " + failures[i]};

  // Trajectories plus the aggregate summary.
  std::vector<double> totals;
  json per_seed = json::array();
  json decomposition_mean = {{"solar_sell", 0.0}, {"solar_battery", 0.0}, {"grid_battery", 0.0}};
  for (size_t i = 0; i < seeds.size(); ++i) {
    const bess_run* run = results[i].run.get();
    const std::string traj_path =
        (fs::path(out_dir) / ("trajectory_seed" + std::to_string(seeds[i]) + ".csv")).string();
    write_trajectory_csv(traj_path, run);

    bess_profit_split split{};
    check(bess_run_decompose(run, &split), "decomposing profit");
    json entry = {{"seed", seeds[i]},
                  {"total_profit_usd", bess_run_total_profit(run)},
                  {"decomposition",
                   {{"solar_sell", split.solar_sell},
                    {"solar_battery", split.solar_battery},
                    {"grid_battery", split.grid_battery}}},
                  {"trajectory_csv", traj_path}};
    if (bess_run_has_demand(run)) {
      bess_period_stats stats[4];
      check(bess_run_cross_correlation(run, stats), "cross-correlating");
      json cc;
      for (const auto& s : stats) cc[s.label] = period_stats_json(s);
      entry["cross_correlation"] = cc;
    }
    for (auto& [key, value] : results[i].extra.items()) entry[key] = value;
    per_seed.push_back(entry);
    totals.push_back(bess_run_total_profit(run));
    decomposition_mean["solar_sell"] = decomposition_mean["solar_sell"].get<double>() +
                                       split.solar_sell / static_cast<double>(seeds.size());
    decomposition_mean["solar_battery"] =
        decomposition_mean["solar_battery"].get<double>() +
        split.solar_battery / static_cast<double>(seeds.size());
    decomposition_mean["grid_battery"] =
        decomposition_mean["grid_battery"].get<double>() +
        split.grid_battery / static_cast<double>(seeds.size());
  }

  double mean = 0.0, half = 0.0;
  check(bess_mean_ci(totals.data(), totals.size(), 1.96, &mean, &half), "profit statistics");

  std::vector<const bess_run*> run_handles;
  run_handles.reserve(results.size());
  for (const auto& r : results) run_handles.push_back(r.run.get());
  std::vector<double> diurnal_solar(24), diurnal_grid(24);
  check(bess_diurnal_profile(run_handles.data(), run_handles.size(), diurnal_solar.data(),
                             diurnal_grid.data()),
        "diurnal profile");

  const json summary = {{"method", method},
                        {"scenario", scenario.descriptor},
                        {"seeds", seeds},
                        {"per_seed", per_seed},
                        {"profit",
                         {{"mean_usd", mean},
                          {"ci_low_usd", mean - half},
                          {"ci_high_usd", mean + half},
                          {"z", 1.96},
                          {"per_seed_usd", totals}}},
                        {"decomposition_mean", decomposition_mean},
                        {"diurnal_soc_mwh",
                         {{"solar", diurnal_solar}, {"grid", diurnal_grid}}}};
  const std::string summary_path = (fs::path(out_dir) / "summary.json").string();
  write_json_file(summary_path, summary);
  log(LogLevel::Info, "summary written to " + summary_path);
  return 0;
}

int cmd_compare(const std::vector<std::string>& summary_paths, const std::string& out_path) {
  struct Row {
    std::string scenario;
    std::string method;
    double mean;
    double ci_low;
    double ci_high;
  };
  std::vector<Row> rows;
  for (const std::string& path : summary_paths) {
    const json summary = load_json_file(path);
    Row row;
    row.scenario = summary.value("scenario", json::object()).value("label", std::string("?"));
    row.method = summary.value("method", std::string("?"));
    const json profit = summary.value("profit", json::object());
    row.mean = profit.value("mean_usd", 0.0);
    row.ci_low = profit.value("ci_low_usd", 0.0);
    row.ci_high = profit.value("ci_high_usd", 0.0);
    rows.push_back(row);
  }

  std::ostringstream table;
  table << "scenario,method,mean_profit_usd,ci_low_usd,ci_high_usd,percent_of_oracle\n";
  table.precision(10);
  for (const Row& row : rows) {
    double oracle_mean = 0.0;
    bool have_oracle = false;
    for (const Row& other : rows)
      if (other.scenario == row.scenario && other.method == "oracle-exact") {
        oracle_mean = other.mean;
        have_oracle = true;
      }
    table << row.scenario << ',' << row.method << ',' << row.mean << ',' << row.ci_low << ','
          << row.ci_high << ',';
    if (have_oracle && oracle_mean != 0.0) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", 100.0 * row.mean / oracle_mean);
      table << buf;
    }
    table << '\n';
  }

  if (out_path.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw CliError{kExitData, "cannot open " + out_path + " for writing"};
    out << table.str();
    log(LogLevel::Info, "comparison written to " + out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Battery arbitrage experiment runner"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-data", "Write a synthetic scenario as CSV files");
  std::string gen_profile = "winter";
  int gen_days = 91;
  std::uint64_t gen_seed = 0;
  double gen_solar_mean = 9.1;
  std::string gen_out = ".";
  gen->add_option("--profile", gen_profile, "winter or summer")
      ->check(CLI::IsMember({"winter", "summer"}));
  gen->add_option("--days", gen_days, "number of days")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--solar-mean", gen_solar_mean, "mean plant output, MW");
  gen->add_option("--out", gen_out, "output directory")->required();

  auto* tune = app.add_subcommand("tune-rules", "Tune buy/sell thresholds on the train split");
  std::string tune_config, tune_out;
  std::optional<std::uint64_t> tune_seed;
  tune->add_option("--config", tune_config, "experiment config JSON")->required();
  tune->add_option("--seed", tune_seed, "override the GA seed");
  tune->add_option("--out", tune_out, "output JSON path (stdout when omitted)");

  auto* train = app.add_subcommand("train-dqn", "Train a DQN agent on the train split");
  std::string train_config, train_out;
  std::optional<std::uint64_t> train_seed;
  train->add_option("--config", train_config, "experiment config JSON")->required();
  train->add_option("--seed", train_seed, "override the training seed");
  train->add_option("--out", train_out, "weight file path")->required();

  auto* run = app.add_subcommand("run", "Evaluate a method on the test split across seeds");
  std::string run_config, run_out;
  std::vector<std::uint64_t> run_seeds;
  int run_jobs = 1;
  run->add_option("--config", run_config, "experiment config JSON")->required();
  run->add_option("--seeds", run_seeds, "seed list (default from config, else 0..9)")
      ->delimiter(',');
  run->add_option("--jobs", run_jobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", run_out, "output directory")->required();

  auto* compare = app.add_subcommand("compare", "Combine run summaries into one table");
  std::vector<std::string> compare_summaries;
  std::string compare_out;
  compare->add_option("--summaries", compare_summaries, "summary.json paths")
      ->required()
      ->expected(-1);
  compare->add_option("--out", compare_out, "output CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen->parsed())
      return cmd_gen_data(gen_profile, gen_days, gen_seed, gen_solar_mean, gen_out);
    if (tune->parsed()) return cmd_tune_rules(tune_config, tune_seed, tune_out);
    if (train->parsed()) return cmd_train_dqn(train_config, train_seed, train_out);
    if (run->parsed()) return cmd_run(run_config, run_seeds, run_jobs, run_out);
    if (compare->parsed()) return cmd_compare(compare_summaries, compare_out);
  } catch (const CliError& e) {
    log(LogLevel::Error, e.message);
    return e.exit_code;
  } catch (const std::exception& e) {
    log(LogLevel::Error, e.what());
    return 1;
  }
  return kExitConfig;
}
