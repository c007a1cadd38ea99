// End-to-end checks of the bess-lab binary: exit codes, file outputs, and the
// shapes of the JSON/CSV artifacts. argv[1] is the path to the binary.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

#define EXPECT(cond)                                                        \
  do {                                                                      \
    if (!(cond)) {                                                          \
      ++g_failures;                                                         \
      std::cerr << "FAIL " << __FILE__ << ":" << __LINE__ << "  " << #cond \
                << "\n";                                                    \
    }                                                                       \
  } while (0)

#define EXPECT_EQ(a, b)                                                       \
  do {                                                                        \
    const auto va = (a);                                                      \
    const auto vb = (b);                                                      \
    if (!(va == vb)) {                                                        \
      ++g_failures;                                                           \
      std::cerr << "FAIL " << __FILE__ << ":" << __LINE__ << "  " << #a       \
                << " == " << #b << "  (" << va << " vs " << vb << ")\n";      \
    }                                                                         \
  } while (0)

std::string g_binary;
fs::path g_dir;

int run_cli(const std::string& args) {
  const std::string cmd = "'" + g_binary + "' " + args;
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

json read_json(const fs::path& path) { return json::parse(slurp(path)); }

void write_json(const fs::path& path, const json& value) {
  std::ofstream out(path);
  out << value.dump(2) << "\n";
}

json synthetic_scenario(const std::string& label, int days, int train_weeks, int test_weeks) {
  return {{"label", label},
          {"data", {{"synthetic", {{"profile", "winter"}, {"days", days}, {"seed", 7}}}}},
          {"train_weeks", train_weeks},
          {"test_weeks", test_weeks}};
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

void check_usage_errors() {
  EXPECT_EQ(run_cli("--help >/dev/null"), 0);
  EXPECT_EQ(run_cli(">/dev/null 2>&1"), 2);                    // missing subcommand
  EXPECT_EQ(run_cli("frobnicate >/dev/null 2>&1"), 2);         // unknown subcommand
  EXPECT_EQ(run_cli("gen-data --bogus x >/dev/null 2>&1"), 2); // unknown flag
  EXPECT_EQ(run_cli("gen-data >/dev/null 2>&1"), 2);           // missing required --out
  EXPECT_EQ(run_cli("gen-data --profile autumn --out /tmp/x >/dev/null 2>&1"), 2);
}

void check_gen_data() {
  const fs::path a = g_dir / "gen_a";
  const fs::path b = g_dir / "gen_b";
  EXPECT_EQ(run_cli("gen-data --profile winter --days 15 --seed 3 --out '" + a.string() +
                    "' 2>/dev/null"),
            0);
  EXPECT_EQ(run_cli("gen-data --profile winter --days 15 --seed 3 --out '" + b.string() +
                    "' 2>/dev/null"),
            0);
  for (const char* name : {"lmp.csv", "solar.csv", "demand.csv"}) {
    EXPECT(fs::exists(a / name));
    EXPECT(slurp(a / name) == slurp(b / name));  // same seed, same bytes
  }
  const std::string lmp = slurp(a / "lmp.csv");
  EXPECT(lmp.rfind("timestamp,lmp_usd_per_mwh\n", 0) == 0);
  EXPECT_EQ(count_lines(lmp), 15u * 96u + 1u);
  const std::string solar = slurp(a / "solar.csv");
  EXPECT_EQ(count_lines(solar), 15u * 24u + 1u);
}

void check_run_and_compare() {
  // 15 synthetic days: one week of training, one of testing.
  const json scenario = synthetic_scenario("winter-small", 15, 1, 1);

  const fs::path sell_cfg = g_dir / "sell.json";
  write_json(sell_cfg, {{"method", "sell-only"}, {"scenario", scenario}});
  const fs::path sell_out = g_dir / "out_sell";
  EXPECT_EQ(run_cli("run --config '" + sell_cfg.string() + "' --seeds 0 --out '" +
                    sell_out.string() + "' 2>/dev/null"),
            0);

  const json sell = read_json(sell_out / "summary.json");
  EXPECT_EQ(sell.at("method").get<std::string>(), std::string("sell-only"));
  EXPECT_EQ(sell.at("per_seed").size(), 1u);
  EXPECT(sell.at("profit").at("mean_usd").get<double>() > 0.0);
  EXPECT_EQ(sell.at("profit").at("ci_low_usd").get<double>(),
            sell.at("profit").at("mean_usd").get<double>());

  const std::string traj = slurp(sell_out / "trajectory_seed0.csv");
  EXPECT(traj.rfind("step,timestamp,lmp_usd_per_mwh,solar_mw,action,soc_mwh,soc_solar_mwh,"
                    "soc_grid_mwh,reward_usd,cum_profit_usd,net_load_mw\n",
                    0) == 0);
  EXPECT_EQ(count_lines(traj), 672u + 1u);
  // Test split starts one week after the synthetic epoch.
  EXPECT(traj.find("\n0,2023-01-08T00:00:00Z,") != std::string::npos);
  EXPECT(traj.find(",null,") != std::string::npos);

  const fs::path oracle_cfg = g_dir / "oracle.json";
  write_json(oracle_cfg, {{"method", "oracle-exact"}, {"scenario", scenario}});
  const fs::path oracle_out = g_dir / "out_oracle";
  EXPECT_EQ(run_cli("run --config '" + oracle_cfg.string() + "' --seeds 0 --out '" +
                    oracle_out.string() + "' 2>/dev/null"),
            0);
  const json oracle = read_json(oracle_out / "summary.json");
  const double oracle_mean = oracle.at("profit").at("mean_usd").get<double>();
  const double sell_mean = sell.at("profit").at("mean_usd").get<double>();
  EXPECT(oracle_mean >= sell_mean);

  // Decomposition parts add back up to the mean profit.
  const json dec = oracle.at("decomposition_mean");
  const double dec_total = dec.at("solar_sell").get<double>() +
                           dec.at("solar_battery").get<double>() +
                           dec.at("grid_battery").get<double>();
  EXPECT(std::abs(dec_total - oracle_mean) <= 1e-6 * std::max(1.0, std::abs(oracle_mean)));
  EXPECT_EQ(oracle.at("diurnal_soc_mwh").at("grid").size(), 24u);
  EXPECT(oracle.at("per_seed")[0].contains("cross_correlation"));

  const fs::path cmp = g_dir / "comparison.csv";
  EXPECT_EQ(run_cli("compare --summaries '" + (sell_out / "summary.json").string() + "' '" +
                    (oracle_out / "summary.json").string() + "' --out '" + cmp.string() +
                    "' 2>/dev/null"),
            0);
  const std::string table = slurp(cmp);
  EXPECT(table.rfind("scenario,method,mean_profit_usd,ci_low_usd,ci_high_usd,percent_of_oracle\n",
                     0) == 0);
  EXPECT(table.find(",oracle-exact,") != std::string::npos);
  EXPECT(table.find(",100.0\n") != std::string::npos);
  char expected_pct[32];
  std::snprintf(expected_pct, sizeof expected_pct, ",%.1f\n", 100.0 * sell_mean / oracle_mean);
  EXPECT(table.find(expected_pct) != std::string::npos);
}

void check_rules_methods() {
  const json scenario = synthetic_scenario("winter-small", 15, 1, 1);

  const fs::path fixed_cfg = g_dir / "rules_fixed.json";
  write_json(fixed_cfg, {{"method", "rules"},
                         {"scenario", scenario},
                         {"rules", {{"buy_below", 35.0}, {"sell_above", 52.0}}}});
  const fs::path fixed_out = g_dir / "out_rules_fixed";
  EXPECT_EQ(run_cli("run --config '" + fixed_cfg.string() + "' --seeds 0 --out '" +
                    fixed_out.string() + "' 2>/dev/null"),
            0);
  const json fixed = read_json(fixed_out / "summary.json");
  EXPECT_EQ(fixed.at("per_seed")[0].at("buy_below").get<double>(), 35.0);

  const fs::path ga_cfg = g_dir / "rules_ga.json";
  write_json(ga_cfg,
             {{"method", "rules"},
              {"scenario", scenario},
              {"ga", {{"population_size", 8}, {"generations", 4}}}});
  const fs::path tune_out = g_dir / "thresholds.json";
  EXPECT_EQ(run_cli("tune-rules --config '" + ga_cfg.string() + "' --seed 5 --out '" +
                    tune_out.string() + "' 2>/dev/null"),
            0);
  const json tuned = read_json(tune_out);
  EXPECT(tuned.contains("buy_below"));
  EXPECT(tuned.contains("sell_above"));
  EXPECT(tuned.contains("fitness_usd"));
  EXPECT(tuned.at("buy_below").get<double>() >= 0.0);
  EXPECT(tuned.at("buy_below").get<double>() <= 200.0);

  const fs::path ga_out = g_dir / "out_rules_ga";
  EXPECT_EQ(run_cli("run --config '" + ga_cfg.string() + "' --seeds 0,1 --jobs 2 --out '" +
                    ga_out.string() + "' 2>/dev/null"),
            0);
  const json ga = read_json(ga_out / "summary.json");
  EXPECT_EQ(ga.at("per_seed").size(), 2u);
  EXPECT(ga.at("per_seed")[0].contains("fitness_usd"));
  EXPECT(fs::exists(ga_out / "trajectory_seed1.csv"));
}

void check_rhc_method() {
  const json scenario = synthetic_scenario("winter-small", 15, 1, 1);
  const fs::path cfg = g_dir / "rhc.json";
  write_json(cfg, {{"method", "rhc"},
                   {"scenario", scenario},
                   {"rhc", {{"horizon_steps", 32}, {"replan_every", 8}}}});
  const fs::path out = g_dir / "out_rhc";
  EXPECT_EQ(run_cli("run --config '" + cfg.string() + "' --seeds 0 --out '" + out.string() +
                    "' 2>/dev/null"),
            0);
  const json summary = read_json(out / "summary.json");
  EXPECT(std::isfinite(summary.at("profit").at("mean_usd").get<double>()));
}

void check_dqn_methods() {
  const json scenario = synthetic_scenario("winter-small", 15, 1, 1);
  const json dqn_cfg = {{"total_steps", 250},
                        {"learning_starts", 40},
                        {"buffer_capacity", 256},
                        {"batch_size", 8},
                        {"target_update_interval", 64},
                        {"hidden_sizes", {16}}};

  const fs::path train_cfg = g_dir / "dqn.json";
  write_json(train_cfg, {{"method", "dqn"}, {"scenario", scenario}, {"dqn", dqn_cfg}});
  const fs::path weights = g_dir / "weights" / "model.bin";
  EXPECT_EQ(run_cli("train-dqn --config '" + train_cfg.string() + "' --seed 2 --out '" +
                    weights.string() + "' 2>/dev/null"),
            0);
  EXPECT(fs::exists(weights));
  const json sidecar = read_json(weights.string() + ".json");
  EXPECT_EQ(sidecar.at("config").at("seed").get<int>(), 2);
  EXPECT_EQ(sidecar.at("normalization").at("mean").size(), 35u);

  const fs::path run_out = g_dir / "out_dqn";
  EXPECT_EQ(run_cli("run --config '" + train_cfg.string() + "' --seeds 0,1 --jobs 2 --out '" +
                    run_out.string() + "' 2>/dev/null"),
            0);
  const json summary = read_json(run_out / "summary.json");
  EXPECT_EQ(summary.at("per_seed").size(), 2u);
  EXPECT(fs::exists(run_out / "weights_seed0.bin"));
  EXPECT(fs::exists(run_out / "weights_seed1.bin.json"));
}

void check_failure_exit_codes() {
  const json scenario = synthetic_scenario("winter-small", 15, 1, 1);

  // Unreadable config.
  EXPECT_EQ(run_cli("run --config '" + (g_dir / "missing.json").string() +
                    "' --out /tmp/x >/dev/null 2>&1"),
            3);

  // Config that is not JSON.
  const fs::path broken = g_dir / "broken.json";
  std::ofstream(broken) << "method: nope";
  EXPECT_EQ(
      run_cli("run --config '" + broken.string() + "' --out /tmp/x >/dev/null 2>&1"), 2);

  // Structurally valid config with an unknown method.
  const fs::path unknown = g_dir / "unknown.json";
  write_json(unknown, {{"method", "astrology"}, {"scenario", scenario}});
  EXPECT_EQ(run_cli("run --config '" + unknown.string() + "' --seeds 0 --out '" +
                    (g_dir / "out_unknown").string() + "' >/dev/null 2>&1"),
            1);

  // Missing method key.
  const fs::path methodless = g_dir / "methodless.json";
  write_json(methodless, {{"scenario", scenario}});
  EXPECT_EQ(run_cli("run --config '" + methodless.string() + "' --out /tmp/x >/dev/null 2>&1"),
            2);

  // More weeks than the data holds.
  const fs::path starved = g_dir / "starved.json";
  write_json(starved,
             {{"method", "sell-only"}, {"scenario", synthetic_scenario("x", 15, 12, 1)}});
  EXPECT_EQ(run_cli("run --config '" + starved.string() + "' --out /tmp/x >/dev/null 2>&1"), 3);

  // Lattice misconfiguration.
  const fs::path lattice = g_dir / "lattice.json";
  write_json(lattice, {{"method", "oracle-exact"},
                       {"scenario", scenario},
                       {"oracle", {{"soc_grid", 0.3}}}});
  EXPECT_EQ(run_cli("run --config '" + lattice.string() + "' --seeds 0 --out '" +
                    (g_dir / "out_lattice").string() + "' >/dev/null 2>&1"),
            1);

  // Training blow-up maps to the divergence exit code.
  const fs::path diverge = g_dir / "diverge.json";
  write_json(diverge, {{"method", "dqn"},
                       {"scenario", scenario},
                       {"dqn",
                        {{"total_steps", 2000},
                         {"learning_starts", 40},
                         {"buffer_capacity", 128},
                         {"batch_size", 8},
                         {"hidden_sizes", {8}},
                         {"learning_rate", 1e9},
                         {"grad_clip", 0.0},
                         {"reward_scale", 1.0}}}});
  EXPECT_EQ(run_cli("run --config '" + diverge.string() + "' --seeds 0 --out '" +
                    (g_dir / "out_diverge").string() + "' >/dev/null 2>&1"),
            1);
  // Outside the per-seed pool the divergence keeps its own exit code.
  EXPECT_EQ(run_cli("train-dqn --config '" + diverge.string() + "' --seed 0 --out '" +
                    (g_dir / "diverged.bin").string() + "' >/dev/null 2>&1"),
            4);

  // Data file with an oversized gap.
  const fs::path gap_dir = g_dir / "gap";
  fs::create_directories(gap_dir);
  std::ofstream(gap_dir / "lmp.csv")
      << "timestamp,lmp_usd_per_mwh\n2023-01-01T00:00:00Z,10\n2023-01-01T01:00:00Z,11\n";
  const fs::path gap_cfg = g_dir / "gap.json";
  write_json(gap_cfg,
             {{"method", "sell-only"},
              {"scenario",
               {{"label", "gap"},
                {"data", {{"files", {{"lmp", (gap_dir / "lmp.csv").string()}}}}},
                {"train_weeks", 1},
                {"test_weeks", 1}}}});
  EXPECT_EQ(run_cli("run --config '" + gap_cfg.string() + "' --out /tmp/x >/dev/null 2>&1"), 3);
}

void check_logging_env() {
  const fs::path out = g_dir / "gen_logged";
  const std::string cmd = "BESS_LAB_LOG=debug '" + g_binary +
                          "' gen-data --days 2 --out '" + out.string() + "' 2>'" +
                          (g_dir / "log.txt").string() + "'";
  const int rc = std::system(cmd.c_str());
  EXPECT_EQ(WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, 0);
  const std::string log = slurp(g_dir / "log.txt");
  EXPECT(log.find("[info]") != std::string::npos);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli <path-to-bess-lab>\n";
    return 2;
  }
  g_binary = argv[1];
  g_dir = fs::temp_directory_path() / "bess_cli_test";
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  check_usage_errors();
  check_gen_data();
  check_run_and_compare();
  check_rules_methods();
  check_rhc_method();
  check_dqn_methods();
  check_failure_exit_codes();
  check_logging_env();

  if (g_failures == 0) {
    std::cout << "test_cli: all checks passed\n";
    return 0;
  }
  std::cerr << "test_cli: " << g_failures << " check(s) failed\n";
  return 1;
}
