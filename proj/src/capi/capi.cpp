#include "besslab.h"

#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "core/battery.hpp"
#include "core/dp.hpp"
#include "core/dqn.hpp"
#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/policy.hpp"
#include "core/rhc.hpp"
#include "core/rules.hpp"
#include "core/series.hpp"

using nlohmann::json;

struct bess_series {
  bess::SeriesSet v;
};

struct bess_policy {
  std::unique_ptr<bess::Policy> v;
  bess::DqnPolicy* dqn = nullptr;  // set when v is a DQN policy
};

struct bess_run {
  bess::EvaluationRun v;
};

namespace {

thread_local std::string g_last_error;

bess_status status_of(bess::ErrorCode code) {
  switch (code) {
    case bess::ErrorCode::InvalidArgument: return BESS_ERR_INVALID_ARGUMENT;
    case bess::ErrorCode::Schema: return BESS_ERR_SCHEMA;
    case bess::ErrorCode::Alignment: return BESS_ERR_ALIGNMENT;
    case bess::ErrorCode::InsufficientData: return BESS_ERR_INSUFFICIENT_DATA;
    case bess::ErrorCode::Lattice: return BESS_ERR_LATTICE;
    case bess::ErrorCode::Divergence: return BESS_ERR_DIVERGENCE;
    case bess::ErrorCode::InsufficientHistory: return BESS_ERR_INSUFFICIENT_HISTORY;
    case bess::ErrorCode::Io: return BESS_ERR_IO;
  }
  return BESS_ERR_UNKNOWN;
}

template <typename F>
bess_status wrap(F&& body) {
  try {
    return body();
  } catch (const bess::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return BESS_ERR_INVALID_ARGUMENT;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return BESS_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BESS_ERR_UNKNOWN;
  }
}

bess_status fail(bess_status status, const char* message) {
  g_last_error = message;
  return status;
}

bess::BatteryParams to_params(const bess_battery_params* p) {
  if (!p) throw std::invalid_argument("params must not be NULL");
  bess::BatteryParams out;
  out.e_max = p->e_max_mwh;
  out.charge_rate = p->charge_rate_mw;
  out.discharge_rate = p->discharge_rate_mw;
  out.dt = p->dt_hours;
  out.eta = p->eta;
  out.beta = p->beta;
  out.self_discharge_soc_threshold = p->self_discharge_soc_threshold;
  return out;
}

json parse_config(const char* config_json) {
  if (!config_json || !*config_json) return json::object();
  json j = json::parse(config_json);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  return j;
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

bess::GaConfig ga_config_from_json(const json& j) {
  bess::GaConfig c;
  read_field(j, "population_size", c.population_size);
  read_field(j, "generations", c.generations);
  read_field(j, "tournament_size", c.tournament_size);
  read_field(j, "crossover_rate", c.crossover_rate);
  read_field(j, "mutation_rate", c.mutation_rate);
  read_field(j, "mutation_sigma", c.mutation_sigma);
  read_field(j, "price_lo", c.price_lo);
  read_field(j, "price_hi", c.price_hi);
  read_field(j, "seed", c.seed);
  return c;
}

bess::DqnConfig dqn_config_from_json(const json& j) {
  bess::DqnConfig c;
  read_field(j, "total_steps", c.total_steps);
  read_field(j, "exploration_fraction", c.exploration_fraction);
  read_field(j, "epsilon_start", c.epsilon_start);
  read_field(j, "epsilon_end", c.epsilon_end);
  read_field(j, "learning_rate", c.learning_rate);
  read_field(j, "batch_size", c.batch_size);
  read_field(j, "buffer_capacity", c.buffer_capacity);
  read_field(j, "gradient_steps_per_env_step", c.gradient_steps_per_env_step);
  read_field(j, "target_update_interval", c.target_update_interval);
  read_field(j, "learning_starts", c.learning_starts);
  read_field(j, "gamma", c.gamma);
  read_field(j, "seed", c.seed);
  read_field(j, "obs_normalization", c.obs_normalization);
  read_field(j, "hidden_sizes", c.hidden_sizes);
  read_field(j, "rms_decay", c.rms_decay);
  read_field(j, "rms_epsilon", c.rms_epsilon);
  read_field(j, "reward_scale", c.reward_scale);
  read_field(j, "grad_clip", c.grad_clip);
  if (const auto it = j.find("optimizer"); it != j.end()) {
    const auto name = it->get<std::string>();
    if (name == "sgd") c.optimizer = bess::Optimizer::Sgd;
    else if (name == "rmsprop") c.optimizer = bess::Optimizer::RmsProp;
    else throw std::invalid_argument("unknown optimizer '" + name + "'");
  }
  return c;
}

}  // namespace

extern "C" {

const char* bess_last_error(void) { return g_last_error.c_str(); }

void bess_battery_params_default(bess_battery_params* out) {
  if (!out) return;
  const bess::BatteryParams d;
  out->e_max_mwh = d.e_max;
  out->charge_rate_mw = d.charge_rate;
  out->discharge_rate_mw = d.discharge_rate;
  out->dt_hours = d.dt;
  out->eta = d.eta;
  out->beta = d.beta;
  out->self_discharge_soc_threshold = d.self_discharge_soc_threshold;
}

bess_status bess_series_load(const char* lmp_path, const char* solar_path,
                             const char* demand_path, bess_series** out) {
  if (!out || !lmp_path) return fail(BESS_ERR_INVALID_ARGUMENT, "lmp_path and out are required");
  return wrap([&] {
    bess::LoadOptions options;
    options.lmp_path = lmp_path;
    if (solar_path) options.solar_path = solar_path;
    if (demand_path) options.demand_path = demand_path;
    *out = new bess_series{bess::load_series(options)};
    return BESS_OK;
  });
}

bess_status bess_series_synthesize(const char* profile, int days, uint64_t seed,
                                   double solar_mean_mw, bess_series** out) {
  if (!out || !profile) return fail(BESS_ERR_INVALID_ARGUMENT, "profile and out are required");
  return wrap([&] {
    bess::SynthesisConfig config;
    const std::string name = profile;
    if (name == "winter") config.profile = bess::SeasonProfile::WinterLike;
    else if (name == "summer") config.profile = bess::SeasonProfile::SummerLike;
    else throw std::invalid_argument("profile must be 'winter' or 'summer'");
    config.days = days;
    config.seed = seed;
    config.solar_mean_mw = solar_mean_mw;
    *out = new bess_series{bess::synthesize(config)};
    return BESS_OK;
  });
}

bess_status bess_series_scale_pv(bess_series* series, double factor) {
  if (!series) return fail(BESS_ERR_INVALID_ARGUMENT, "series is required");
  return wrap([&] {
    bess::scale_pv(series->v, factor);
    return BESS_OK;
  });
}

bess_status bess_series_split(const bess_series* series, int train_weeks, int test_weeks,
                              bess_series** train_out, bess_series** test_out) {
  if (!series || !train_out || !test_out)
    return fail(BESS_ERR_INVALID_ARGUMENT, "series and both outputs are required");
  return wrap([&] {
    bess::SplitResult split = bess::chronological_split(series->v, train_weeks, test_weeks);
    *train_out = new bess_series{std::move(split.train)};
    *test_out = new bess_series{std::move(split.test)};
    return BESS_OK;
  });
}

bess_status bess_series_slice(const bess_series* series, size_t begin, size_t count,
                              bess_series** out) {
  if (!series || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "series and out are required");
  return wrap([&] {
    *out = new bess_series{series->v.slice(begin, count)};
    return BESS_OK;
  });
}

size_t bess_series_len(const bess_series* series) { return series ? series->v.size() : 0; }

int64_t bess_series_start_time(const bess_series* series) {
  return series ? series->v.start_time : 0;
}

int bess_series_has_demand(const bess_series* series) {
  return series && series->v.has_demand() ? 1 : 0;
}

static bess_status copy_column(const bess_series* series, const std::vector<double>& column,
                               double* out) {
  if (!series || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "series and out are required");
  if (column.size() != series->v.size())
    return fail(BESS_ERR_INSUFFICIENT_DATA, "series has no such column");
  std::memcpy(out, column.data(), column.size() * sizeof(double));
  return BESS_OK;
}

bess_status bess_series_lmp(const bess_series* series, double* out) {
  return copy_column(series, series ? series->v.lmp : std::vector<double>{}, out);
}

bess_status bess_series_solar(const bess_series* series, double* out) {
  return copy_column(series, series ? series->v.solar_mw : std::vector<double>{}, out);
}

bess_status bess_series_demand(const bess_series* series, double* out) {
  return copy_column(series, series ? series->v.demand_mw : std::vector<double>{}, out);
}

bess_status bess_series_write_csv(const bess_series* series, const char* lmp_path,
                                  const char* solar_path, const char* demand_path) {
  if (!series) return fail(BESS_ERR_INVALID_ARGUMENT, "series is required");
  return wrap([&] {
    if (lmp_path && *lmp_path) bess::write_lmp_csv(lmp_path, series->v);
    if (solar_path && *solar_path) bess::write_solar_csv_hourly(solar_path, series->v);
    if (demand_path && *demand_path) bess::write_demand_csv_hourly(demand_path, series->v);
    return BESS_OK;
  });
}

void bess_series_free(bess_series* series) { delete series; }

bess_status bess_format_timestamp(int64_t unix_seconds, char* buf, size_t buf_len) {
  if (!buf || buf_len < 21) return fail(BESS_ERR_INVALID_ARGUMENT, "buffer too small");
  return wrap([&] {
    const std::string s = bess::format_timestamp(unix_seconds);
    if (s.size() + 1 > buf_len) throw std::invalid_argument("buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return BESS_OK;
  });
}

bess_status bess_policy_rules(double buy_below, double sell_above, bess_policy** out) {
  if (!out) return fail(BESS_ERR_INVALID_ARGUMENT, "out is required");
  return wrap([&] {
    *out = new bess_policy{
        std::make_unique<bess::RulesPolicy>(bess::Thresholds{buy_below, sell_above})};
    return BESS_OK;
  });
}

bess_status bess_policy_sell_only(bess_policy** out) {
  if (!out) return fail(BESS_ERR_INVALID_ARGUMENT, "out is required");
  return wrap([&] {
    *out = new bess_policy{std::make_unique<bess::SellOnlyPolicy>()};
    return BESS_OK;
  });
}

bess_status bess_policy_rhc(const bess_battery_params* params, const char* config_json,
                            const bess_series* primer, const bess_series* truth,
                            bess_policy** out) {
  if (!out) return fail(BESS_ERR_INVALID_ARGUMENT, "out is required");
  return wrap([&] {
    const json j = parse_config(config_json);
    bess::RhcConfig config;
    read_field(j, "horizon_steps", config.horizon_steps);
    read_field(j, "replan_every", config.replan_every);
    read_field(j, "soc_grid", config.soc_grid);
    std::string forecaster_name = "seasonal_naive";
    read_field(j, "forecaster", forecaster_name);

    std::shared_ptr<bess::Forecaster> forecaster;
    if (forecaster_name == "seasonal_naive") {
      forecaster = std::make_shared<bess::SeasonalNaiveForecaster>();
    } else if (forecaster_name == "ground_truth") {
      if (!truth)
        throw std::invalid_argument("ground_truth forecaster needs the evaluation series");
      std::vector<double> timeline;
      if (primer) timeline = primer->v.lmp;
      timeline.insert(timeline.end(), truth->v.lmp.begin(), truth->v.lmp.end());
      forecaster = std::make_shared<bess::GroundTruthForecaster>(std::move(timeline));
    } else {
      throw std::invalid_argument("unknown forecaster '" + forecaster_name + "'");
    }

    auto policy = std::make_unique<bess::RhcPolicy>(std::move(forecaster), config,
                                                    to_params(params));
    if (primer) policy->prime(primer->v.lmp, primer->v.solar_mw);
    *out = new bess_policy{std::move(policy)};
    return BESS_OK;
  });
}

void bess_policy_free(bess_policy* policy) { delete policy; }

bess_status bess_ga_tune(const bess_series* train, const bess_battery_params* params,
                         const char* config_json, double* buy_below_out,
                         double* sell_above_out, double* fitness_out) {
  if (!train || !buy_below_out || !sell_above_out)
    return fail(BESS_ERR_INVALID_ARGUMENT, "train series and threshold outputs are required");
  return wrap([&] {
    const bess::GaConfig config = ga_config_from_json(parse_config(config_json));
    const bess::GaResult result = bess::ga_tune(train->v, to_params(params), config);
    *buy_below_out = result.best.buy_below;
    *sell_above_out = result.best.sell_above;
    if (fitness_out) *fitness_out = result.fitness;
    return BESS_OK;
  });
}

bess_status bess_dqn_train(const bess_series* train, const bess_battery_params* params,
                           const char* config_json, bess_policy** out) {
  if (!train || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "train series and out are required");
  return wrap([&] {
    const bess::DqnConfig config = dqn_config_from_json(parse_config(config_json));
    auto policy =
        std::make_unique<bess::DqnPolicy>(bess::train_dqn(train->v, to_params(params), config));
    bess::DqnPolicy* raw = policy.get();
    *out = new bess_policy{std::move(policy), raw};
    return BESS_OK;
  });
}

bess_status bess_dqn_save(const bess_policy* policy, const char* path) {
  if (!policy || !path) return fail(BESS_ERR_INVALID_ARGUMENT, "policy and path are required");
  if (!policy->dqn) return fail(BESS_ERR_INVALID_ARGUMENT, "policy is not a DQN policy");
  return wrap([&] {
    bess::save_weights(policy->dqn->net(), path);
    return BESS_OK;
  });
}

bess_status bess_dqn_norm_dim(const bess_policy* policy, size_t* out) {
  if (!policy || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "policy and out are required");
  if (!policy->dqn) return fail(BESS_ERR_INVALID_ARGUMENT, "policy is not a DQN policy");
  *out = policy->dqn->norm().dim();
  return BESS_OK;
}

bess_status bess_dqn_norm(const bess_policy* policy, double* mean_out, double* std_out) {
  if (!policy || !mean_out || !std_out)
    return fail(BESS_ERR_INVALID_ARGUMENT, "policy and outputs are required");
  if (!policy->dqn) return fail(BESS_ERR_INVALID_ARGUMENT, "policy is not a DQN policy");
  return wrap([&] {
    const bess::RunningNorm& norm = policy->dqn->norm();
    const std::vector<double>& mean = norm.mean();
    const std::vector<double> sd = norm.stddev();
    std::memcpy(mean_out, mean.data(), mean.size() * sizeof(double));
    std::memcpy(std_out, sd.data(), sd.size() * sizeof(double));
    return BESS_OK;
  });
}

bess_status bess_dqn_load(const char* path, const double* mean, const double* stddev,
                          size_t dim, bess_policy** out) {
  if (!path || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "path and out are required");
  return wrap([&] {
    bess::QNetwork net = bess::load_weights(path);
    bess::RunningNorm norm(net.input_dim());
    if (mean && stddev) {
      if (dim != net.input_dim())
        throw std::invalid_argument("normalisation dimension does not match the network");
      norm.set(std::vector<double>(mean, mean + dim),
               std::vector<double>(stddev, stddev + dim));
    }
    auto policy = std::make_unique<bess::DqnPolicy>(std::move(net), std::move(norm));
    bess::DqnPolicy* raw = policy.get();
    *out = new bess_policy{std::move(policy), raw};
    return BESS_OK;
  });
}

bess_status bess_evaluate(bess_policy* policy, const bess_series* series,
                          const bess_battery_params* params, double initial_solar_mwh,
                          double initial_grid_mwh, bess_run** out) {
  if (!policy || !series || !out)
    return fail(BESS_ERR_INVALID_ARGUMENT, "policy, series and out are required");
  return wrap([&] {
    const bess::BatteryState initial{initial_solar_mwh, initial_grid_mwh};
    *out = new bess_run{
        bess::evaluate_policy(*policy->v, series->v, to_params(params), initial)};
    return BESS_OK;
  });
}

bess_status bess_dp_oracle(const bess_series* series, const bess_battery_params* params,
                           const char* mode, double soc_grid, double initial_solar_mwh,
                           double initial_grid_mwh, bess_run** out) {
  if (!series || !mode || !out)
    return fail(BESS_ERR_INVALID_ARGUMENT, "series, mode and out are required");
  return wrap([&] {
    bess::OracleConfig config;
    const std::string name = mode;
    if (name == "exact") config.mode = bess::OracleMode::Exact;
    else if (name == "relaxed") config.mode = bess::OracleMode::Relaxed;
    else throw std::invalid_argument("mode must be 'exact' or 'relaxed'");
    config.soc_grid = soc_grid;
    const bess::BatteryState initial{initial_solar_mwh, initial_grid_mwh};
    *out = new bess_run{bess::dp_oracle(series->v, to_params(params), config, initial)};
    return BESS_OK;
  });
}

size_t bess_run_len(const bess_run* run) { return run ? run->v.size() : 0; }

double bess_run_total_profit(const bess_run* run) { return run ? run->v.total_profit : 0.0; }

int64_t bess_run_start_time(const bess_run* run) { return run ? run->v.start_time : 0; }

double bess_run_dt_hours(const bess_run* run) { return run ? run->v.dt : 0.0; }

int bess_run_has_demand(const bess_run* run) {
  return run && !run->v.demand_mw.empty() ? 1 : 0;
}

bess_status bess_run_actions(const bess_run* run, int* out) {
  if (!run || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "run and out are required");
  for (std::size_t t = 0; t < run->v.size(); ++t)
    out[t] = static_cast<int>(run->v.actions[t]);
  return BESS_OK;
}

static bess_status copy_run_column(const bess_run* run, const std::vector<double>& column,
                                   double* out) {
  if (!run || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "run and out are required");
  if (column.size() != run->v.size())
    return fail(BESS_ERR_INSUFFICIENT_DATA, "run has no such column");
  std::memcpy(out, column.data(), column.size() * sizeof(double));
  return BESS_OK;
}

bess_status bess_run_rewards(const bess_run* run, double* out) {
  return copy_run_column(run, run ? run->v.rewards : std::vector<double>{}, out);
}

bess_status bess_run_cum_profit(const bess_run* run, double* out) {
  if (!run || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "run and out are required");
  return wrap([&] {
    const std::vector<double> curve = bess::cumulative_profit(run->v);
    std::memcpy(out, curve.data(), curve.size() * sizeof(double));
    return BESS_OK;
  });
}

bess_status bess_run_soc(const bess_run* run, double* out) {
  if (!run || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "run and out are required");
  for (std::size_t t = 0; t < run->v.size(); ++t) out[t] = run->v.soc_trace[t].total();
  return BESS_OK;
}

bess_status bess_run_soc_solar(const bess_run* run, double* out) {
  if (!run || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "run and out are required");
  for (std::size_t t = 0; t < run->v.size(); ++t) out[t] = run->v.soc_trace[t].e_solar;
  return BESS_OK;
}

bess_status bess_run_soc_grid(const bess_run* run, double* out) {
  if (!run || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "run and out are required");
  for (std::size_t t = 0; t < run->v.size(); ++t) out[t] = run->v.soc_trace[t].e_grid;
  return BESS_OK;
}

bess_status bess_run_lmp(const bess_run* run, double* out) {
  return copy_run_column(run, run ? run->v.lmp : std::vector<double>{}, out);
}

bess_status bess_run_solar(const bess_run* run, double* out) {
  return copy_run_column(run, run ? run->v.solar_mw : std::vector<double>{}, out);
}

bess_status bess_run_net_load(const bess_run* run, double* out) {
  if (!run || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "run and out are required");
  return wrap([&] {
    const std::vector<double> series = bess::net_load_series(run->v);
    std::memcpy(out, series.data(), series.size() * sizeof(double));
    return BESS_OK;
  });
}

void bess_run_free(bess_run* run) { delete run; }

bess_status bess_run_decompose(const bess_run* run, bess_profit_split* out) {
  if (!run || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "run and out are required");
  return wrap([&] {
    const bess::ProfitDecomposition d = bess::decompose_profit(run->v);
    out->solar_sell = d.solar_sell;
    out->solar_battery = d.solar_battery;
    out->grid_battery = d.grid_battery;
    return BESS_OK;
  });
}

bess_status bess_diurnal_profile(const bess_run* const* runs, size_t n_runs,
                                 double* solar_out, double* grid_out) {
  if (!runs || n_runs == 0 || !solar_out || !grid_out)
    return fail(BESS_ERR_INVALID_ARGUMENT, "runs and outputs are required");
  return wrap([&] {
    bess::SeedEnsemble ensemble;
    for (size_t i = 0; i < n_runs; ++i) {
      if (!runs[i]) throw std::invalid_argument("NULL run in ensemble");
      ensemble.runs.push_back(runs[i]->v);
      ensemble.seeds.push_back(i);
    }
    const bess::DiurnalProfile profile = bess::diurnal_soc_profile(ensemble);
    std::memcpy(solar_out, profile.solar_mwh.data(), 24 * sizeof(double));
    std::memcpy(grid_out, profile.grid_mwh.data(), 24 * sizeof(double));
    return BESS_OK;
  });
}

bess_status bess_run_cross_correlation(const bess_run* run, bess_period_stats* out) {
  if (!run || !out) return fail(BESS_ERR_INVALID_ARGUMENT, "run and out are required");
  if (run->v.demand_mw.empty())
    return fail(BESS_ERR_INSUFFICIENT_DATA, "run has no demand data");
  return wrap([&] {
    const std::vector<double> net_load = bess::net_load_series(run->v);
    const bess::CrossCorrelation cc =
        bess::cross_correlation(net_load, run->v.demand_mw, run->v.start_time);
    for (int p = 0; p < 4; ++p) {
      const bess::DayPeriodStats& s = cc.periods[static_cast<std::size_t>(p)];
      std::snprintf(out[p].label, sizeof out[p].label, "%s", s.label.c_str());
      out[p].count = s.count;
      out[p].mean = s.mean;
      out[p].min = s.min;
      out[p].max = s.max;
      out[p].q25 = s.q25;
      out[p].q50 = s.q50;
      out[p].q75 = s.q75;
    }
    return BESS_OK;
  });
}

bess_status bess_mean_ci(const double* values, size_t n, double z, double* mean_out,
                         double* half_width_out) {
  if (!values || n == 0 || !mean_out || !half_width_out)
    return fail(BESS_ERR_INVALID_ARGUMENT, "values and outputs are required");
  return wrap([&] {
    std::vector<std::vector<double>> curves;
    curves.reserve(n);
    for (size_t i = 0; i < n; ++i) curves.push_back({values[i]});
    const bess::MeanCi ci = bess::mean_ci(curves, z);
    *mean_out = ci.mean[0];
    *half_width_out = ci.upper[0] - ci.mean[0];
    return BESS_OK;
  });
}

}  // extern "C"
