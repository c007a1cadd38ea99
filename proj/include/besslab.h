/* C interface to the BESS arbitrage toolkit. All functions return a status
 * code; on failure bess_last_error() describes the most recent error on the
 * calling thread. Handles are opaque and must be released with the matching
 * _free function. Handles are not thread-safe individually, but independent
 * handles may be used from different threads concurrently. */
#ifndef BESSLAB_H
#define BESSLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bess_status {
  BESS_OK = 0,
  BESS_ERR_INVALID_ARGUMENT = 1,
  BESS_ERR_SCHEMA = 2,
  BESS_ERR_ALIGNMENT = 3,
  BESS_ERR_INSUFFICIENT_DATA = 4,
  BESS_ERR_LATTICE = 5,
  BESS_ERR_DIVERGENCE = 6,
  BESS_ERR_INSUFFICIENT_HISTORY = 7,
  BESS_ERR_IO = 8,
  BESS_ERR_UNKNOWN = 9
} bess_status;

/* Message for the last failure on this thread; empty string if none. The
 * pointer stays valid until the next failing call on the same thread. */
const char* bess_last_error(void);

/* Action encoding shared with the Q-network head. */
enum { BESS_ACTION_BUY = 0, BESS_ACTION_SELL = 1, BESS_ACTION_NULL = 2 };

typedef struct bess_battery_params {
  double e_max_mwh;
  double charge_rate_mw;
  double discharge_rate_mw;
  double dt_hours;
  double eta;
  double beta;
  double self_discharge_soc_threshold;
} bess_battery_params;

/* Fills in the reference 400 MWh / 100 MW configuration. */
void bess_battery_params_default(bess_battery_params* out);

/* ---- time series ---------------------------------------------------- */

typedef struct bess_series bess_series;

/* Loads and aligns the CSV inputs. solar_path and demand_path may be NULL or
 * empty; a missing solar input yields an all-zero plant. */
bess_status bess_series_load(const char* lmp_path, const char* solar_path,
                             const char* demand_path, bess_series** out);

/* Deterministic synthetic scenario. profile: "winter" or "summer". */
bess_status bess_series_synthesize(const char* profile, int days, uint64_t seed,
                                   double solar_mean_mw, bess_series** out);

bess_status bess_series_scale_pv(bess_series* series, double factor);
bess_status bess_series_split(const bess_series* series, int train_weeks, int test_weeks,
                              bess_series** train_out, bess_series** test_out);
bess_status bess_series_slice(const bess_series* series, size_t begin, size_t count,
                              bess_series** out);

size_t bess_series_len(const bess_series* series);
int64_t bess_series_start_time(const bess_series* series);
int bess_series_has_demand(const bess_series* series);
/* Buffers must hold bess_series_len doubles. */
bess_status bess_series_lmp(const bess_series* series, double* out);
bess_status bess_series_solar(const bess_series* series, double* out);
bess_status bess_series_demand(const bess_series* series, double* out);

/* Writes lmp.csv (15-minute) plus hourly solar.csv / demand.csv. Any path may
 * be NULL to skip that file. */
bess_status bess_series_write_csv(const bess_series* series, const char* lmp_path,
                                  const char* solar_path, const char* demand_path);

void bess_series_free(bess_series* series);

/* Formats unix seconds as an ISO-8601 UTC stamp. buf_len must be >= 21. */
bess_status bess_format_timestamp(int64_t unix_seconds, char* buf, size_t buf_len);

/* ---- policies -------------------------------------------------------- */

typedef struct bess_policy bess_policy;

bess_status bess_policy_rules(double buy_below, double sell_above, bess_policy** out);
bess_status bess_policy_sell_only(bess_policy** out);

/* Receding-horizon controller. config_json keys (all optional):
 *   horizon_steps (96), replan_every (1), soc_grid (0.25),
 *   forecaster: "seasonal_naive" (default) | "ground_truth".
 * primer seeds the controller's history (typically the training split tail).
 * truth supplies the future the ground-truth forecaster reads; it must be the
 * evaluation series, and primer must immediately precede it. */
bess_status bess_policy_rhc(const bess_battery_params* params, const char* config_json,
                            const bess_series* primer, const bess_series* truth,
                            bess_policy** out);

void bess_policy_free(bess_policy* policy);

/* ---- genetic threshold tuning ---------------------------------------- */

/* config_json keys (all optional): population_size (32), generations (64),
 * tournament_size (3), crossover_rate (0.9), mutation_rate (0.2),
 * mutation_sigma (5), price_lo (0), price_hi (200), seed (0). */
bess_status bess_ga_tune(const bess_series* train, const bess_battery_params* params,
                         const char* config_json, double* buy_below_out,
                         double* sell_above_out, double* fitness_out);

/* ---- DQN -------------------------------------------------------------- */

/* config_json keys (all optional): total_steps (200000), exploration_fraction
 * (0.9685), epsilon_start (1), epsilon_end (0.05), learning_rate (1e-3),
 * batch_size (32), buffer_capacity (50000), gradient_steps_per_env_step (1),
 * target_update_interval (500), learning_starts (1000), gamma (0.99), seed
 * (0), obs_normalization (true), hidden_sizes ([64,64]), optimizer
 * ("sgd"|"rmsprop"), rms_decay (0.99), rms_epsilon (1e-8), reward_scale
 * (1e-3), grad_clip (10). */
bess_status bess_dqn_train(const bess_series* train, const bess_battery_params* params,
                           const char* config_json, bess_policy** out);

/* Binary weight file as documented in the weight-file format. */
bess_status bess_dqn_save(const bess_policy* policy, const char* path);

/* Observation dimension of the normalisation attached to a DQN policy. */
bess_status bess_dqn_norm_dim(const bess_policy* policy, size_t* out);
/* Buffers must hold bess_dqn_norm_dim doubles each. */
bess_status bess_dqn_norm(const bess_policy* policy, double* mean_out, double* std_out);

/* Rebuilds a greedy policy from saved weights plus normalisation constants. */
bess_status bess_dqn_load(const char* path, const double* mean, const double* stddev,
                          size_t dim, bess_policy** out);

/* ---- evaluation and planning ----------------------------------------- */

typedef struct bess_run bess_run;

bess_status bess_evaluate(bess_policy* policy, const bess_series* series,
                          const bess_battery_params* params, double initial_solar_mwh,
                          double initial_grid_mwh, bess_run** out);

/* Perfect-foresight benchmark. mode: "exact" or "relaxed". */
bess_status bess_dp_oracle(const bess_series* series, const bess_battery_params* params,
                           const char* mode, double soc_grid, double initial_solar_mwh,
                           double initial_grid_mwh, bess_run** out);

size_t bess_run_len(const bess_run* run);
double bess_run_total_profit(const bess_run* run);
int64_t bess_run_start_time(const bess_run* run);
double bess_run_dt_hours(const bess_run* run);
int bess_run_has_demand(const bess_run* run);

/* Column getters; each buffer must hold bess_run_len entries. Actions use the
 * BESS_ACTION_* encoding. */
bess_status bess_run_actions(const bess_run* run, int* out);
bess_status bess_run_rewards(const bess_run* run, double* out);
bess_status bess_run_cum_profit(const bess_run* run, double* out);
bess_status bess_run_soc(const bess_run* run, double* out);
bess_status bess_run_soc_solar(const bess_run* run, double* out);
bess_status bess_run_soc_grid(const bess_run* run, double* out);
bess_status bess_run_lmp(const bess_run* run, double* out);
bess_status bess_run_solar(const bess_run* run, double* out);
bess_status bess_run_net_load(const bess_run* run, double* out);

void bess_run_free(bess_run* run);

/* ---- metrics ---------------------------------------------------------- */

typedef struct bess_profit_split {
  double solar_sell;
  double solar_battery;
  double grid_battery;
} bess_profit_split;

bess_status bess_run_decompose(const bess_run* run, bess_profit_split* out);

/* Mean hourly stored energy by provenance across runs. Both outputs take 24
 * doubles. */
bess_status bess_diurnal_profile(const bess_run* const* runs, size_t n_runs,
                                 double* solar_out, double* grid_out);

typedef struct bess_period_stats {
  char label[8]; /* "21-06", "06-12", "12-18", "18-21" */
  size_t count;
  double mean;
  double min;
  double max;
  double q25;
  double q50;
  double q75;
} bess_period_stats;

/* Net-load / centered-demand correlation summaries; requires demand data.
 * out must hold 4 entries. */
bess_status bess_run_cross_correlation(const bess_run* run, bess_period_stats* out);

/* Mean and half-width of the z-score confidence interval over n values
 * (sample standard deviation; half-width 0 when n == 1). */
bess_status bess_mean_ci(const double* values, size_t n, double z, double* mean_out,
                         double* half_width_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BESSLAB_H */
