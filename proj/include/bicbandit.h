/* C API for the bicbandit core: opaque handles, integer status codes, and
 * JSON documents at the boundary. Every char* returned through an out
 * parameter is owned by the caller and must be released with
 * bic_string_free(). On failure, bic_last_error() returns a thread-local
 * message describing what went wrong. */
#ifndef BICBANDIT_H
#define BICBANDIT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bic_status {
  BIC_OK = 0,
  BIC_ERROR = 1,      /* internal failure */
  BIC_EINVAL = 2,     /* validation error: bad input or precondition */
  BIC_EAUDIT = 3,     /* an audited margin fell below the configured floor */
  BIC_ETOOLARGE = 4,  /* exact computation exceeds the configured cap */
} bic_status;

typedef struct bic_instance_s bic_instance;

const char* bic_version(void);
const char* bic_last_error(void);
void bic_string_free(char* s);

/* instance_json: {"arms":[{"kind":"beta","a":..,"b":..} |
 *                         {"kind":"atoms","support":[[v,p],..]}, ...]} */
bic_status bic_instance_parse(const char* instance_json, bic_instance** out);
void bic_instance_free(bic_instance* inst);
int bic_instance_arms(const bic_instance* inst);

/* Prior-dependent parameters (eps_TS, delta_TS, N_TS, G_pad, N_pad, lambda,
 * N_boot, p_boot, ...) plus minimizer provenance, as JSON. options_json may
 * carry {"c_ts":..,"c_pad":..,"lambda":..,"n_cap":..,"beta_grid":..}. */
bic_status bic_params_json(const bic_instance* inst, const char* options_json, char** out_json);

/* Sample-complexity lower bound report. */
bic_status bic_lower_bound_json(const bic_instance* inst, char** out_json);

/* Explorability classification per arm. */
bic_status bic_explore_set_json(const bic_instance* inst, char** out_json);

/* Exact recommendation-game solve for arm j (0-based) at depth N:
 * {"value":..,"q_star":[..],"policy":{..}}. */
bic_status bic_game_solve_json(const bic_instance* inst, int arm, int64_t depth,
                               char** out_json);

/* Full experiment per the config document; writes artifacts when the config
 * names an output directory and returns summary.json. Returns BIC_EAUDIT when
 * an audited margin falls below the floor. */
bic_status bic_run_experiment(const char* config_json, char** summary_json);

/* Margins audit only (config: instance + algorithm + audit block); returns
 * {"summary":{...},"csv":"..."} and BIC_EAUDIT below the floor. */
bic_status bic_audit_json(const char* config_json, char** out_json);

/* Parameter sweep along one axis; returns the combined CSV.
 * config: harness config + {"family":{...}}, axis in {K,M,N,sigma,delta}. */
bic_status bic_sweep_csv(const char* config_json, const char* axis, const char* values_json,
                         char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* BICBANDIT_H */
