/*
 * bpsim: slotted simulator for biased backpressure routing in
 * multi-commodity multi-hop queueing networks.
 *
 * C interface. All objects are opaque handles created and destroyed through
 * this API. Every fallible call returns a bpsim_status; on failure a
 * human-readable message is available from bpsim_last_error() on the same
 * thread until the next failing call.
 *
 * Strings returned through `char**` out-parameters are owned by the caller
 * and must be released with bpsim_string_free().
 */
#ifndef BPSIM_BPSIM_H
#define BPSIM_BPSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(BPSIM_BUILDING_LIBRARY)
#  define BPSIM_API __attribute__((visibility("default")))
#else
#  define BPSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 2 and 3 double as the CLI exit codes. */
typedef enum bpsim_status {
  BPSIM_OK = 0,
  BPSIM_ERR_ARGUMENT = 1,  /* null handle or malformed argument */
  BPSIM_ERR_CONFIG = 2,    /* invalid configuration */
  BPSIM_ERR_RUNTIME = 3,   /* failure while simulating or writing output */
  BPSIM_ERR_UNDEFINED = 4  /* requested statistic is not defined for this run */
} bpsim_status;

typedef struct bpsim_config bpsim_config;
typedef struct bpsim_result bpsim_result;

BPSIM_API const char* bpsim_version(void);
BPSIM_API const char* bpsim_last_error(void);
BPSIM_API void bpsim_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

/* Parses the key = value config format and validates it. */
BPSIM_API bpsim_status bpsim_config_parse(const char* text, bpsim_config** out);
BPSIM_API bpsim_status bpsim_config_load(const char* path, bpsim_config** out);
/* The built-in 8x8 grid, eight-flow preset at shared rate `lambda`.
 * `algorithm` may be NULL for the default (qlsp-bp). */
BPSIM_API bpsim_status bpsim_config_eight_flow_scenario(double lambda, const char* algorithm,
                                                   bpsim_config** out);
BPSIM_API void bpsim_config_free(bpsim_config* config);

BPSIM_API bpsim_status bpsim_config_set_seed(bpsim_config* config, uint64_t seed);
BPSIM_API bpsim_status bpsim_config_set_slots(bpsim_config* config, uint64_t slots);
BPSIM_API bpsim_status bpsim_config_set_lambda(bpsim_config* config, double lambda);
BPSIM_API bpsim_status bpsim_config_set_algorithm(bpsim_config* config, const char* name);
/* NULL clears the trace path. */
BPSIM_API bpsim_status bpsim_config_set_trace_path(bpsim_config* config, const char* path);
/* Renders the config in the text format bpsim_config_parse accepts. */
BPSIM_API bpsim_status bpsim_config_to_text(const bpsim_config* config, char** out);

/* ---- single runs ------------------------------------------------------ */

BPSIM_API bpsim_status bpsim_run(const bpsim_config* config, bpsim_result** out);
BPSIM_API void bpsim_result_free(bpsim_result* result);

BPSIM_API uint64_t bpsim_result_slots(const bpsim_result* result);
BPSIM_API uint64_t bpsim_result_arrivals(const bpsim_result* result);
BPSIM_API uint64_t bpsim_result_delivered(const bpsim_result* result);
/* BPSIM_ERR_UNDEFINED when no packet was delivered. */
BPSIM_API bpsim_status bpsim_result_avg_delay(const bpsim_result* result, double* out);
BPSIM_API bpsim_status bpsim_result_p95_delay(const bpsim_result* result, double* out);
BPSIM_API double bpsim_result_mean_total_queue(const bpsim_result* result);
/* BPSIM_ERR_UNDEFINED for runs shorter than 100 slots. */
BPSIM_API bpsim_status bpsim_result_stability(const bpsim_result* result, double* slope,
                                              int* stable);
/* Number of per-slot self-check failures (bias bounds, conservation, delay
 * lower bound). Zero for a correct run. */
BPSIM_API uint64_t bpsim_result_check_failures(const bpsim_result* result);
/* One results line in the sweep CSV format, without trailing newline. */
BPSIM_API bpsim_status bpsim_result_csv_row(const bpsim_result* result, char** out);

/* ---- sweeps ----------------------------------------------------------- */

/* Column header shared by run and sweep output (static storage). */
BPSIM_API const char* bpsim_csv_header(void);

/* Runs every (algorithm, lambda, seed) cell over `base` using up to `jobs`
 * threads and returns the CSV table (header included). `lambdas` is
 * "start:stop:step" or a comma list, `algorithms` a comma list, `seeds` a
 * comma list or "a:b". Failed cells appear as rows with stable=error and
 * do not abort the sweep; `failed_cells` (nullable) receives their count. */
BPSIM_API bpsim_status bpsim_sweep(const bpsim_config* base, const char* lambdas,
                                   const char* algorithms, const char* seeds,
                                   unsigned jobs, char** csv_out, size_t* failed_cells);

#ifdef __cplusplus
}
#endif

#endif /* BPSIM_BPSIM_H */
