/* Public C interface to the distortion-side-information source-coding
 * toolkit: exact rate-distortion solvers for small discrete instances,
 * the erasure-interpolation lossless coder, transform quantizers, the
 * rate-penalty analyzer, and the reproducible experiment runner.
 *
 * All functions return a dsi_status; every non-OK return leaves a
 * human-readable detail in dsi_last_error_message() (thread-local).
 * Objects are opaque handles released with their matching _free call.
 */
#ifndef DSI_H
#define DSI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsi_status {
  DSI_OK = 0,
  DSI_ERR_INVALID_ARGUMENT = 1,
  DSI_ERR_PARSE = 2,
  DSI_ERR_UNSUPPORTED = 3,
  DSI_ERR_NUMERIC = 4,
  DSI_ERR_IO = 5,
  DSI_ERR_CHECK_FAILED = 6 /* a verification ran and exceeded its tolerance */
} dsi_status;

const char* dsi_status_name(dsi_status status);
const char* dsi_last_error_message(void);
const char* dsi_version(void);

/* Frees strings returned through char** out-parameters. */
void dsi_string_free(char* s);

/* ---- discrete instances ---- */

typedef struct dsi_instance dsi_instance;

/* Structured-text form; see the project README for the schema. */
dsi_status dsi_instance_from_json(const char* text, dsi_instance** out);
dsi_status dsi_instance_from_file(const char* path, dsi_instance** out);
dsi_status dsi_instance_to_json(const dsi_instance* instance, char** out_text);
dsi_status dsi_instance_dims(const dsi_instance* instance, size_t* nx,
                             size_t* nxhat, size_t* nq);
void dsi_instance_free(dsi_instance* instance);

/* I(a;b) in nats of a rows x cols joint probability matrix (row-major). */
dsi_status dsi_mutual_information(const double* joint, size_t rows, size_t cols,
                                  double* out_nats);

/* ---- rate-distortion solvers ---- */

enum {
  DSI_SCENARIO_NONE = 0,
  DSI_SCENARIO_DEC = 1,
  DSI_SCENARIO_ENC = 2,
  DSI_SCENARIO_BOTH = 3
};

typedef struct dsi_solver_options {
  const double* slopes;  /* NULL: 32 log-spaced in [0.05, 50] */
  size_t num_slopes;
  int max_iterations;    /* <= 0: 10000 */
  double rel_tolerance;  /* <= 0: 1e-9 */
  size_t aux_cardinality; /* 0: |recon alphabet| + 1 */
  int restarts;          /* <= 0: 8 */
  uint64_t seed;
} dsi_solver_options;

typedef struct dsi_rd_point {
  double slope;
  double rate_nats;
  double distortion;
  int iterations;
  int converged;
} dsi_rd_point;

typedef struct dsi_curve dsi_curve;

dsi_status dsi_solve(const dsi_instance* instance, int scenario,
                     const dsi_solver_options* options, dsi_curve** out);
size_t dsi_curve_size(const dsi_curve* curve);
dsi_status dsi_curve_point(const dsi_curve* curve, size_t index, dsi_rd_point* out);
/* Linear interpolation at a distortion inside the swept range. */
dsi_status dsi_curve_rate_at(const dsi_curve* curve, double distortion,
                             double* rate_nats);
void dsi_curve_free(dsi_curve* curve);

/* Rate at exactly zero distortion (+HUGE_VAL if unattainable). Supported
 * for NONE, ENC and BOTH. */
dsi_status dsi_lossless_rate(const dsi_instance* instance, int scenario,
                             double* rate_nats);

/* ---- numerical equality checks ---- */

typedef struct dsi_equality_report {
  double max_gap_nats;
  double slope_at_max;
  double max_side_leakage_nats; /* encoder check only */
  int recon_constant_in_side;   /* decoder check only */
} dsi_equality_report;

/* R_ENC == R_BOTH for a uniform source over a group with difference
 * distortion; group_table is the row-major n x n composition table. */
dsi_status dsi_check_theorem1(const dsi_instance* instance,
                              const unsigned* group_table,
                              const dsi_solver_options* options,
                              dsi_equality_report* out);

/* R_DEC == R_NONE for separable side_scale(q) * base(x, xhat) distortion. */
dsi_status dsi_check_theorem3(const dsi_instance* instance,
                              const dsi_solver_options* options,
                              dsi_equality_report* out);

/* ---- erasure-interpolation coder over GF(2^m), m in {3, 4, 8} ---- */

/* Fit the degree-(k-1) polynomial through the k mask-1 samples; coeffs_out
 * receives k coefficients in ascending degree order. */
dsi_status dsi_mds_encode(unsigned field_bits, const unsigned* symbols,
                          const unsigned char* mask, size_t n, size_t k,
                          unsigned* coeffs_out);
/* Evaluate a coefficient vector back to all n positions. */
dsi_status dsi_mds_reconstruct(unsigned field_bits, const unsigned* coeffs,
                               size_t k, size_t n, unsigned* symbols_out);
/* Pack coefficients m bits each, big-endian within bytes; *num_bytes is
 * in/out (capacity in, bytes written out). */
dsi_status dsi_mds_pack(unsigned field_bits, const unsigned* coeffs, size_t k,
                        unsigned char* bytes_out, size_t* num_bytes);

typedef struct dsi_mds_rates {
  double ignore_bits;
  double tell_decoder_bits;
  double scheme_bits;
} dsi_mds_rates;

dsi_status dsi_mds_rate_report(size_t n, size_t k, unsigned field_bits,
                               dsi_mds_rates* out);

/* ---- rate-penalty analyzer ---- */

enum {
  DSI_SIDE_EXPONENTIAL = 0, /* param1 = tau */
  DSI_SIDE_UNIFORM01 = 1,
  DSI_SIDE_LOGNORMAL = 2,   /* param1 = M, param2 = Q^2 */
  DSI_SIDE_PARETO = 3,      /* param1 = a, param2 = b */
  DSI_SIDE_GAMMA = 4,       /* param1 = a, param2 = b */
  DSI_SIDE_PATHOLOGICAL = 5, /* param1 = eps */
  DSI_SIDE_POSITIVE_CAUCHY = 6
};

typedef struct dsi_side_distribution {
  int family;
  double param1;
  double param2;
} dsi_side_distribution;

/* (1/2)(ln E[q] - E[ln q]) in nats; +HUGE_VAL when the mean diverges. */
dsi_status dsi_rate_gap_closed_form(const dsi_side_distribution* dist,
                                    double* gap_nats);

typedef struct dsi_gap_estimate {
  double estimate;
  double std_error;
  long long samples;
  int diverging;
} dsi_gap_estimate;

dsi_status dsi_rate_gap_monte_carlo(const dsi_side_distribution* dist,
                                    long long samples, uint64_t seed,
                                    dsi_gap_estimate* out);

/* High-resolution rates under q-scaled quadratic distortion; their
 * difference equals the closed-form gap. */
dsi_status dsi_high_resolution_rates(double source_entropy_nats,
                                     double distortion,
                                     const dsi_side_distribution* dist,
                                     double* r_both, double* r_dec);

/* ---- experiment runner ---- */

/* Runs a built-in preset or a JSON config file. out_dir receives the
 * artifacts; format is "csv" or "json"; use_seed != 0 overrides the config
 * seed with seed; jobs <= 0 uses all cores. On DSI_OK and
 * DSI_ERR_CHECK_FAILED, *summary_json (optional) receives the report. */
dsi_status dsi_run_preset(const char* name, const char* out_dir,
                          const char* format, uint64_t seed, int use_seed,
                          int jobs, char** summary_json);
dsi_status dsi_run_config_file(const char* path, const char* out_dir,
                               const char* format, uint64_t seed, int use_seed,
                               int jobs, char** summary_json);

size_t dsi_preset_count(void);
/* Pointers stay valid for the process lifetime. */
dsi_status dsi_preset_info(size_t index, const char** name, const char** tags,
                           const char** description);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DSI_H */
