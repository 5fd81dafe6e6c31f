/* SPDX-License-Identifier: Apache-2.0 */
#ifndef HOM4_H
#define HOM4_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(HOM4_BUILDING)
#define HOM4_API __declspec(dllexport)
#else
#define HOM4_API __declspec(dllimport)
#endif
#else
#define HOM4_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns a status; on failure hom4_last_error() describes it. */
typedef enum hom4_status {
  HOM4_OK = 0,
  HOM4_BAD_ARGUMENT = 1,
  HOM4_NON_ZERO_MEAN = 2,
  HOM4_GRID_MISMATCH = 3,
  HOM4_NOT_ELLIPTIC = 4,
  HOM4_SYMMETRY_VIOLATION = 5,
  HOM4_BAD_PARAMETERS = 6,
  HOM4_NO_CONVERGENCE = 7,
  HOM4_SOLENOIDALITY_VIOLATION = 8,
  HOM4_NOT_SOLENOIDAL = 9,
  HOM4_UNSUPPORTED_ORDER = 10,
  HOM4_PROPERTY_VIOLATION = 11,
  HOM4_IO = 12,
  HOM4_INTERNAL = 99
} hom4_status;

typedef struct hom4_config hom4_config;
typedef struct hom4_cell hom4_cell;
typedef struct hom4_report hom4_report;

HOM4_API const char* hom4_version(void);
/* Message of the last failed call on this thread; empty if none. */
HOM4_API const char* hom4_last_error(void);
HOM4_API const char* hom4_status_name(hom4_status s);
/* 0 selects the hardware concurrency. */
HOM4_API hom4_status hom4_set_threads(int threads);
/* Strings returned through char** out-parameters are released here. */
HOM4_API void hom4_string_free(char* s);

/* Configuration. */
HOM4_API hom4_status hom4_config_default(hom4_config** out);
HOM4_API hom4_status hom4_config_load(const char* path, hom4_config** out);
HOM4_API hom4_status hom4_config_parse(const char* json_text, hom4_config** out);
HOM4_API void hom4_config_free(hom4_config* cfg);
HOM4_API hom4_status hom4_config_set_seed(hom4_config* cfg, uint64_t seed);
HOM4_API hom4_status hom4_config_set_dealias(hom4_config* cfg, int dealias);
HOM4_API hom4_status hom4_config_set_output_dir(hom4_config* cfg, const char* dir);
HOM4_API hom4_status hom4_config_get_output_dir(const hom4_config* cfg, char** out);
HOM4_API hom4_status hom4_config_get_threads(const hom4_config* cfg, int* out);
/* Number of sweep values and 1/eps of entry `index`. */
HOM4_API hom4_status hom4_config_eps_count(const hom4_config* cfg, int* out);
HOM4_API hom4_status hom4_config_eps_inverse(const hom4_config* cfg, int index, int* out);
HOM4_API hom4_status hom4_config_to_json(const hom4_config* cfg, char** out);

/* Cell problems. */
HOM4_API hom4_status hom4_cell_solve(const hom4_config* cfg, hom4_cell** out);
HOM4_API void hom4_cell_free(hom4_cell* cell);
HOM4_API hom4_status hom4_cell_dim(const hom4_cell* cell, int* out);
/* Writes d^4 components a_hat[((i d + j) d + k) d + m]. */
HOM4_API hom4_status hom4_cell_a_hat(const hom4_cell* cell, double* out, size_t len);
HOM4_API hom4_status hom4_cell_lambda0(const hom4_cell* cell, double* out);
HOM4_API hom4_status hom4_cell_to_json(const hom4_cell* cell, char** out);
/* cell.json plus float64 sidecars. */
HOM4_API hom4_status hom4_cell_write(const hom4_cell* cell, const char* dir);

/* One eps = 1/n: bundle manifest and fields into dir. `errors` receives
   err_u_hat_L2, err_u_tilde_H2, err_w_L2, err_w_printed_L2, residual_Hminus2
   when non-null. */
HOM4_API hom4_status hom4_solve(const hom4_config* cfg, const hom4_cell* cell, int n, const char* dir,
                                double errors[5]);

/* Full eps sweep. */
HOM4_API hom4_status hom4_converge(const hom4_config* cfg, hom4_report** out);
HOM4_API void hom4_report_free(hom4_report* r);
HOM4_API hom4_status hom4_report_rows(const hom4_report* r, int* out);
/* Fitted log-log slope of a column; HOM4_BAD_ARGUMENT if it was not fitted. */
HOM4_API hom4_status hom4_report_slope(const hom4_report* r, const char* column, double* out);
HOM4_API hom4_status hom4_report_value(const hom4_report* r, int row, const char* column, double* out);
HOM4_API hom4_status hom4_report_to_json(const hom4_report* r, char** out);
HOM4_API hom4_status hom4_report_to_csv(const hom4_report* r, char** out);
/* <prefix>.csv, <prefix>.json and one two-column file per error curve. */
HOM4_API hom4_status hom4_report_write(const hom4_report* r, const char* dir);

/* Property suites. `fault` is NULL, "none" or "skew-flip". `passed` is 1 when
   every line holds; `table` receives the printable summary. */
HOM4_API hom4_status hom4_check(uint64_t seed, int trials, const char* fault, int* passed, char** table);

/* Steklov kernels. */
HOM4_API hom4_status hom4_kernel_chi(int k, double s, double* out);
HOM4_API hom4_status hom4_gamma(int k, double* out);
HOM4_API hom4_status hom4_kernels_table(int samples, char** out);

#ifdef __cplusplus
}
#endif

#endif
