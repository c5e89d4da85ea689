/* SPDX-License-Identifier: Apache-2.0
 *
 * tfdiff C interface. Every object is an opaque handle released with its
 * *_free function; every call that can fail returns a tfd_status and leaves
 * a message for tfd_last_error() on the calling thread.
 */
#ifndef TFDIFF_H
#define TFDIFF_H

#include <stddef.h>
#include <stdio.h>

#if defined(TFD_BUILDING_LIBRARY)
#define TFD_API __attribute__((visibility("default")))
#else
#define TFD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tfd_status {
  TFD_OK = 0,
  TFD_ERR_USAGE = 1,
  TFD_ERR_DOMAIN = 2,
  TFD_ERR_IO = 3,
  TFD_ERR_FORMAT = 4,
  TFD_ERR_CONFIG = 5,
  TFD_ERR_UNDEFINED = 6,
  TFD_ERR_FIT = 7,
  TFD_ERR_WRONG_MODEL = 8,
  TFD_ERR_MISSING_ORDER = 9,
  TFD_HELP = 10, /* --help was requested; see tfd_config_help */
  TFD_ERR_INTERNAL = 99
} tfd_status;

typedef struct tfd_config tfd_config;
typedef struct tfd_result tfd_result;
typedef struct tfd_array tfd_array;

typedef struct tfd_indices {
  double psi_ie;
  double psi_ave; /* NaN unless the array has directional pairs */
  double psi_pr;  /* normalized to [0, 1] */
  double psi_pr_raw;
  double psi_com;
  double lambda[3];
  double intensity[3];
  double doa_az; /* degrees; NaN for zero intensity */
  double doa_zen;
  size_t clamp_count;
} tfd_indices;

TFD_API const char* tfd_version(void);
TFD_API const char* tfd_status_name(tfd_status status);
/* Message of the last failure on this thread ("" if none). */
TFD_API const char* tfd_last_error(void);

/* argv[0] is the program name and is skipped. On TFD_HELP a config is still
 * returned so the caller can print tfd_config_help. */
TFD_API tfd_status tfd_config_parse(int argc, const char* const* argv, tfd_config** out);
TFD_API const char* tfd_config_command(const tfd_config* cfg);
TFD_API const char* tfd_config_help(const tfd_config* cfg);
/* Resolved configuration as JSON; valid until the config is freed. */
TFD_API const char* tfd_config_echo_json(const tfd_config* cfg);
TFD_API void tfd_config_free(tfd_config* cfg);

/* Runs the configured command and writes its outputs. Progress text and
 * stdout-bound output (fit or layout without --out) go to `log`. */
TFD_API tfd_status tfd_execute(const tfd_config* cfg, FILE* log);

/* Benchmark commands only: compute without writing files. */
TFD_API tfd_status tfd_run(const tfd_config* cfg, tfd_result** out);
TFD_API tfd_status tfd_result_write(const tfd_result* res, const tfd_config* cfg, const char* dir);
TFD_API size_t tfd_result_point_count(const tfd_result* res);
/* field: "mean", "max", "max_abs_err" or "pearson_r". */
TFD_API tfd_status tfd_result_summary_value(const tfd_result* res, double band_hz, const char* index,
                                            const char* field, double* value);
TFD_API void tfd_result_free(tfd_result* res);

/* name: "afmt", "fibo64" or "tf24". */
TFD_API tfd_status tfd_array_create(const char* name, tfd_array** out);
TFD_API tfd_status tfd_array_load(const char* path, tfd_array** out);
TFD_API tfd_status tfd_array_save(const tfd_array* array, const char* path);
TFD_API size_t tfd_array_sensor_count(const tfd_array* array);
TFD_API tfd_status tfd_array_sensor_position(const tfd_array* array, size_t index, double xyz[3]);
TFD_API void tfd_array_free(tfd_array* array);

/* Unit plane wave arriving from (azimuth, zenith) in degrees, default air.
 * re/im must hold tfd_array_sensor_count values. */
TFD_API tfd_status tfd_simulate_plane_wave(const tfd_array* array, double azimuth_deg, double zenith_deg,
                                           double frequency_hz, double* re, double* im, size_t n);
TFD_API tfd_status tfd_analyze_snapshot(const tfd_array* array, double frequency_hz, const double* re,
                                        const double* im, size_t n, tfd_indices* out);

TFD_API tfd_status tfd_psi_from_eigenvalues(const double* lambda, size_t k, double* psi_pr,
                                            double* psi_pr_raw, double* psi_com);
/* rows_xyz holds n unit vectors as x0,y0,z0,x1,... */
TFD_API tfd_status tfd_frame_constant(const double* rows_xyz, size_t n, double* a, double* max_offdiag,
                                      int* is_tight);

#ifdef __cplusplus
}
#endif

#endif /* TFDIFF_H */
