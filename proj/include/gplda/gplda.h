#ifndef GPLDA_H
#define GPLDA_H

/*
 * C interface to the functional discriminant library.
 *
 * Every function returns GPLDA_OK (0) or a negative status. The message of
 * the most recent failure on the calling thread is available from
 * gplda_last_error(). Handles are opaque and owned by the caller; release
 * them with the matching *_destroy function (NULL is accepted).
 *
 * String outputs follow one convention: pass a buffer and its capacity in
 * *len. On success *len is set to the bytes written including the
 * terminating NUL. If the buffer is NULL or too small, *len receives the
 * required size and GPLDA_ERR_INSUFFICIENT_BUFFER is returned.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(GPLDA_BUILDING_LIBRARY)
#define GPLDA_API __attribute__((visibility("default")))
#else
#define GPLDA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum gplda_status {
  GPLDA_OK = 0,
  GPLDA_ERR_NULL_POINTER = -1,
  GPLDA_ERR_INVALID_INPUT = -2,
  GPLDA_ERR_VALIDATION = -3,
  GPLDA_ERR_PARSE = -4,
  GPLDA_ERR_DIMENSION = -5,
  GPLDA_ERR_SINGULAR = -6,
  GPLDA_ERR_DEGENERATE = -7,
  GPLDA_ERR_HYPERPARAMETER = -8,
  GPLDA_ERR_NUMERIC = -9,
  GPLDA_ERR_IO = -10,
  GPLDA_ERR_INSUFFICIENT_BUFFER = -11,
  GPLDA_ERR_OUT_OF_RANGE = -12,
  GPLDA_ERR_UNKNOWN = -99
};

typedef struct gplda_config_struct* gplda_config_t;
typedef struct gplda_dataset_struct* gplda_dataset_t;
typedef struct gplda_model_struct* gplda_model_t;
typedef struct gplda_prediction_struct* gplda_prediction_t;
typedef struct gplda_report_struct* gplda_report_t;

GPLDA_API const char* gplda_version(void);
GPLDA_API const char* gplda_status_name(int status);
GPLDA_API const char* gplda_last_error(void);

/* Run configuration: defaults, "key = value" files, single keys. */
GPLDA_API int gplda_config_init(gplda_config_t* out);
GPLDA_API int gplda_config_load(gplda_config_t* out, const char* path);
GPLDA_API int gplda_config_parse(gplda_config_t* out, const char* text);
GPLDA_API int gplda_config_set(gplda_config_t config, const char* key, const char* value);
GPLDA_API int gplda_config_get(gplda_config_t config, const char* key, char* buf, size_t* len);
GPLDA_API int gplda_config_print(gplda_config_t config, char* buf, size_t* len);
GPLDA_API int gplda_config_validate(gplda_config_t config);
GPLDA_API int gplda_config_equal(gplda_config_t a, gplda_config_t b, int* equal);
GPLDA_API int gplda_config_destroy(gplda_config_t config);

/* Labelled curves. `values` is row-major n x p; labels are n C strings. */
GPLDA_API int gplda_dataset_load_csv(gplda_dataset_t* out, const char* path, int has_header);
GPLDA_API int gplda_dataset_from_arrays(gplda_dataset_t* out, const double* values, size_t n,
                                        size_t p, const char* const* labels);
GPLDA_API int gplda_dataset_shape(gplda_dataset_t data, size_t* n, size_t* p, size_t* c);
GPLDA_API int gplda_dataset_values(gplda_dataset_t data, double* out, size_t count);
GPLDA_API int gplda_dataset_write_csv(gplda_dataset_t data, const char* path);
GPLDA_API int gplda_dataset_destroy(gplda_dataset_t data);

/* Draws the train/test pair selected by sim.* and seed. */
GPLDA_API int gplda_simulate(gplda_config_t config, gplda_dataset_t* train, gplda_dataset_t* test);

/* Trains `method` from the config. */
GPLDA_API int gplda_model_fit(gplda_model_t* out, gplda_config_t config, gplda_dataset_t train);
GPLDA_API int gplda_model_save(gplda_model_t model, const char* path);
GPLDA_API int gplda_model_load(gplda_model_t* out, const char* path);
GPLDA_API int gplda_model_shape(gplda_model_t model, size_t* k, size_t* p, size_t* c);
GPLDA_API int gplda_model_directions(gplda_model_t model, double* out, size_t count);
/* JSON fit diagnostics; only available on models returned by gplda_model_fit. */
GPLDA_API int gplda_model_summary_json(gplda_model_t model, char* buf, size_t* len);
GPLDA_API int gplda_model_equal(gplda_model_t a, gplda_model_t b, int* equal);
GPLDA_API int gplda_model_destroy(gplda_model_t model);

/* Nearest-centroid labels. A CSV label that is empty or "?" marks the file
 * as unlabelled; otherwise the labels are taken as truth. */
GPLDA_API int gplda_model_predict(gplda_model_t model, const double* values, size_t n, size_t p,
                                  gplda_prediction_t* out);
GPLDA_API int gplda_model_predict_csv(gplda_model_t model, const char* path, int has_header,
                                      gplda_prediction_t* out);
GPLDA_API int gplda_prediction_count(gplda_prediction_t pred, size_t* n);
GPLDA_API int gplda_prediction_label(gplda_prediction_t pred, size_t i, char* buf, size_t* len);
/* *has_truth is 0 when no truth labels were supplied; *rate is then 0. */
GPLDA_API int gplda_prediction_error_rate(gplda_prediction_t pred, double* rate, int* has_truth);
GPLDA_API int gplda_prediction_write_csv(gplda_prediction_t pred, const char* path);
GPLDA_API int gplda_prediction_destroy(gplda_prediction_t pred);

/* Replicated simulation benchmark from sim.*, bench.*, seed and the method
 * settings. */
GPLDA_API int gplda_bench_run(gplda_config_t config, gplda_report_t* out);
GPLDA_API int gplda_report_write(gplda_report_t report, const char* csv_path, const char* json_path);
GPLDA_API int gplda_report_csv(gplda_report_t report, char* buf, size_t* len);
GPLDA_API int gplda_report_json(gplda_report_t report, char* buf, size_t* len);
GPLDA_API int gplda_report_cell_count(gplda_report_t report, size_t* count);
GPLDA_API int gplda_report_cell(gplda_report_t report, size_t i, char* method, size_t* method_len,
                                size_t* n, double* mean_pct, double* std_pct, int* failures,
                                double* seconds);
/* Per-replication error in percent; NaN marks a failed replication. */
GPLDA_API int gplda_report_cell_replications(gplda_report_t report, size_t i, double* out,
                                             size_t count);
GPLDA_API int gplda_report_destroy(gplda_report_t report);

#ifdef __cplusplus
}
#endif

#endif
