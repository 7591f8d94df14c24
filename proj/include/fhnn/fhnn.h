//------------------------------------------------------------------------------
//
//   Copyright 2026 The FHNN Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#ifndef FHNN_FHNN_H
#define FHNN_FHNN_H

/* C interface to the FHNN forecasting library.
 *
 * All functions return an fhnn_status. On failure, fhnn_last_error() holds a
 * message for the calling thread until its next failing call. Handles are
 * opaque; release them with the matching *_free function. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(FHNN_BUILDING_LIBRARY)
#    define FHNN_API __declspec(dllexport)
#  else
#    define FHNN_API __declspec(dllimport)
#  endif
#else
#  define FHNN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fhnn_status {
    FHNN_OK = 0,
    FHNN_ERR_INTERNAL = 1,
    FHNN_ERR_CONFIG = 2,
    FHNN_ERR_DATA = 3,
    FHNN_ERR_DIVERGENCE = 4,
    FHNN_ERR_SHAPE = 5,
    FHNN_ERR_NUMERIC = 6,
    FHNN_ERR_IO = 7,
    FHNN_ERR_ARGUMENT = 8
} fhnn_status;

typedef struct fhnn_config fhnn_config;
typedef struct fhnn_model fhnn_model;

typedef struct fhnn_model_info {
    char kind[16];        /* "fhnn", "fhnn_single", "lstm" or "lstm_ar" */
    size_t d_x;           /* drivers per step */
    size_t input_length;  /* history steps T */
    size_t horizon;       /* forecast steps K */
    size_t n_parameters;
} fhnn_model_info;

FHNN_API const char* fhnn_version(void);
FHNN_API const char* fhnn_last_error(void);
FHNN_API const char* fhnn_status_name(fhnn_status status);

/* Configuration. A NULL or empty preset gives the built-in defaults. */
FHNN_API fhnn_status fhnn_config_new(const char* preset, fhnn_config** out);
FHNN_API fhnn_status fhnn_config_load(const char* path, fhnn_config** out);
FHNN_API void fhnn_config_free(fhnn_config* config);
FHNN_API fhnn_status fhnn_config_set(fhnn_config* config, const char* key, const char* value);
/* Applies FHNN_<KEY> environment overrides; *n_applied may be NULL. */
FHNN_API fhnn_status fhnn_config_apply_env(fhnn_config* config, size_t* n_applied);
/* Copies a value into buf (NUL-terminated, truncated to cap). *needed, when
 * not NULL, receives the full length including the terminator. */
FHNN_API fhnn_status fhnn_config_get(const fhnn_config* config, const char* key, char* buf, size_t cap,
                                     size_t* needed);
FHNN_API fhnn_status fhnn_config_snapshot(const fhnn_config* config, char* buf, size_t cap, size_t* needed);

/* Runs one command: "simulate", "train", "pretrain", "finetune", "evaluate",
 * "states" or "trends". Outputs go under the config's out directory. Progress
 * is written to stderr when verbose is nonzero. */
FHNN_API fhnn_status fhnn_run(const fhnn_config* config, const char* command);

/* Models. */
FHNN_API fhnn_status fhnn_model_load(const char* path, fhnn_model** out);
FHNN_API void fhnn_model_free(fhnn_model* model);
FHNN_API fhnn_status fhnn_model_info_get(const fhnn_model* model, fhnn_model_info* info);
/* Row-major inputs in the model's normalised units: x_hist T*d_x, y_hist T,
 * x_fcst K*d_x. Writes K values to y_out. */
FHNN_API fhnn_status fhnn_model_predict(const fhnn_model* model, const double* x_hist, const double* y_hist,
                                        const double* x_fcst, double* y_out);

/* Nash-Sutcliffe efficiency of sim against obs. */
FHNN_API fhnn_status fhnn_nse(const double* obs, const double* sim, size_t n, double* out);

#ifdef __cplusplus
}
#endif

#endif
