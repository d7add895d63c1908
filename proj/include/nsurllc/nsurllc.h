// SPDX-License-Identifier: Apache-2.0
//
// nsurllc - near-space RIS link estimation and URLLC resource optimization
// Copyright (C) 2026 The nsurllc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/* C interface to the nsurllc simulation core. All functions return an
 * nsurllc_status; on failure nsurllc_last_error() holds a message for the
 * calling thread until its next failing call. */
#ifndef NSURLLC_H
#define NSURLLC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NSURLLC_API __declspec(dllexport)
#else
#define NSURLLC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nsurllc_status
{
    NSURLLC_OK = 0,
    NSURLLC_INVALID_ARGUMENT = 1,
    NSURLLC_INFEASIBLE = 2,
    NSURLLC_NUMERICAL = 3,
    NSURLLC_IO = 4,
    NSURLLC_INTERNAL = 5
} nsurllc_status;

typedef struct nsurllc_scenario nsurllc_scenario;

typedef struct nsurllc_run_options
{
    const char *experiment; /* nmse_vs_snr | nmse_vs_pilots | gain_vs_N | ee_vs_N | ee_vs_Pu | ee_vs_area */
    const char *csv_path;   /* required */
    const char *trace_path; /* optional JSON trace, NULL to skip */
    int trials;
    uint64_t seed;
    int threads;            /* 0: one per hardware thread */
    const double *sweep;    /* NULL: config file sweep or built-in default */
    size_t sweep_len;
} nsurllc_run_options;

typedef struct nsurllc_run_summary
{
    int evaluations;
    int numerical_failures;
    int fully_infeasible_point; /* some sweep point had no feasible trial for a method */
    size_t rows;
} nsurllc_run_summary;

NSURLLC_API const char *nsurllc_version(void);
NSURLLC_API const char *nsurllc_last_error(void);

NSURLLC_API nsurllc_status nsurllc_scenario_default(nsurllc_scenario **out);
NSURLLC_API nsurllc_status nsurllc_scenario_load(const char *path, nsurllc_scenario **out);
NSURLLC_API nsurllc_status nsurllc_scenario_set(nsurllc_scenario *scenario, const char *key, const char *value);
NSURLLC_API void nsurllc_scenario_free(nsurllc_scenario *scenario);

/* Sweep used for `experiment` when the run options give none. With
 * values == NULL only *count is written. */
NSURLLC_API nsurllc_status nsurllc_scenario_sweep(const nsurllc_scenario *scenario, const char *experiment,
                                                  double *values, size_t capacity, size_t *count);

NSURLLC_API nsurllc_status nsurllc_run_experiment(const nsurllc_scenario *scenario, const nsurllc_run_options *options,
                                                  nsurllc_run_summary *summary);

/* Finite-blocklength helpers. */
NSURLLC_API nsurllc_status nsurllc_q_function(double x, double *out);
NSURLLC_API nsurllc_status nsurllc_exact_dep(int blocklength, double packet_bits, double snr, double *out);
NSURLLC_API nsurllc_status nsurllc_linearized_dep(int blocklength, double packet_bits, double snr, double *out);
NSURLLC_API nsurllc_status nsurllc_mar(int blocklength, double snr, double dep, double *rate, int *below_validity);

#ifdef __cplusplus
}
#endif

#endif
