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

#ifndef NSURLLC_EXPERIMENT_HPP
#define NSURLLC_EXPERIMENT_HPP

#include "nsurllc/greedy.hpp"
#include "nsurllc/resource_optimizer.hpp"
#include "nsurllc/ris_phase.hpp"
#include "nsurllc/roamp.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nsurllc
{

enum class ExperimentKind
{
    nmse_vs_snr,
    nmse_vs_pilots,
    gain_vs_N,
    ee_vs_N,
    ee_vs_Pu,
    ee_vs_area,
};

const char *to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string &name);
std::vector<double> default_sweep(ExperimentKind k);

struct ExperimentSpec
{
    ExperimentKind kind = ExperimentKind::nmse_vs_snr;
    std::vector<double> sweep;
    int trials = 200;
    Scenario base;
    std::uint64_t seed = 1;
    std::vector<double> dep_thresholds; // ee experiments; empty -> scenario thresholds
    int threads = 0;                    // 0 -> hardware concurrency
    bool keep_traces = false;

    void validate() const;
};

struct ResultRow
{
    std::string experiment;
    double sweep = 0.0;
    std::string method;
    std::string metric;
    double value = 0.0;
    int trials = 0;
    int failures = 0;
    std::uint64_t seed = 0;
};

// One record per (trial, sweep point, method).
struct TrialRecord
{
    int trial = 0;
    double sweep = 0.0;
    std::string method;
    std::string variant; // appended to metric names, e.g. "@5e-06"
    std::string status;  // ok | infeasible | numerical
    std::string message;
    std::vector<std::pair<std::string, double>> values;
    std::vector<TraceRow> iterations;
};

struct ExperimentResult
{
    std::vector<ResultRow> rows;
    std::vector<TrialRecord> traces;
    int evaluations = 0;
    int numerical_failures = 0;
    bool fully_infeasible_point = false; // some (sweep, method) row had no feasible trial
};

// 10 log10 of the normalized squared error, floored at -200 dB.
double nmse_db(const CVec &estimate, const CVec &truth);

// Everything one estimation run needs, drawn in a fixed order from `rng`.
struct TrialSetup
{
    ArrayConfig arrays;
    BsHapChannel bs_hap;
    AngularGrid grid;
    SparseChannelInstance channel;
    MeasurementModel model;
    CVec pilots;
};

TrialSetup prepare_trial(const Scenario &scenario, Rng &rng);

enum class Estimator
{
    roamp,
    omp,
    sp
};

struct ChannelEstimate
{
    CVec normalized;                 // estimate of h / large_scale_gain
    std::vector<PathEstimate> paths; // with large-scale gain applied
    std::vector<TraceRow> iterations;
};

ChannelEstimate estimate_channel(const TrialSetup &setup, Estimator method, const Scenario &scenario,
                                 bool keep_trace = false);

// SNR per watt of the cascade under `phases`, toward channel `h`.
double cascade_delta_b(const TrialSetup &setup, const CVec &h, const PhaseConfiguration &phases,
                       const Scenario &scenario);

ExperimentResult run_experiment(const ExperimentSpec &spec);

void write_csv(std::ostream &out, const std::vector<ResultRow> &rows);
void write_trace_json(std::ostream &out, const ExperimentSpec &spec, const ExperimentResult &result);

} // namespace nsurllc

#endif
