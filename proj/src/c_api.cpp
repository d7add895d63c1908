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

#include "nsurllc/nsurllc.h"

#include "nsurllc/config.hpp"
#include "nsurllc/experiment.hpp"
#include "nsurllc/urllc_metrics.hpp"

#include <fstream>
#include <new>
#include <string>

struct nsurllc_scenario
{
    nsurllc::ConfigFile config;
};

namespace
{

thread_local std::string g_last_error;

nsurllc_status fail(nsurllc_status code, const std::string &msg)
{
    g_last_error = msg;
    return code;
}

template <class F>
nsurllc_status guarded(F &&f)
{
    try
    {
        return f();
    }
    catch (const nsurllc::InfeasibleError &e)
    {
        return fail(NSURLLC_INFEASIBLE, std::string("infeasible (") + e.layer() + "): " + e.what());
    }
    catch (const nsurllc::NumericalError &e)
    {
        return fail(NSURLLC_NUMERICAL, e.what());
    }
    catch (const std::invalid_argument &e)
    {
        return fail(NSURLLC_INVALID_ARGUMENT, e.what());
    }
    catch (const std::bad_alloc &)
    {
        return fail(NSURLLC_INTERNAL, "out of memory");
    }
    catch (const std::exception &e)
    {
        return fail(NSURLLC_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(NSURLLC_INTERNAL, "unknown error");
    }
}

} // namespace

extern "C" {

const char *nsurllc_version(void)
{
    return "0.1.0";
}

const char *nsurllc_last_error(void)
{
    return g_last_error.c_str();
}

nsurllc_status nsurllc_scenario_default(nsurllc_scenario **out)
{
    if (!out)
        return fail(NSURLLC_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        *out = new nsurllc_scenario{};
        return NSURLLC_OK;
    });
}

nsurllc_status nsurllc_scenario_load(const char *path, nsurllc_scenario **out)
{
    if (!path || !out)
        return fail(NSURLLC_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ifstream f(path);
        if (!f)
            return fail(NSURLLC_IO, std::string("cannot open config file ") + path);
        auto *s = new nsurllc_scenario{nsurllc::parse_config(f)};
        *out = s;
        return NSURLLC_OK;
    });
}

nsurllc_status nsurllc_scenario_set(nsurllc_scenario *scenario, const char *key, const char *value)
{
    if (!scenario || !key || !value)
        return fail(NSURLLC_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        nsurllc::ConfigFile copy = scenario->config;
        nsurllc::apply_setting(copy, key, value);
        copy.scenario.validate();
        scenario->config = std::move(copy);
        return NSURLLC_OK;
    });
}

void nsurllc_scenario_free(nsurllc_scenario *scenario)
{
    delete scenario;
}

nsurllc_status nsurllc_scenario_sweep(const nsurllc_scenario *scenario, const char *experiment, double *values,
                                      size_t capacity, size_t *count)
{
    if (!scenario || !experiment || !count)
        return fail(NSURLLC_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto kind = nsurllc::parse_experiment_kind(experiment);
        auto it = scenario->config.sweeps.find(experiment);
        const auto sweep = it != scenario->config.sweeps.end() ? it->second : nsurllc::default_sweep(kind);
        *count = sweep.size();
        if (values)
        {
            if (capacity < sweep.size())
                return fail(NSURLLC_INVALID_ARGUMENT, "sweep buffer too small");
            std::copy(sweep.begin(), sweep.end(), values);
        }
        return NSURLLC_OK;
    });
}

nsurllc_status nsurllc_run_experiment(const nsurllc_scenario *scenario, const nsurllc_run_options *options,
                                      nsurllc_run_summary *summary)
{
    if (!scenario || !options || !options->experiment || !options->csv_path)
        return fail(NSURLLC_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        nsurllc::ExperimentSpec spec;
        spec.kind = nsurllc::parse_experiment_kind(options->experiment);
        spec.base = scenario->config.scenario;
        spec.trials = options->trials;
        spec.seed = options->seed;
        spec.threads = options->threads;
        spec.dep_thresholds = scenario->config.dep_thresholds;
        spec.keep_traces = options->trace_path != nullptr;
        if (options->sweep && options->sweep_len > 0)
            spec.sweep.assign(options->sweep, options->sweep + options->sweep_len);
        else if (auto it = scenario->config.sweeps.find(options->experiment); it != scenario->config.sweeps.end())
            spec.sweep = it->second;
        else
            spec.sweep = nsurllc::default_sweep(spec.kind);

        const auto result = nsurllc::run_experiment(spec);
        {
            std::ofstream csv(options->csv_path, std::ios::binary);
            if (!csv)
                return fail(NSURLLC_IO, std::string("cannot write ") + options->csv_path);
            nsurllc::write_csv(csv, result.rows);
            if (!csv)
                return fail(NSURLLC_IO, std::string("write failed for ") + options->csv_path);
        }
        if (options->trace_path)
        {
            std::ofstream js(options->trace_path, std::ios::binary);
            if (!js)
                return fail(NSURLLC_IO, std::string("cannot write ") + options->trace_path);
            nsurllc::write_trace_json(js, spec, result);
        }
        if (summary)
        {
            summary->evaluations = result.evaluations;
            summary->numerical_failures = result.numerical_failures;
            summary->fully_infeasible_point = result.fully_infeasible_point ? 1 : 0;
            summary->rows = result.rows.size();
        }
        return NSURLLC_OK;
    });
}

nsurllc_status nsurllc_q_function(double x, double *out)
{
    if (!out)
        return fail(NSURLLC_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        *out = nsurllc::q_function(x);
        return NSURLLC_OK;
    });
}

nsurllc_status nsurllc_exact_dep(int blocklength, double packet_bits, double snr, double *out)
{
    if (!out)
        return fail(NSURLLC_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        *out = nsurllc::exact_dep(nsurllc::make_link_budget(blocklength, packet_bits, snr));
        return NSURLLC_OK;
    });
}

nsurllc_status nsurllc_linearized_dep(int blocklength, double packet_bits, double snr, double *out)
{
    if (!out)
        return fail(NSURLLC_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        *out = nsurllc::linearized_dep(nsurllc::make_link_budget(blocklength, packet_bits, snr));
        return NSURLLC_OK;
    });
}

nsurllc_status nsurllc_mar(int blocklength, double snr, double dep, double *rate, int *below_validity)
{
    if (!rate)
        return fail(NSURLLC_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        const auto r = nsurllc::mar(blocklength, snr, dep);
        *rate = r.rate;
        if (below_validity)
            *below_validity = r.below_validity ? 1 : 0;
        return NSURLLC_OK;
    });
}

} // extern "C"
