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

// simulate <config> --experiment <kind> --out <csv> --trials N --seed S [--trace json]
//
// Exit codes: 0 success, 1 usage/config error, 2 infeasible scenario (some
// sweep point had no feasible trial), 3 numerical failures above 10% of
// evaluations, 4 I/O error, 5 internal error.

#include "nsurllc/nsurllc.h"

#include "CLI11.hpp"

#include <cstdio>
#include <string>
#include <vector>

int main(int argc, char **argv)
{
    CLI::App app{"Monte Carlo experiments for RIS-assisted near-space URLLC links"};
    std::string config;
    std::string experiment;
    std::string out;
    std::string trace;
    int trials = 200;
    std::uint64_t seed = 1;
    int threads = 0;
    std::vector<std::string> overrides;
    std::vector<double> sweep;

    app.add_option("config", config, "Scenario config file (key = value)")->required()->check(CLI::ExistingFile);
    app.add_option("--experiment,-e", experiment, "nmse_vs_snr | nmse_vs_pilots | gain_vs_N | ee_vs_N | ee_vs_Pu | ee_vs_area")
        ->required();
    app.add_option("--out,-o", out, "CSV output path")->required();
    app.add_option("--trials,-n", trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
    app.add_option("--seed,-s", seed, "Master seed");
    app.add_option("--trace", trace, "Write per-trial JSON traces to this path");
    app.add_option("--threads,-j", threads, "Worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
    app.add_option("--set", overrides, "Override a config entry, key=value (repeatable)");
    app.add_option("--sweep", sweep, "Sweep values, overriding the config")->delimiter(',');
    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        // --help and --version exit 0; everything else is a usage error
        return app.exit(e) == 0 ? 0 : 1;
    }

    nsurllc_scenario *sc = nullptr;
    if (nsurllc_scenario_load(config.c_str(), &sc) != NSURLLC_OK)
    {
        std::fprintf(stderr, "simulate: %s\n", nsurllc_last_error());
        return 1;
    }
    for (const auto &kv : overrides)
    {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
        {
            std::fprintf(stderr, "simulate: --set expects key=value, got '%s'\n", kv.c_str());
            nsurllc_scenario_free(sc);
            return 1;
        }
        if (nsurllc_scenario_set(sc, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()) != NSURLLC_OK)
        {
            std::fprintf(stderr, "simulate: %s\n", nsurllc_last_error());
            nsurllc_scenario_free(sc);
            return 1;
        }
    }

    nsurllc_run_options opt{};
    opt.experiment = experiment.c_str();
    opt.csv_path = out.c_str();
    opt.trace_path = trace.empty() ? nullptr : trace.c_str();
    opt.trials = trials;
    opt.seed = seed;
    opt.threads = threads;
    opt.sweep = sweep.empty() ? nullptr : sweep.data();
    opt.sweep_len = sweep.size();
    nsurllc_run_summary summary{};
    const nsurllc_status st = nsurllc_run_experiment(sc, &opt, &summary);
    nsurllc_scenario_free(sc);
    switch (st)
    {
    case NSURLLC_OK:
        break;
    case NSURLLC_INVALID_ARGUMENT:
        std::fprintf(stderr, "simulate: %s\n", nsurllc_last_error());
        return 1;
    default:
        std::fprintf(stderr, "simulate: %s\n", nsurllc_last_error());
        return static_cast<int>(st);
    }
    std::fprintf(stderr, "simulate: %zu rows, %d evaluations, %d numerical failures\n", summary.rows,
                 summary.evaluations, summary.numerical_failures);
    if (summary.numerical_failures * 10 > summary.evaluations)
    {
        std::fprintf(stderr, "simulate: numerical failures exceed 10%% of evaluations\n");
        return 3;
    }
    if (summary.fully_infeasible_point)
    {
        std::fprintf(stderr, "simulate: every trial was infeasible at some sweep point\n");
        return 2;
    }
    return 0;
}
