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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nsurllc/config.hpp"
#include "nsurllc/experiment.hpp"

#include <cmath>
#include <sstream>

using namespace nsurllc;

namespace
{
ConfigFile parse(const std::string &text)
{
    std::istringstream in(text);
    return parse_config(in);
}

std::string error_of(const std::string &text)
{
    try
    {
        parse(text);
    }
    catch (const std::invalid_argument &e)
    {
        return e.what();
    }
    return "";
}

std::string csv_of(const ExperimentSpec &spec)
{
    std::ostringstream out;
    write_csv(out, run_experiment(spec).rows);
    return out.str();
}
} // namespace

TEST_CASE("config units")
{
    const auto c = parse("noise_power_uav = -134 dBm\n"
                         "uav_power_budget = 500 mW\n"
                         "bs_power_budget = 120\n"
                         "antenna_gain = 4 dB\n"
                         "angular_spread = 15 deg\n"
                         "hap_position = 1, 0, 18 km\n"
                         "carrier_frequency = 6 GHz\n"
                         "area_side = 500 m\n");
    const auto &s = c.scenario;
    CHECK(s.noise_power_uav == doctest::Approx(std::pow(10.0, -16.4)).epsilon(1e-12));
    CHECK(s.uav_power_budget == doctest::Approx(0.5));
    CHECK(s.bs_power_budget == 120.0);
    CHECK(s.antenna_gain == doctest::Approx(std::pow(10.0, 0.4)).epsilon(1e-12));
    CHECK(s.angular_spread == doctest::Approx(M_PI / 12));
    CHECK(s.hap_position[0] == doctest::Approx(1000.0));
    CHECK(s.hap_position[2] == doctest::Approx(18000.0));
    CHECK(s.arrays.carrier_frequency == doctest::Approx(6e9));
    CHECK(s.area_side == 500.0);
}

TEST_CASE("config comments, sweeps and thresholds")
{
    const auto c = parse("# header\n\n"
                         "num_pilots = 30   # trailing\n"
                         "sweep.nmse_vs_snr = 0, 8, 16 dB\n"
                         "dep_thresholds = 5e-5, 5e-6\n");
    CHECK(c.scenario.num_pilots == 30);
    REQUIRE(c.sweeps.count("nmse_vs_snr") == 1);
    CHECK(c.sweeps.at("nmse_vs_snr") == std::vector<double>{0, 8, 16});
    CHECK(c.dep_thresholds == std::vector<double>{5e-5, 5e-6});
}

TEST_CASE("config errors carry the line number")
{
    const auto unknown = error_of("num_pilots = 30\n\nnot_a_key = 3\n");
    CHECK(unknown.find("line 3") != std::string::npos);
    CHECK(unknown.find("not_a_key") != std::string::npos);
    CHECK(error_of("num_pilots 30\n").find("line 1") != std::string::npos);
    CHECK(error_of("a=1\n").find("line 1") != std::string::npos);
    CHECK_FALSE(error_of("uav_power_budget = 3 furlongs\n").empty());
    CHECK_FALSE(error_of("num_pilots = 3.5\n").empty());
    CHECK_FALSE(error_of("hap_position = 1, 2\n").empty());
    CHECK_THROWS(load_config("/nonexistent/default.cfg"));
}

TEST_CASE("every listed key parses")
{
    ConfigFile c;
    const auto keys = config_keys();
    CHECK(keys.size() > 20);
    CHECK_THROWS(apply_setting(c, "bogus", "1"));
}

TEST_CASE("nmse in dB")
{
    CVec t(3);
    t << cdouble(1, 0), cdouble(0, 2), cdouble(-1, 1);
    CHECK(nmse_db(t, t) == -200.0);
    CHECK(nmse_db(CVec::Zero(3), t) == doctest::Approx(0.0));
    CHECK(nmse_db(2.0 * t, t) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(nmse_db(1.1 * t, t) == doctest::Approx(-20.0).epsilon(1e-9));
}

TEST_CASE("experiment kinds and default sweeps")
{
    for (const char *k : {"nmse_vs_snr", "nmse_vs_pilots", "gain_vs_N", "ee_vs_N", "ee_vs_Pu", "ee_vs_area"})
    {
        CHECK(std::string(to_string(parse_experiment_kind(k))) == k);
        CHECK_FALSE(default_sweep(parse_experiment_kind(k)).empty());
    }
    CHECK_THROWS(parse_experiment_kind("nmse"));
}

TEST_CASE("csv is byte identical across runs and thread counts")
{
    ExperimentSpec spec;
    spec.kind = ExperimentKind::nmse_vs_snr;
    spec.sweep = {8.0, 16.0};
    spec.trials = 2;
    spec.seed = 7;
    spec.threads = 1;
    const auto a = csv_of(spec);
    const auto b = csv_of(spec);
    CHECK(a == b);
    spec.threads = 2;
    CHECK(csv_of(spec) == a);
    spec.seed = 8;
    CHECK(csv_of(spec) != a);

    std::istringstream lines(a);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "experiment,sweep,method,metric,value,trials,failures,seed");
    std::string row;
    int n = 0;
    while (std::getline(lines, row))
    {
        ++n;
        CHECK(row.rfind("nmse_vs_snr,", 0) == 0);
    }
    CHECK(n == 6); // 2 points x roamp/omp/sp
}

TEST_CASE("ee experiment rows")
{
    ExperimentSpec spec;
    spec.kind = ExperimentKind::ee_vs_Pu;
    spec.sweep = {0.5};
    spec.trials = 1;
    spec.threads = 1;
    const auto r = run_experiment(spec);
    bool ptpb = false;
    for (const auto &row : r.rows)
    {
        ptpb = ptpb || row.method == "ptpb";
        CHECK(row.trials == 1);
        CHECK(row.sweep == 0.5);
    }
    CHECK(ptpb);
    CHECK(r.evaluations > 0);
}

TEST_CASE("spec validation")
{
    ExperimentSpec spec;
    spec.sweep = {1.0};
    spec.trials = 0;
    CHECK_THROWS(spec.validate());
    spec.trials = 1;
    spec.sweep.clear();
    CHECK_THROWS(spec.validate());
}
