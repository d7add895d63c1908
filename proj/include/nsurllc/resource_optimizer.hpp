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

#ifndef NSURLLC_RESOURCE_OPTIMIZER_HPP
#define NSURLLC_RESOURCE_OPTIMIZER_HPP

#include "nsurllc/channel_models.hpp"

#include <functional>
#include <vector>

namespace nsurllc
{

struct ResourceDecision
{
    double bs_power = 0.0;
    double uav_power = 0.0;
    int bs_blocklength = 0;
    std::vector<int> robot_blocklengths;
    double bs_power_normalized = 0.0;
    double uav_power_normalized = 0.0;
};

struct EEOutcome
{
    std::vector<double> per_robot_ee;
    double min_ee = 0.0;
    double dep_uav_normalized = 0.0;             // eps_u / eps_u^th
    std::vector<double> dep_robot_normalized;    // eps_k / eps_k^th
    double rate_uav = 0.0;
    std::vector<double> rate_robot;
};

struct ConstraintReport
{
    bool uav_dep = false;
    bool robot_dep = false;
    bool blocklengths = false;
    bool powers = false;
    int binding_robot = -1;

    bool all() const { return uav_dep && robot_dep && blocklengths && powers; }
};

struct OptimizationResult
{
    ResourceDecision decision;
    EEOutcome outcome;
    ConstraintReport constraints;
    int bs_layer_iterations = 0;
    int uav_layer_iterations = 0;
    int dinkelbach_iterations = 0;
};

// Link quantities the optimizer sees: SNR per watt of the cascade and the
// UtG channels.
struct OptimizerInputs
{
    double delta_b = 0.0;
    std::vector<UtgChannel> utg;
};

// min{P_B, SNR_up / delta_b}. Throws InfeasibleError("bs") when even P_B
// leaves the linearized DEP above the threshold.
double bs_power_closed_form(int bs_blocklength, double delta_b, const Scenario &scenario);

// Normalized linearized DEP of the BS-HAP-UAV hop at the given power.
double uav_dep_normalized(int bs_blocklength, double bs_power, double delta_b, const Scenario &scenario);

// Normalized expected robot DEP 2 gamma_k / (mean SNR eps_k^th).
double robot_dep_normalized(int blocklength, double uav_power, const UtgChannel &channel, const Scenario &scenario);

EEOutcome evaluate(const ResourceDecision &d, const OptimizerInputs &in, const Scenario &scenario);

ConstraintReport verify(const ResourceDecision &d, const OptimizerInputs &in, const Scenario &scenario);

struct BsLayerChoice
{
    int blocklength = 0;
    double power = 0.0;
    double objective = 0.0;
};

// Exhaustive search of b_u with P_b = P_b(b_u); ties to smaller b_u.
BsLayerChoice bs_blocklength_search(const OptimizerInputs &in, const std::vector<int> &robot_blocklengths,
                                    double uav_power, const Scenario &scenario);

// Alternates the closed-form power and a blocklength search at fixed power,
// starting from b_u = bs_blocklength_min. Returns the fixed point and the
// number of alternations used.
BsLayerChoice bs_layer_alternation(const OptimizerInputs &in, const std::vector<int> &robot_blocklengths,
                                   double uav_power, const Scenario &scenario, int max_iterations, int &iterations);

struct DinkelbachResult
{
    double uav_power = 0.0;
    double y = 0.0;
    double eta = 0.0;
    int iterations = 0;
    std::vector<double> eta_history;
};

// Maximizer of a unimodal f on [lo, hi].
double golden_section_max(const std::function<double(double)> &f, double lo, double hi, double tol = 1e-12);

DinkelbachResult uav_power_dinkelbach(const OptimizerInputs &in, const std::vector<int> &robot_blocklengths,
                                      int bs_blocklength, double bs_power, const Scenario &scenario,
                                      int max_iterations = 50, double tolerance = 1e-3);

// Exhaustive search maximizing R_k (1 - eps_k); ties to smaller b_k.
int robot_blocklength_search(double uav_power, const UtgChannel &channel, const Scenario &scenario);

OptimizationResult optimize_ptpb(const OptimizerInputs &in, const Scenario &scenario);
// Both powers at their budgets; blocklengths optimized.
OptimizationResult optimize_mtp(const OptimizerInputs &in, const Scenario &scenario);
// Blocklengths at their maxima; powers optimized.
OptimizationResult optimize_mbl(const OptimizerInputs &in, const Scenario &scenario);

} // namespace nsurllc

#endif
