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

#ifndef NSURLLC_RIS_PHASE_HPP
#define NSURLLC_RIS_PHASE_HPP

#include "nsurllc/channel_models.hpp"

#include <string>
#include <vector>

namespace nsurllc
{

enum class PhaseStrategy
{
    aligned,
    random,
    zero,
    exhaustive
};

const char *to_string(PhaseStrategy s);

struct PhaseConfiguration
{
    RVec phase_shifts;              // theta_n in [0, 2pi)
    double alignment_angle = 0.0;   // omega_l0, meaningful for aligned/exhaustive
    PhaseStrategy strategy = PhaseStrategy::zero;

    CVec reflection() const; // diagonal of Theta
};

struct CascadeGain
{
    CVec precoder;
    double snr_u = 0.0;
    double delta_b = 0.0; // SNR per watt of BS power
};

struct PathEstimate
{
    cdouble gain;
    double angle = 0.0;
};

CVec mrt_precoder(const BsHapChannel &channel, const ArrayConfig &arrays);

// |sin(pi N d x) / sin(pi d x)|^2, N^2 at the removable singularities.
double coherent_gain_closed_form(double delta_psi, int n, double spacing);

// Phase profile steering the reflection from `aoa` toward `angle`.
RVec steering_phases(double angle, double aoa, int n, double spacing, double free_phase = 0.0);

// Weighted absolute deviation sum_l |beta_l cos w_l| |w_l - w0|.
double alignment_objective(const std::vector<PathEstimate> &paths, double w0);

// Weighted median of the path angles; lower median on ties.
double weighted_median_angle(const std::vector<PathEstimate> &paths);

PhaseConfiguration align_phases(const std::vector<PathEstimate> &paths, double aoa, const ArrayConfig &arrays,
                                double free_phase = 0.0);

// Matrix form P_b G |h^H Theta H v|^2 / sigma0^2.
CascadeGain cascade_snr(const CVec &h, const PhaseConfiguration &phases, const BsHapChannel &bs_hap, const CVec &v,
                        double bs_power, double antenna_gain, double noise_power);

// Path-domain form of the same quantity for h = sum_l beta_l a(w_l).
double cascade_snr_paths(const std::vector<PathEstimate> &paths, const PhaseConfiguration &phases,
                         const BsHapChannel &bs_hap, const ArrayConfig &arrays, double bs_power, double antenna_gain,
                         double noise_power);

PhaseConfiguration random_phases(int n, Rng &rng);
PhaseConfiguration zero_phases(int n);

// Grid search of the steering angle over [0, pi/2] maximizing the cascade gain
// toward `h`.
PhaseConfiguration exhaustive_phases(const CVec &h, const BsHapChannel &bs_hap, const ArrayConfig &arrays,
                                     double resolution = 1e-4);

} // namespace nsurllc

#endif
