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

#ifndef NSURLLC_CHANNEL_MODELS_HPP
#define NSURLLC_CHANNEL_MODELS_HPP

#include "nsurllc/types.hpp"

#include <vector>

namespace nsurllc
{

struct ArrayConfig
{
    int num_bs_antennas = 32;   // M
    int num_ris_elements = 128; // N
    double bs_spacing = 0.5;    // element spacing over wavelength
    double ris_spacing = 0.5;
    double carrier_frequency = 6e9; // BS-HAP-UAV cascade carrier (Hz)

    double wavelength() const { return kSpeedOfLight / carrier_frequency; }
    void validate() const;
};

// Geometry, budgets and QoS targets of one deployment. All quantities are
// linear SI units; dB/dBm conversion happens when the config is parsed.
struct Scenario
{
    ArrayConfig arrays;

    Vec3 bs_position{0.0, 0.0, 0.0};
    Vec3 hap_position{1000.0, 0.0, 18000.0};
    Vec3 uav_position{80000.0, 0.0, 50.0};

    int num_robots = 10;
    double area_side = 500.0;
    Vec2 area_center{80000.0, 0.0};
    // Fixed robot layout; when empty, experiments draw a fresh uniform layout per trial.
    std::vector<Vec2> robot_positions;

    double antenna_gain = 2.5118864315095806; // 4 dB
    double noise_power_uav = 3.981071705534973e-17;   // -134 dBm
    double noise_power_robot = 5.011872336272725e-18; // -143 dBm
    double bs_power_budget = 120.0;
    double uav_power_budget = 0.5;
    int bs_packet_bits = 80;
    int robot_packet_bits = 80;
    int bs_blocklength_min = 100;
    int bs_blocklength_max = 1000;
    int robot_blocklength_min = 100;
    int robot_blocklength_max = 1000;
    double uav_dep_threshold = 5e-5;
    double robot_dep_threshold = 5e-5;

    // Large-scale models. Friis amplitude times a constant excess loss for the
    // two HAP hops; log-distance for the UAV-to-ground links. The negative BS-HAP
    // term stands in for the unreported array/aperture gains of that hop; with
    // pure Friis no BS power within budget reaches the URLLC thresholds.
    double bs_hap_excess_loss_db = -37.0;
    double hap_uav_excess_loss_db = 0.0;
    double uav_frequency = 2e9;
    double utg_intercept_db = 59.5;
    double utg_exponent = 2.5;

    // Sparse HAP-UAV channel and estimation stage.
    int num_paths = 8;
    double angular_spread = kPi / 12.0;
    int num_pilots = 48;
    double estimation_snr_db = 16.0;

    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct BsHapChannel
{
    CMat matrix; // N x M
    cdouble gain;
    double aod = 0.0; // at the BS array
    double aoa = 0.0; // at the RIS
};

struct SparseChannelInstance
{
    int num_paths = 0;
    std::vector<cdouble> path_gains; // includes large_scale_gain
    std::vector<double> path_angles;
    CVec dense_channel;
    double large_scale_gain = 1.0;
    double los_angle = 0.0;

    // Small-scale part h / large_scale_gain; this is what the estimators recover.
    CVec normalized_channel() const { return dense_channel / large_scale_gain; }
};

struct UtgChannel
{
    double large_scale_gain = 0.0; // amplitude |g_k^L|
    cdouble small_scale{1.0, 0.0};
    double mean_snr_per_watt = 0.0; // |g_k^L|^2 / sigma_k^2

    double instantaneous_snr(double uav_power) const
    {
        return uav_power * mean_snr_per_watt * std::norm(small_scale);
    }
    double mean_snr(double uav_power) const { return uav_power * mean_snr_per_watt; }
};

// a(angle)_n = exp(-j 2 pi n spacing sin(angle)), n = 0..length-1.
CVec steering_vector(double angle, int length, double spacing);

// d a(angle) / d angle.
CVec steering_vector_derivative(double angle, int length, double spacing);

// Angle off the array normal of the direction from `from` to `to`, for a ULA
// laid along the x axis (asin of the x direction cosine).
double array_angle(const Vec3 &from, const Vec3 &to);

double distance(const Vec3 &a, const Vec3 &b);

// Free-space amplitude lambda/(4 pi d), scaled by an excess loss in dB.
double friis_amplitude(double wavelength, double dist, double excess_loss_db);

BsHapChannel make_bs_hap_channel(const Scenario &scenario, const ArrayConfig &arrays);

// Rebuilds h = sum_l beta_l a(omega_l).
CVec synthesize_channel(const std::vector<cdouble> &gains, const std::vector<double> &angles, int length, double spacing);

SparseChannelInstance sample_hap_uav_channel(const Scenario &scenario, const ArrayConfig &arrays, int num_paths, Rng &rng);

std::vector<Vec2> sample_robot_positions(const Scenario &scenario, Rng &rng);

// Uses scenario.robot_positions; they must be populated.
std::vector<UtgChannel> sample_utg_channels(const Scenario &scenario, Rng &rng);

} // namespace nsurllc

#endif
