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

#include "nsurllc/channel_models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsurllc
{

void ArrayConfig::validate() const
{
    if (num_bs_antennas < 1 || num_ris_elements < 1)
        throw std::invalid_argument("array sizes must be >= 1");
    if (!(bs_spacing > 0.0) || !(ris_spacing > 0.0))
        throw std::invalid_argument("element spacing must be positive");
    if (!(carrier_frequency > 0.0))
        throw std::invalid_argument("carrier frequency must be positive");
}

void Scenario::validate() const
{
    arrays.validate();
    auto positive = [](double v, const char *name) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string(name) + " must be positive");
    };
    positive(antenna_gain, "antenna_gain");
    positive(noise_power_uav, "noise_power_uav");
    positive(noise_power_robot, "noise_power_robot");
    positive(bs_power_budget, "bs_power_budget");
    positive(uav_power_budget, "uav_power_budget");
    positive(uav_frequency, "uav_frequency");
    positive(area_side, "area_side");
    positive(angular_spread, "angular_spread");
    if (bs_packet_bits < 1 || robot_packet_bits < 1)
        throw std::invalid_argument("packet sizes must be >= 1 bit");
    if (!(uav_dep_threshold > 0.0 && uav_dep_threshold < 1.0) ||
        !(robot_dep_threshold > 0.0 && robot_dep_threshold < 1.0))
        throw std::invalid_argument("DEP thresholds must lie in (0,1)");
    if (bs_blocklength_min < 1 || bs_blocklength_min > bs_blocklength_max)
        throw std::invalid_argument("BS blocklength bounds must satisfy 1 <= min <= max");
    if (robot_blocklength_min < 1 || robot_blocklength_min > robot_blocklength_max)
        throw std::invalid_argument("robot blocklength bounds must satisfy 1 <= min <= max");
    if (num_robots < 1)
        throw std::invalid_argument("num_robots must be >= 1");
    if (num_paths < 1)
        throw std::invalid_argument("num_paths must be >= 1");
    if (num_pilots < 1 || num_pilots > arrays.num_ris_elements)
        throw std::invalid_argument("num_pilots must lie in [1, N]");
    if (!robot_positions.empty())
    {
        if (static_cast<int>(robot_positions.size()) != num_robots)
            throw std::invalid_argument("robot_positions must list num_robots entries");
        const double h = area_side / 2.0;
        for (const auto &p : robot_positions)
            if (std::abs(p[0] - area_center[0]) > h || std::abs(p[1] - area_center[1]) > h)
                throw std::invalid_argument("robot position outside the service area");
    }
}

CVec steering_vector(double angle, int length, double spacing)
{
    CVec a(length);
    const double phase = -2.0 * kPi * spacing * std::sin(angle);
    for (int n = 0; n < length; ++n)
        a[n] = std::polar(1.0, phase * n);
    return a;
}

CVec steering_vector_derivative(double angle, int length, double spacing)
{
    CVec a = steering_vector(angle, length, spacing);
    const double k = -2.0 * kPi * spacing * std::cos(angle);
    for (int n = 0; n < length; ++n)
        a[n] *= cdouble(0.0, k * n);
    return a;
}

double distance(const Vec3 &a, const Vec3 &b)
{
    const double dx = b[0] - a[0], dy = b[1] - a[1], dz = b[2] - a[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double array_angle(const Vec3 &from, const Vec3 &to)
{
    const double d = distance(from, to);
    if (!(d > 0.0))
        throw std::invalid_argument("coincident positions have no direction");
    return std::asin(std::clamp((to[0] - from[0]) / d, -1.0, 1.0));
}

double friis_amplitude(double wavelength, double dist, double excess_loss_db)
{
    return wavelength / (4.0 * kPi * dist) * std::pow(10.0, -excess_loss_db / 20.0);
}

BsHapChannel make_bs_hap_channel(const Scenario &scenario, const ArrayConfig &arrays)
{
    arrays.validate();
    const double d = distance(scenario.bs_position, scenario.hap_position);
    if (!(d > 0.0))
        throw std::invalid_argument("BS and HAP positions coincide");
    if (!(scenario.hap_position[2] > scenario.bs_position[2]))
        throw std::invalid_argument("HAP must be above the BS horizon");

    BsHapChannel ch;
    ch.aod = array_angle(scenario.bs_position, scenario.hap_position);
    ch.aoa = array_angle(scenario.hap_position, scenario.bs_position);
    const double lambda = arrays.wavelength();
    const double amp = friis_amplitude(lambda, d, scenario.bs_hap_excess_loss_db);
    ch.gain = std::polar(amp, -2.0 * kPi * std::fmod(d / lambda, 1.0));

    const CVec a_ris = steering_vector(ch.aoa, arrays.num_ris_elements, arrays.ris_spacing);
    const CVec a_bs = steering_vector(ch.aod, arrays.num_bs_antennas, arrays.bs_spacing);
    ch.matrix = ch.gain * a_ris * a_bs.adjoint();
    return ch;
}

CVec synthesize_channel(const std::vector<cdouble> &gains, const std::vector<double> &angles, int length, double spacing)
{
    CVec h = CVec::Zero(length);
    for (std::size_t l = 0; l < gains.size(); ++l)
        h += gains[l] * steering_vector(angles[l], length, spacing);
    return h;
}

SparseChannelInstance sample_hap_uav_channel(const Scenario &scenario, const ArrayConfig &arrays, int num_paths, Rng &rng)
{
    if (num_paths < 1)
        throw std::invalid_argument("num_paths must be >= 1");
    const double d = distance(scenario.hap_position, scenario.uav_position);
    if (!(d > 0.0))
        throw std::invalid_argument("HAP and UAV positions coincide");

    SparseChannelInstance inst;
    inst.num_paths = num_paths;
    inst.los_angle = array_angle(scenario.hap_position, scenario.uav_position);
    inst.large_scale_gain = friis_amplitude(arrays.wavelength(), d, scenario.hap_uav_excess_loss_db);

    const double half = scenario.angular_spread / 2.0;
    std::uniform_real_distribution<double> aod(inst.los_angle - half, inst.los_angle + half);
    const double scale = inst.large_scale_gain / std::sqrt(static_cast<double>(num_paths));
    for (int l = 0; l < num_paths; ++l)
    {
        // Keep the draw order fixed (angle, then gain) so seeds stay reproducible.
        const double w = std::clamp(aod(rng), -kPi / 2.0 + 1e-9, kPi / 2.0 - 1e-9);
        inst.path_angles.push_back(w);
        inst.path_gains.push_back(scale * complex_normal(rng));
    }
    inst.dense_channel = synthesize_channel(inst.path_gains, inst.path_angles, arrays.num_ris_elements, arrays.ris_spacing);
    return inst;
}

std::vector<Vec2> sample_robot_positions(const Scenario &scenario, Rng &rng)
{
    const double h = scenario.area_side / 2.0;
    std::uniform_real_distribution<double> ux(scenario.area_center[0] - h, scenario.area_center[0] + h);
    std::uniform_real_distribution<double> uy(scenario.area_center[1] - h, scenario.area_center[1] + h);
    std::vector<Vec2> pos(scenario.num_robots);
    for (auto &p : pos)
    {
        p[0] = ux(rng);
        p[1] = uy(rng);
    }
    return pos;
}

std::vector<UtgChannel> sample_utg_channels(const Scenario &scenario, Rng &rng)
{
    if (scenario.robot_positions.empty())
        throw std::invalid_argument("scenario has no robot positions");
    std::vector<UtgChannel> out;
    out.reserve(scenario.robot_positions.size());
    for (const auto &p : scenario.robot_positions)
    {
        const Vec3 ground{p[0], p[1], 0.0};
        const double d = std::max(distance(scenario.uav_position, ground), 1.0);
        const double path_loss_db = scenario.utg_intercept_db + 10.0 * scenario.utg_exponent * std::log10(d);
        UtgChannel ch;
        ch.large_scale_gain = std::pow(10.0, -path_loss_db / 20.0);
        ch.small_scale = complex_normal(rng);
        ch.mean_snr_per_watt = ch.large_scale_gain * ch.large_scale_gain / scenario.noise_power_robot;
        out.push_back(ch);
    }
    return out;
}

} // namespace nsurllc
