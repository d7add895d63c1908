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

#include "nsurllc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace nsurllc
{

namespace
{

enum class Dim
{
    none,     // plain number
    power,    // W, mW, dBm -> W
    gain,     // dB or linear -> linear
    decibel,  // dB -> dB number
    length,   // m, km -> m
    frequency,
    angle,    // rad, deg -> rad
};

std::string trim(std::string s)
{
    auto ws = [](unsigned char c) { return std::isspace(c); };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

double to_number(const std::string &text, const std::string &key)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto *first = t.data();
    const auto *last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw std::invalid_argument("config: bad number '" + t + "' for " + key);
    return v;
}

// Splits "1.5 GHz" / "1.5GHz" into number text and unit.
std::pair<std::string, std::string> split_unit(const std::string &text)
{
    const std::string t = trim(text);
    std::size_t i = t.size();
    while (i > 0 && std::isalpha(static_cast<unsigned char>(t[i - 1])))
        --i;
    // Exponent markers ("1e-5") end in a digit, so a trailing alpha run is a unit.
    return {trim(t.substr(0, i)), t.substr(i)};
}

double convert(double v, const std::string &unit, Dim dim, const std::string &key)
{
    auto bad = [&]() { return std::invalid_argument("config: unit '" + unit + "' not valid for " + key); };
    switch (dim)
    {
    case Dim::none:
        if (!unit.empty())
            throw bad();
        return v;
    case Dim::power:
        if (unit.empty() || unit == "W")
            return v;
        if (unit == "mW")
            return v * 1e-3;
        if (unit == "dBm")
            return dbm_to_watt(v);
        if (unit == "dBW")
            return db_to_linear(v);
        throw bad();
    case Dim::gain:
        if (unit.empty())
            return v;
        if (unit == "dB" || unit == "dBi")
            return db_to_linear(v);
        throw bad();
    case Dim::decibel:
        if (unit.empty() || unit == "dB")
            return v;
        throw bad();
    case Dim::length:
        if (unit.empty() || unit == "m")
            return v;
        if (unit == "km")
            return v * 1e3;
        throw bad();
    case Dim::frequency:
        if (unit.empty() || unit == "Hz")
            return v;
        if (unit == "kHz")
            return v * 1e3;
        if (unit == "MHz")
            return v * 1e6;
        if (unit == "GHz")
            return v * 1e9;
        throw bad();
    case Dim::angle:
        if (unit.empty() || unit == "rad")
            return v;
        if (unit == "deg")
            return v * kPi / 180.0;
        throw bad();
    }
    throw bad();
}

double scalar(const std::string &value, Dim dim, const std::string &key)
{
    auto [num, unit] = split_unit(value);
    return convert(to_number(num, key), unit, dim, key);
}

std::vector<double> list(const std::string &value, Dim dim, const std::string &key)
{
    auto [body, unit] = split_unit(value);
    std::vector<double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        auto [num, own_unit] = split_unit(item);
        out.push_back(convert(to_number(num, key), own_unit.empty() ? unit : own_unit, dim, key));
    }
    if (out.empty())
        throw std::invalid_argument("config: empty list for " + key);
    return out;
}

int integer(const std::string &value, const std::string &key)
{
    const double v = scalar(value, Dim::none, key);
    if (v != static_cast<double>(static_cast<long long>(v)))
        throw std::invalid_argument("config: " + key + " must be an integer");
    return static_cast<int>(v);
}

template <std::size_t K>
std::array<double, K> fixed(const std::string &value, Dim dim, const std::string &key)
{
    const auto v = list(value, dim, key);
    if (v.size() != K)
        throw std::invalid_argument("config: " + key + " needs " + std::to_string(K) + " components");
    std::array<double, K> a{};
    std::copy(v.begin(), v.end(), a.begin());
    return a;
}

using Setter = std::function<void(ConfigFile &, const std::string &, const std::string &)>;

const std::map<std::string, Setter> &setters()
{
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto real = [&](const char *name, auto member, Dim dim) {
            t[name] = [member, dim](ConfigFile &c, const std::string &k, const std::string &v) {
                c.scenario.*member = scalar(v, dim, k);
            };
        };
        auto whole = [&](const char *name, auto member) {
            t[name] = [member](ConfigFile &c, const std::string &k, const std::string &v) {
                c.scenario.*member = integer(v, k);
            };
        };
        auto arr = [&](const char *name, auto member, Dim dim) {
            t[name] = [member, dim](ConfigFile &c, const std::string &k, const std::string &v) {
                c.scenario.arrays.*member = scalar(v, dim, k);
            };
        };
        t["num_bs_antennas"] = [](ConfigFile &c, const std::string &k, const std::string &v) {
            c.scenario.arrays.num_bs_antennas = integer(v, k);
        };
        t["num_ris_elements"] = [](ConfigFile &c, const std::string &k, const std::string &v) {
            c.scenario.arrays.num_ris_elements = integer(v, k);
        };
        arr("bs_spacing", &ArrayConfig::bs_spacing, Dim::none);
        arr("ris_spacing", &ArrayConfig::ris_spacing, Dim::none);
        arr("carrier_frequency", &ArrayConfig::carrier_frequency, Dim::frequency);

        t["bs_position"] = [](ConfigFile &c, const std::string &k, const std::string &v) {
            c.scenario.bs_position = fixed<3>(v, Dim::length, k);
        };
        t["hap_position"] = [](ConfigFile &c, const std::string &k, const std::string &v) {
            c.scenario.hap_position = fixed<3>(v, Dim::length, k);
        };
        t["uav_position"] = [](ConfigFile &c, const std::string &k, const std::string &v) {
            c.scenario.uav_position = fixed<3>(v, Dim::length, k);
        };
        t["area_center"] = [](ConfigFile &c, const std::string &k, const std::string &v) {
            c.scenario.area_center = fixed<2>(v, Dim::length, k);
        };
        // x1, y1, x2, y2, ... in metres (or with one trailing unit).
        t["robot_positions"] = [](ConfigFile &c, const std::string &k, const std::string &v) {
            const auto xs = list(v, Dim::length, k);
            if (xs.size() % 2 != 0)
                throw std::invalid_argument("config: robot_positions needs x,y pairs");
            c.scenario.robot_positions.clear();
            for (std::size_t i = 0; i < xs.size(); i += 2)
                c.scenario.robot_positions.push_back({xs[i], xs[i + 1]});
        };
        whole("num_robots", &Scenario::num_robots);
        real("area_side", &Scenario::area_side, Dim::length);
        real("antenna_gain", &Scenario::antenna_gain, Dim::gain);
        real("noise_power_uav", &Scenario::noise_power_uav, Dim::power);
        real("noise_power_robot", &Scenario::noise_power_robot, Dim::power);
        real("bs_power_budget", &Scenario::bs_power_budget, Dim::power);
        real("uav_power_budget", &Scenario::uav_power_budget, Dim::power);
        whole("bs_packet_bits", &Scenario::bs_packet_bits);
        whole("robot_packet_bits", &Scenario::robot_packet_bits);
        whole("bs_blocklength_min", &Scenario::bs_blocklength_min);
        whole("bs_blocklength_max", &Scenario::bs_blocklength_max);
        whole("robot_blocklength_min", &Scenario::robot_blocklength_min);
        whole("robot_blocklength_max", &Scenario::robot_blocklength_max);
        real("uav_dep_threshold", &Scenario::uav_dep_threshold, Dim::none);
        real("robot_dep_threshold", &Scenario::robot_dep_threshold, Dim::none);
        real("bs_hap_excess_loss", &Scenario::bs_hap_excess_loss_db, Dim::decibel);
        real("hap_uav_excess_loss", &Scenario::hap_uav_excess_loss_db, Dim::decibel);
        real("uav_frequency", &Scenario::uav_frequency, Dim::frequency);
        real("utg_intercept", &Scenario::utg_intercept_db, Dim::decibel);
        real("utg_exponent", &Scenario::utg_exponent, Dim::none);
        whole("num_paths", &Scenario::num_paths);
        real("angular_spread", &Scenario::angular_spread, Dim::angle);
        whole("num_pilots", &Scenario::num_pilots);
        real("estimation_snr", &Scenario::estimation_snr_db, Dim::decibel);
        t["seed"] = [](ConfigFile &c, const std::string &k, const std::string &v) {
            const double s = scalar(v, Dim::none, k);
            if (s < 0.0)
                throw std::invalid_argument("config: seed must be non-negative");
            c.scenario.rng_seed = static_cast<std::uint64_t>(s);
        };
        t["dep_thresholds"] = [](ConfigFile &c, const std::string &k, const std::string &v) {
            c.dep_thresholds = list(v, Dim::none, k);
        };
        return t;
    }();
    return table;
}

} // namespace

void apply_setting(ConfigFile &cfg, const std::string &key, const std::string &value)
{
    const std::string k = trim(key);
    if (k.rfind("sweep.", 0) == 0)
    {
        const std::string kind = k.substr(6);
        Dim dim = Dim::none;
        if (kind == "ee_vs_Pu")
            dim = Dim::power;
        else if (kind == "nmse_vs_snr")
            dim = Dim::decibel;
        else if (kind == "ee_vs_area")
            dim = Dim::length;
        cfg.sweeps[kind] = list(value, dim, k);
        return;
    }
    const auto &t = setters();
    auto it = t.find(k);
    if (it == t.end())
        throw std::invalid_argument("config: unknown key '" + k + "'");
    it->second(cfg, k, value);
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto &kv : setters())
        keys.push_back(kv.first);
    keys.push_back("sweep.<experiment>");
    return keys;
}

ConfigFile parse_config(std::istream &in)
{
    ConfigFile cfg;
    std::string line;
    int number = 0;
    while (std::getline(in, line))
    {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
        try
        {
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        }
        catch (const std::invalid_argument &e)
        {
            throw std::invalid_argument("config line " + std::to_string(number) + ": " + e.what());
        }
    }
    cfg.scenario.validate();
    return cfg;
}

ConfigFile load_config(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("cannot open config file " + path);
    return parse_config(f);
}

} // namespace nsurllc
