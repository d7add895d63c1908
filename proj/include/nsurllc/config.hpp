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

#ifndef NSURLLC_CONFIG_HPP
#define NSURLLC_CONFIG_HPP

#include "nsurllc/channel_models.hpp"

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace nsurllc
{

// Flat `key = value` text. `#` starts a comment. Values may carry a unit
// suffix (W, mW, dBm, dB, m, km, Hz, MHz, GHz, rad, deg); lists are comma
// separated with one optional trailing unit.
struct ConfigFile
{
    Scenario scenario;
    // Sweep values per experiment kind, e.g. `sweep.nmse_vs_snr = 0,4,8`.
    std::map<std::string, std::vector<double>> sweeps;
    std::vector<double> dep_thresholds;
};

ConfigFile parse_config(std::istream &in);
ConfigFile load_config(const std::string &path);

// Applies a single key/value to `cfg`; throws std::invalid_argument on unknown
// keys or malformed values.
void apply_setting(ConfigFile &cfg, const std::string &key, const std::string &value);

std::vector<std::string> config_keys();

} // namespace nsurllc

#endif
