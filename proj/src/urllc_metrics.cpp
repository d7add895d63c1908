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

#include "nsurllc/urllc_metrics.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsurllc
{

double q_function(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_inverse(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("q_inverse needs p in (0,1)");
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double LinkBudget::gamma() const
{
    return std::exp2(rate()) - 1.0;
}

double LinkBudget::chi() const
{
    return std::sqrt(blocklength / (2.0 * std::numbers::pi)) / std::sqrt(std::exp2(2.0 * rate()) - 1.0);
}

void LinkBudget::validate() const
{
    if (blocklength < 1)
        throw std::invalid_argument("blocklength must be >= 1");
    if (!(packet_bits > 0.0))
        throw std::invalid_argument("packet size must be positive");
}

LinkBudget make_link_budget(int blocklength, double packet_bits, double snr)
{
    LinkBudget b{blocklength, packet_bits, snr};
    b.validate();
    return b;
}

double dep_argument(int blocklength, double snr, double rate)
{
    const double dispersion = 1.0 - 1.0 / ((1.0 + snr) * (1.0 + snr));
    return std::sqrt(blocklength / dispersion) * (std::log2(1.0 + snr) - rate) * std::numbers::ln2;
}

double exact_dep(const LinkBudget &budget)
{
    budget.validate();
    if (!(budget.snr > 0.0))
        throw std::invalid_argument("exact_dep needs snr > 0");
    if (std::isinf(budget.snr))
        return 0.0;
    return q_function(dep_argument(budget.blocklength, budget.snr, budget.rate()));
}

double linearized_dep(const LinkBudget &budget)
{
    budget.validate();
    const double chi = budget.chi();
    const double gamma = budget.gamma();
    if (budget.snr <= gamma - 1.0 / chi)
        return 1.0;
    if (budget.snr >= gamma + 1.0 / chi)
        return 0.0;
    return 0.5 - 0.5 * chi * (budget.snr - gamma);
}

double expected_dep_rayleigh(const LinkBudget &budget, double mean_snr)
{
    if (!(mean_snr > 0.0))
        throw std::invalid_argument("mean SNR must be positive");
    return std::clamp(2.0 * budget.gamma() / mean_snr, 0.0, 1.0);
}

double expected_linearized_dep(const LinkBudget &budget, double mean_snr)
{
    if (!(mean_snr > 0.0))
        throw std::invalid_argument("mean SNR must be positive");
    // Omega = (chi/2) * length of [max(snr, snr_low), snr_up], so
    // E[Omega] = (chi/2) * int_{snr_low}^{snr_up} P(SNR <= x) dx.
    const double lo = std::max(budget.snr_low(), 0.0);
    const double hi = std::max(budget.snr_up(), 0.0);
    const double integral = (hi - lo) + mean_snr * (std::exp(-hi / mean_snr) - std::exp(-lo / mean_snr));
    return std::clamp(0.5 * budget.chi() * integral, 0.0, 1.0);
}

OverallDep overall_dep(double dep_uav, double dep_robot)
{
    if (!(dep_uav >= 0.0 && dep_uav <= 1.0 && dep_robot >= 0.0 && dep_robot <= 1.0))
        throw std::invalid_argument("DEPs must lie in [0,1]");
    return {dep_robot + dep_uav - dep_uav * dep_robot, dep_robot + dep_uav};
}

AchievableRate mar(int blocklength, double snr, double dep)
{
    if (blocklength < 1)
        throw std::invalid_argument("blocklength must be >= 1");
    if (!(snr > 0.0))
        throw std::invalid_argument("mar needs snr > 0");
    const double dispersion = 1.0 - 1.0 / ((1.0 + snr) * (1.0 + snr));
    AchievableRate r;
    r.rate = std::log2(1.0 + snr) - std::sqrt(dispersion / blocklength) * q_inverse(dep) / std::numbers::ln2;
    r.below_validity = blocklength < 50;
    return r;
}

} // namespace nsurllc
