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

#ifndef NSURLLC_URLLC_METRICS_HPP
#define NSURLLC_URLLC_METRICS_HPP

namespace nsurllc
{

// Gaussian tail probability Q(x) = 0.5 erfc(x / sqrt 2).
double q_function(double x);

// Inverse of q_function on (0, 1).
double q_inverse(double p);

// Finite-blocklength link: b channel uses carrying F bits at a given SNR.
struct LinkBudget
{
    int blocklength = 1;
    double packet_bits = 1.0;
    double snr = 1.0;

    double rate() const { return packet_bits / blocklength; }
    double gamma() const;
    double chi() const;
    double snr_low() const { return gamma() - 1.0 / chi(); }
    double snr_up() const { return gamma() + 1.0 / chi(); }
    void validate() const;
};

LinkBudget make_link_budget(int blocklength, double packet_bits, double snr);

// Argument of Q in the normal approximation: sqrt(b / V) (log2(1+snr) - R) ln 2.
double dep_argument(int blocklength, double snr, double rate);

// Decoding error probability under the normal approximation. Requires snr > 0.
double exact_dep(const LinkBudget &budget);

// Piecewise-linear expansion of exact_dep around snr = gamma.
double linearized_dep(const LinkBudget &budget);

// High-SNR expected DEP over Rayleigh fading, 2 gamma / mean_snr, clamped to [0,1].
double expected_dep_rayleigh(const LinkBudget &budget, double mean_snr);

// E[linearized_dep] over an exponential SNR with the given mean, in closed form.
double expected_linearized_dep(const LinkBudget &budget, double mean_snr);

struct OverallDep
{
    double exact = 0.0; // eps_k + eps_u - eps_u eps_k
    double bound = 0.0; // eps_k + eps_u
};

OverallDep overall_dep(double dep_uav, double dep_robot);

struct AchievableRate
{
    double rate = 0.0;
    bool below_validity = false; // blocklength < 50: normal approximation is loose
};

// Maximum achievable coding rate at blocklength b, SNR and target DEP.
AchievableRate mar(int blocklength, double snr, double dep);

} // namespace nsurllc

#endif
