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

#include "nsurllc/ris_phase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nsurllc
{

const char *to_string(PhaseStrategy s)
{
    switch (s)
    {
    case PhaseStrategy::aligned:
        return "aligned";
    case PhaseStrategy::random:
        return "random";
    case PhaseStrategy::zero:
        return "zero";
    case PhaseStrategy::exhaustive:
        return "exhaustive";
    }
    return "unknown";
}

CVec PhaseConfiguration::reflection() const
{
    CVec r(phase_shifts.size());
    for (Eigen::Index n = 0; n < phase_shifts.size(); ++n)
        r(n) = std::polar(1.0, phase_shifts(n));
    return r;
}

CVec mrt_precoder(const BsHapChannel &channel, const ArrayConfig &arrays)
{
    CVec v = steering_vector(channel.aod, arrays.num_bs_antennas, arrays.bs_spacing);
    return v / v.norm();
}

double coherent_gain_closed_form(double delta_psi, int n, double spacing)
{
    const double x = spacing * delta_psi;
    const double den = std::sin(kPi * x);
    if (std::abs(den) < 1e-12)
        return static_cast<double>(n) * n;
    const double r = std::sin(kPi * n * x) / den;
    return r * r;
}

static double wrap_2pi(double t)
{
    t = std::fmod(t, 2.0 * kPi);
    if (t < 0.0)
        t += 2.0 * kPi;
    if (t >= 2.0 * kPi)
        t = 0.0;
    return t;
}

RVec steering_phases(double angle, double aoa, int n, double spacing, double free_phase)
{
    RVec th(n);
    const double ds = std::sin(angle) - std::sin(aoa);
    for (int i = 0; i < n; ++i)
        th(i) = wrap_2pi(free_phase - 2.0 * kPi * i * spacing * ds);
    return th;
}

static double path_weight(const PathEstimate &p)
{
    return std::abs(p.gain) * std::abs(std::cos(p.angle));
}

double alignment_objective(const std::vector<PathEstimate> &paths, double w0)
{
    double s = 0.0;
    for (const auto &p : paths)
        s += path_weight(p) * std::abs(p.angle - w0);
    return s;
}

double weighted_median_angle(const std::vector<PathEstimate> &paths)
{
    if (paths.empty())
        throw std::invalid_argument("need at least one path");
    std::vector<std::size_t> idx(paths.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return paths[a].angle < paths[b].angle; });
    double total = 0.0;
    for (const auto &p : paths)
        total += path_weight(p);
    if (!(total > 0.0))
    {
        auto best = std::max_element(paths.begin(), paths.end(),
                                     [](const auto &a, const auto &b) { return std::abs(a.gain) < std::abs(b.gain); });
        return best->angle;
    }
    // First angle at which the cumulative weight reaches half the total. When
    // it lands exactly on half, every point up to the next angle is optimal and
    // the smaller one is kept.
    double acc = 0.0;
    for (auto i : idx)
    {
        acc += path_weight(paths[i]);
        if (acc >= 0.5 * total * (1.0 - 1e-12))
            return paths[i].angle;
    }
    return paths[idx.back()].angle;
}

PhaseConfiguration align_phases(const std::vector<PathEstimate> &paths, double aoa, const ArrayConfig &arrays,
                                double free_phase)
{
    PhaseConfiguration c;
    c.strategy = PhaseStrategy::aligned;
    c.alignment_angle = weighted_median_angle(paths);
    c.phase_shifts = steering_phases(c.alignment_angle, aoa, arrays.num_ris_elements, arrays.ris_spacing, free_phase);
    return c;
}

CascadeGain cascade_snr(const CVec &h, const PhaseConfiguration &phases, const BsHapChannel &bs_hap, const CVec &v,
                        double bs_power, double antenna_gain, double noise_power)
{
    if (h.size() != bs_hap.matrix.rows() || phases.phase_shifts.size() != h.size() || v.size() != bs_hap.matrix.cols())
        throw std::invalid_argument("cascade_snr: dimension mismatch");
    const CVec hv = bs_hap.matrix * v;
    const cdouble s = h.dot(phases.reflection().cwiseProduct(hv)); // h^H Theta H v
    CascadeGain g;
    g.precoder = v;
    g.delta_b = antenna_gain * std::norm(s) / noise_power;
    g.snr_u = bs_power * g.delta_b;
    return g;
}

double cascade_snr_paths(const std::vector<PathEstimate> &paths, const PhaseConfiguration &phases,
                         const BsHapChannel &bs_hap, const ArrayConfig &arrays, double bs_power, double antenna_gain,
                         double noise_power)
{
    const int n = arrays.num_ris_elements;
    const double d = arrays.ris_spacing;
    cdouble total{0.0, 0.0};
    for (const auto &p : paths)
    {
        const double ds = std::sin(p.angle) - std::sin(bs_hap.aoa);
        cdouble inner{0.0, 0.0};
        for (int i = 0; i < n; ++i)
            inner += std::polar(1.0, phases.phase_shifts(i) + 2.0 * kPi * i * d * ds);
        total += std::conj(p.gain) * inner;
    }
    return bs_power * antenna_gain * std::norm(bs_hap.gain) * arrays.num_bs_antennas * std::norm(total) / noise_power;
}

PhaseConfiguration random_phases(int n, Rng &rng)
{
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    PhaseConfiguration c;
    c.strategy = PhaseStrategy::random;
    c.phase_shifts.resize(n);
    for (int i = 0; i < n; ++i)
        c.phase_shifts(i) = u(rng);
    return c;
}

PhaseConfiguration zero_phases(int n)
{
    PhaseConfiguration c;
    c.strategy = PhaseStrategy::zero;
    c.phase_shifts = RVec::Zero(n);
    return c;
}

PhaseConfiguration exhaustive_phases(const CVec &h, const BsHapChannel &bs_hap, const ArrayConfig &arrays,
                                     double resolution)
{
    if (!(resolution > 0.0))
        throw std::invalid_argument("search resolution must be positive");
    const int n = arrays.num_ris_elements;
    const double d = arrays.ris_spacing;
    // With Theta steering toward w, h^H Theta a_ris(aoa) = sum_n conj(h_n) a_n(w),
    // so the search only needs a geometric sum per candidate.
    const auto steps = static_cast<long>(std::floor(0.5 * kPi / resolution));
    double best_angle = 0.0;
    double best = -1.0;
    for (long k = 0; k <= steps; ++k)
    {
        const double w = std::min(k * resolution, 0.5 * kPi);
        const cdouble z = std::polar(1.0, -2.0 * kPi * d * std::sin(w));
        cdouble zn{1.0, 0.0};
        cdouble acc{0.0, 0.0};
        for (int i = 0; i < n; ++i)
        {
            acc += std::conj(h(i)) * zn;
            zn *= z;
        }
        const double val = std::norm(acc);
        if (val > best)
        {
            best = val;
            best_angle = w;
        }
    }
    PhaseConfiguration c;
    c.strategy = PhaseStrategy::exhaustive;
    c.alignment_angle = best_angle;
    c.phase_shifts = steering_phases(best_angle, bs_hap.aoa, n, d);
    return c;
}

} // namespace nsurllc
