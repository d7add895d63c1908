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

#include "nsurllc/resource_optimizer.hpp"

#include "nsurllc/urllc_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace nsurllc
{

namespace
{

constexpr double kFeasTol = 1e-9;

// Closed-form BS power, or nullopt when infeasible at this blocklength.
std::optional<double> bs_power_if_feasible(int b, double delta_b, const Scenario &sc)
{
    const auto budget = make_link_budget(b, sc.bs_packet_bits, 0.0);
    const double p = std::min(sc.bs_power_budget, budget.snr_up() / delta_b);
    if (uav_dep_normalized(b, p, delta_b, sc) > 1.0 + kFeasTol)
        return std::nullopt;
    return p;
}

// Minimum normalized UAV power that satisfies robot k's DEP at blocklength b.
double min_uav_power_normalized(int b, const UtgChannel &ch, const Scenario &sc)
{
    const double gamma = std::exp2(static_cast<double>(sc.robot_packet_bits) / b) - 1.0;
    return 2.0 * gamma / (ch.mean_snr_per_watt * sc.robot_dep_threshold * sc.uav_power_budget);
}

double robot_rate(int b, const Scenario &sc)
{
    return static_cast<double>(sc.robot_packet_bits) / b;
}

// min_k R_k (1 - eps_k) at the given UAV power.
double worst_robot_throughput(const OptimizerInputs &in, const std::vector<int> &bk, double uav_power,
                              const Scenario &sc)
{
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < in.utg.size(); ++k)
        worst = std::min(worst, robot_rate(bk[k], sc) * (1.0 - robot_dep_normalized(bk[k], uav_power, in.utg[k], sc)));
    return worst;
}

double bs_objective(int b, double pb, const OptimizerInputs &in, const std::vector<int> &bk, double pu,
                    const Scenario &sc)
{
    const double ru = static_cast<double>(sc.bs_packet_bits) / b;
    const double num = ru * (1.0 - uav_dep_normalized(b, pb, in.delta_b, sc)) + worst_robot_throughput(in, bk, pu, sc);
    return num / (pb / sc.bs_power_budget + pu / sc.uav_power_budget);
}

void check_inputs(const OptimizerInputs &in, const Scenario &sc)
{
    sc.validate();
    if (!(in.delta_b > 0.0) || !std::isfinite(in.delta_b))
        throw std::invalid_argument("cascade SNR per watt must be positive");
    if (in.utg.empty())
        throw std::invalid_argument("at least one robot channel is required");
}

} // namespace

double uav_dep_normalized(int bs_blocklength, double bs_power, double delta_b, const Scenario &scenario)
{
    const auto budget = make_link_budget(bs_blocklength, scenario.bs_packet_bits, bs_power * delta_b);
    return linearized_dep(budget) / scenario.uav_dep_threshold;
}

double robot_dep_normalized(int blocklength, double uav_power, const UtgChannel &channel, const Scenario &scenario)
{
    const auto budget = make_link_budget(blocklength, scenario.robot_packet_bits, 0.0);
    return expected_dep_rayleigh(budget, channel.mean_snr(uav_power)) / scenario.robot_dep_threshold;
}

double bs_power_closed_form(int bs_blocklength, double delta_b, const Scenario &scenario)
{
    if (!(delta_b > 0.0))
        throw std::invalid_argument("cascade SNR per watt must be positive");
    if (bs_blocklength < scenario.bs_blocklength_min || bs_blocklength > scenario.bs_blocklength_max)
        throw std::invalid_argument("BS blocklength out of bounds");
    auto p = bs_power_if_feasible(bs_blocklength, delta_b, scenario);
    if (!p)
        throw InfeasibleError("bs", -1,
                              "BS power budget cannot meet the UAV DEP threshold at b_u=" +
                                  std::to_string(bs_blocklength));
    return *p;
}

EEOutcome evaluate(const ResourceDecision &d, const OptimizerInputs &in, const Scenario &sc)
{
    EEOutcome o;
    o.rate_uav = static_cast<double>(sc.bs_packet_bits) / d.bs_blocklength;
    o.dep_uav_normalized = uav_dep_normalized(d.bs_blocklength, d.bs_power, in.delta_b, sc);
    const double power = d.bs_power / sc.bs_power_budget + d.uav_power / sc.uav_power_budget;
    o.min_ee = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < in.utg.size(); ++k)
    {
        const int b = d.robot_blocklengths[k];
        const double rk = robot_rate(b, sc);
        const double ek = robot_dep_normalized(b, d.uav_power, in.utg[k], sc);
        const double ee = (o.rate_uav * (1.0 - o.dep_uav_normalized) + rk * (1.0 - ek)) / power;
        o.rate_robot.push_back(rk);
        o.dep_robot_normalized.push_back(ek);
        o.per_robot_ee.push_back(ee);
        o.min_ee = std::min(o.min_ee, ee);
    }
    return o;
}

ConstraintReport verify(const ResourceDecision &d, const OptimizerInputs &in, const Scenario &sc)
{
    ConstraintReport r;
    r.powers = d.bs_power > 0.0 && d.bs_power <= sc.bs_power_budget * (1.0 + 1e-12) && d.uav_power > 0.0 &&
               d.uav_power <= sc.uav_power_budget * (1.0 + 1e-12);
    r.blocklengths = d.bs_blocklength >= sc.bs_blocklength_min && d.bs_blocklength <= sc.bs_blocklength_max &&
                     d.robot_blocklengths.size() == in.utg.size();
    for (int b : d.robot_blocklengths)
        r.blocklengths = r.blocklengths && b >= sc.robot_blocklength_min && b <= sc.robot_blocklength_max;
    r.uav_dep = r.powers && r.blocklengths &&
                uav_dep_normalized(d.bs_blocklength, d.bs_power, in.delta_b, sc) <= 1.0 + kFeasTol;
    r.robot_dep = r.powers && r.blocklengths;
    if (r.robot_dep)
        for (std::size_t k = 0; k < in.utg.size(); ++k)
            if (robot_dep_normalized(d.robot_blocklengths[k], d.uav_power, in.utg[k], sc) > 1.0 + kFeasTol)
            {
                r.robot_dep = false;
                r.binding_robot = static_cast<int>(k);
                break;
            }
    return r;
}

BsLayerChoice bs_blocklength_search(const OptimizerInputs &in, const std::vector<int> &robot_blocklengths,
                                    double uav_power, const Scenario &sc)
{
    BsLayerChoice best;
    best.objective = -std::numeric_limits<double>::infinity();
    for (int b = sc.bs_blocklength_min; b <= sc.bs_blocklength_max; ++b)
    {
        const auto pb = bs_power_if_feasible(b, in.delta_b, sc);
        if (!pb)
            continue;
        const double obj = bs_objective(b, *pb, in, robot_blocklengths, uav_power, sc);
        if (obj > best.objective)
            best = {b, *pb, obj};
    }
    if (best.blocklength == 0)
        throw InfeasibleError("bs", -1, "no BS blocklength meets the UAV DEP threshold within the power budget");
    return best;
}

BsLayerChoice bs_layer_alternation(const OptimizerInputs &in, const std::vector<int> &robot_blocklengths,
                                   double uav_power, const Scenario &sc, int max_iterations, int &iterations)
{
    int b = sc.bs_blocklength_min;
    iterations = 0;
    BsLayerChoice cur;
    while (iterations < max_iterations)
    {
        ++iterations;
        const auto pb_opt = bs_power_if_feasible(b, in.delta_b, sc);
        const double pb = pb_opt.value_or(sc.bs_power_budget);
        BsLayerChoice best;
        best.objective = -std::numeric_limits<double>::infinity();
        for (int c = sc.bs_blocklength_min; c <= sc.bs_blocklength_max; ++c)
        {
            if (uav_dep_normalized(c, pb, in.delta_b, sc) > 1.0 + kFeasTol)
                continue;
            const double obj = bs_objective(c, pb, in, robot_blocklengths, uav_power, sc);
            if (obj > best.objective)
                best = {c, pb, obj};
        }
        if (best.blocklength == 0)
            throw InfeasibleError("bs", -1, "no BS blocklength meets the UAV DEP threshold within the power budget");
        const bool fixed = best.blocklength == b && pb_opt.has_value();
        b = best.blocklength;
        if (fixed)
        {
            cur = best;
            break;
        }
    }
    const double pb = bs_power_closed_form(b, in.delta_b, sc);
    cur = {b, pb, bs_objective(b, pb, in, robot_blocklengths, uav_power, sc)};
    return cur;
}

double golden_section_max(const std::function<double(double)> &f, double lo, double hi, double tol)
{
    if (hi < lo)
        throw std::invalid_argument("golden section: empty interval");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b)))
    {
        if (fc >= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    // The endpoints are candidates too; the maximum of a concave function
    // often sits on the boundary here.
    double x = 0.5 * (a + b);
    double fx = f(x);
    for (double e : {lo, hi})
    {
        const double fe = f(e);
        if (fe > fx)
        {
            x = e;
            fx = fe;
        }
    }
    return x;
}

DinkelbachResult uav_power_dinkelbach(const OptimizerInputs &in, const std::vector<int> &robot_blocklengths,
                                      int bs_blocklength, double bs_power, const Scenario &sc, int max_iterations,
                                      double tolerance)
{
    check_inputs(in, sc);
    if (robot_blocklengths.size() != in.utg.size())
        throw std::invalid_argument("one blocklength per robot is required");
    const std::size_t k_count = in.utg.size();
    std::vector<double> c(k_count);
    std::vector<double> r(k_count);
    double lo = 0.0;
    int binding = 0;
    for (std::size_t k = 0; k < k_count; ++k)
    {
        c[k] = min_uav_power_normalized(robot_blocklengths[k], in.utg[k], sc);
        r[k] = robot_rate(robot_blocklengths[k], sc);
        if (c[k] > lo)
        {
            lo = c[k];
            binding = static_cast<int>(k);
        }
    }
    if (lo > 1.0 + kFeasTol)
        throw InfeasibleError("uav", binding,
                              "robot " + std::to_string(binding) + " needs more than the UAV power budget");
    lo = std::min(lo, 1.0);
    const double a = static_cast<double>(sc.bs_packet_bits) / bs_blocklength *
                     (1.0 - uav_dep_normalized(bs_blocklength, bs_power, in.delta_b, sc));
    const double pb = bs_power / sc.bs_power_budget;

    auto v = [&](double p) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < k_count; ++k)
            m = std::min(m, a + r[k] * (1.0 - c[k] / p));
        return m;
    };

    DinkelbachResult out;
    double eta = 0.0;
    double y_prev = 0.0;
    double p = 1.0;
    for (int it = 0; it < max_iterations; ++it)
    {
        p = golden_section_max([&](double x) { return v(x) - eta * (pb + x); }, std::max(lo, 1e-300), 1.0);
        const double y = v(p) - eta * (pb + p);
        eta = v(p) / (pb + p);
        out.eta_history.push_back(eta);
        ++out.iterations;
        out.y = y;
        if (std::abs(y - y_prev) <= tolerance)
            break;
        y_prev = y;
    }
    out.uav_power = p * sc.uav_power_budget;
    out.eta = eta;
    return out;
}

int robot_blocklength_search(double uav_power, const UtgChannel &channel, const Scenario &sc)
{
    const double mean = channel.mean_snr(uav_power);
    int best_b = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int b = sc.robot_blocklength_min; b <= sc.robot_blocklength_max; ++b)
    {
        const double rate = robot_rate(b, sc);
        const double dep = 2.0 * (std::exp2(rate) - 1.0) / mean;
        if (dep > sc.robot_dep_threshold * (1.0 + kFeasTol))
            continue;
        const double obj = rate * (1.0 - dep / sc.robot_dep_threshold);
        if (obj > best)
        {
            best = obj;
            best_b = b;
        }
    }
    return best_b;
}

namespace
{

std::vector<int> robot_search_all(double uav_power, const OptimizerInputs &in, const Scenario &sc)
{
    std::vector<int> bk(in.utg.size());
    for (std::size_t k = 0; k < in.utg.size(); ++k)
    {
        bk[k] = robot_blocklength_search(uav_power, in.utg[k], sc);
        if (bk[k] == 0)
            throw InfeasibleError("robot", static_cast<int>(k),
                                  "robot " + std::to_string(k) + " cannot meet its DEP threshold at full UAV power");
    }
    return bk;
}

OptimizationResult finish(ResourceDecision d, const OptimizerInputs &in, const Scenario &sc)
{
    d.bs_power_normalized = d.bs_power / sc.bs_power_budget;
    d.uav_power_normalized = d.uav_power / sc.uav_power_budget;
    OptimizationResult res;
    res.outcome = evaluate(d, in, sc);
    res.constraints = verify(d, in, sc);
    res.decision = std::move(d);
    return res;
}

} // namespace

OptimizationResult optimize_ptpb(const OptimizerInputs &in, const Scenario &sc)
{
    check_inputs(in, sc);
    std::vector<int> bk = robot_search_all(sc.uav_power_budget, in, sc);
    double pu = sc.uav_power_budget;
    BsLayerChoice bs;
    int bs_rounds = 0;
    int iterations = 0;
    int dinkelbach = 0;
    // The BS objective depends on p_u through the denominator, so the BS
    // layer is re-run on the UAV layer's output until neither layer moves.
    // Every step maximizes min-EE over its own block, so this never goes down.
    for (int outer = 0; outer < 10; ++outer)
    {
        const BsLayerChoice next_bs = bs_blocklength_search(in, bk, pu, sc);
        ++bs_rounds;
        if (outer > 0 && next_bs.blocklength == bs.blocklength)
            break;
        bs = next_bs;
        for (int c = 0; c < 100; ++c)
        {
            const auto dk = uav_power_dinkelbach(in, bk, bs.blocklength, bs.power, sc);
            dinkelbach += dk.iterations;
            const std::vector<int> next = robot_search_all(dk.uav_power, in, sc);
            ++iterations;
            const bool same = next == bk && std::abs(dk.uav_power - pu) <= 1e-12 * sc.uav_power_budget;
            pu = dk.uav_power;
            bk = next;
            if (same)
                break;
        }
        // the blocklength update can move the minimum admissible power
        const auto dk = uav_power_dinkelbach(in, bk, bs.blocklength, bs.power, sc);
        dinkelbach += dk.iterations;
        pu = dk.uav_power;
    }

    ResourceDecision d;
    d.bs_power = bs.power;
    d.bs_blocklength = bs.blocklength;
    d.uav_power = pu;
    d.robot_blocklengths = bk;
    auto res = finish(std::move(d), in, sc);
    res.bs_layer_iterations = bs_rounds;
    res.uav_layer_iterations = iterations;
    res.dinkelbach_iterations = dinkelbach;
    return res;
}

OptimizationResult optimize_mtp(const OptimizerInputs &in, const Scenario &sc)
{
    check_inputs(in, sc);
    const std::vector<int> bk = robot_search_all(sc.uav_power_budget, in, sc);
    const double pb = sc.bs_power_budget;
    int best_b = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int b = sc.bs_blocklength_min; b <= sc.bs_blocklength_max; ++b)
    {
        if (uav_dep_normalized(b, pb, in.delta_b, sc) > 1.0 + kFeasTol)
            continue;
        const double obj = bs_objective(b, pb, in, bk, sc.uav_power_budget, sc);
        if (obj > best)
        {
            best = obj;
            best_b = b;
        }
    }
    if (best_b == 0)
        throw InfeasibleError("bs", -1, "no BS blocklength meets the UAV DEP threshold at full power");
    ResourceDecision d;
    d.bs_power = pb;
    d.bs_blocklength = best_b;
    d.uav_power = sc.uav_power_budget;
    d.robot_blocklengths = bk;
    return finish(std::move(d), in, sc);
}

OptimizationResult optimize_mbl(const OptimizerInputs &in, const Scenario &sc)
{
    check_inputs(in, sc);
    const int bu = sc.bs_blocklength_max;
    const double pb = bs_power_closed_form(bu, in.delta_b, sc);
    const std::vector<int> bk(in.utg.size(), sc.robot_blocklength_max);
    const auto dk = uav_power_dinkelbach(in, bk, bu, pb, sc);
    ResourceDecision d;
    d.bs_power = pb;
    d.bs_blocklength = bu;
    d.uav_power = dk.uav_power;
    d.robot_blocklengths = bk;
    auto res = finish(std::move(d), in, sc);
    res.dinkelbach_iterations = dk.iterations;
    return res;
}

} // namespace nsurllc
