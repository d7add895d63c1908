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

#include "nsurllc/experiment.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace nsurllc
{

const char *to_string(ExperimentKind k)
{
    switch (k)
    {
    case ExperimentKind::nmse_vs_snr:
        return "nmse_vs_snr";
    case ExperimentKind::nmse_vs_pilots:
        return "nmse_vs_pilots";
    case ExperimentKind::gain_vs_N:
        return "gain_vs_N";
    case ExperimentKind::ee_vs_N:
        return "ee_vs_N";
    case ExperimentKind::ee_vs_Pu:
        return "ee_vs_Pu";
    case ExperimentKind::ee_vs_area:
        return "ee_vs_area";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string &name)
{
    for (auto k : {ExperimentKind::nmse_vs_snr, ExperimentKind::nmse_vs_pilots, ExperimentKind::gain_vs_N,
                   ExperimentKind::ee_vs_N, ExperimentKind::ee_vs_Pu, ExperimentKind::ee_vs_area})
        if (name == to_string(k))
            return k;
    throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

std::vector<double> default_sweep(ExperimentKind k)
{
    switch (k)
    {
    case ExperimentKind::nmse_vs_snr:
        return {0, 4, 8, 12, 16, 20};
    case ExperimentKind::nmse_vs_pilots:
        return {30, 40, 50, 60, 70};
    case ExperimentKind::gain_vs_N:
    case ExperimentKind::ee_vs_N:
        return {96, 128, 160, 192, 224, 256};
    case ExperimentKind::ee_vs_Pu:
        return {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    case ExperimentKind::ee_vs_area:
        return {100, 200, 300, 400, 500};
    }
    return {};
}

void ExperimentSpec::validate() const
{
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (sweep.empty())
        throw std::invalid_argument("sweep must not be empty");
    if (threads < 0)
        throw std::invalid_argument("threads must be >= 0");
    for (double t : dep_thresholds)
        if (!(t > 0.0 && t < 1.0))
            throw std::invalid_argument("DEP thresholds must lie in (0,1)");
    base.validate();
    for (double s : sweep)
    {
        if (!std::isfinite(s))
            throw std::invalid_argument("sweep values must be finite");
        const bool integral = s == std::floor(s) && s >= 1.0;
        switch (kind)
        {
        case ExperimentKind::nmse_vs_pilots:
            if (!integral || s > base.arrays.num_ris_elements)
                throw std::invalid_argument("pilot counts must be integers in [1, N]");
            break;
        case ExperimentKind::gain_vs_N:
        case ExperimentKind::ee_vs_N:
            if (!integral || s < base.num_pilots || s < 2)
                throw std::invalid_argument("RIS sizes must be integers >= max(2, num_pilots)");
            break;
        case ExperimentKind::ee_vs_Pu:
        case ExperimentKind::ee_vs_area:
            if (!(s > 0.0))
                throw std::invalid_argument("sweep values must be positive");
            break;
        case ExperimentKind::nmse_vs_snr:
            break;
        }
    }
}

double nmse_db(const CVec &estimate, const CVec &truth)
{
    return std::max(10.0 * std::log10(nmse(estimate, truth)), -200.0);
}

TrialSetup prepare_trial(const Scenario &scenario, Rng &rng)
{
    TrialSetup s;
    s.arrays = scenario.arrays;
    s.bs_hap = make_bs_hap_channel(scenario, s.arrays);
    s.grid = build_grid(s.arrays.num_ris_elements, s.arrays.ris_spacing);
    s.channel = sample_hap_uav_channel(scenario, s.arrays, scenario.num_paths, rng);
    s.model = build_measurement(s.grid, s.bs_hap, s.arrays, scenario.num_pilots, rng, s.channel.los_angle);
    const CVec h = s.channel.normalized_channel();
    s.model.noise_variance = calibrate_noise_variance(s.model, h, scenario.estimation_snr_db);
    s.pilots = simulate_pilot_reception(s.model, h, s.model.noise_variance, rng);
    return s;
}

ChannelEstimate estimate_channel(const TrialSetup &setup, Estimator method, const Scenario &scenario,
                                 bool keep_trace)
{
    ChannelEstimate out;
    const double ls = setup.channel.large_scale_gain;
    const auto &grid = setup.grid;
    if (method == Estimator::roamp)
    {
        RoampConfig cfg;
        cfg.num_paths = scenario.num_paths;
        TraceSink sink;
        const CVec truth = setup.channel.normalized_channel();
        if (keep_trace)
            sink = [&](const TraceRow &r) { out.iterations.push_back(r); };
        const auto est = run_roamp(setup.pilots, setup.model, grid, cfg, sink, keep_trace ? &truth : nullptr);
        out.normalized = est.reconstructed_channel;
        for (int n : est.active_paths())
            out.paths.push_back({est.x_hat(n) * ls, grid.points(n) + est.refined_offsets(n)});
        return out;
    }
    const CMat a0 = grid.dictionary(RVec::Zero(grid.size()));
    const CMat f0 = setup.model.rows * a0;
    GreedyConfig g;
    g.target_sparsity = scenario.num_paths;
    const auto res = method == Estimator::omp ? omp(setup.pilots, f0, g) : sp(setup.pilots, f0, g);
    out.normalized = a0 * res.x;
    for (int n = 0; n < res.x.size(); ++n)
        if (res.x(n) != cdouble{0.0, 0.0})
            out.paths.push_back({res.x(n) * ls, grid.points(n)});
    if (out.paths.empty())
        out.paths.push_back({cdouble{0.0, 0.0}, setup.channel.los_angle});
    return out;
}

double cascade_delta_b(const TrialSetup &setup, const CVec &h, const PhaseConfiguration &phases,
                       const Scenario &scenario)
{
    const CVec v = mrt_precoder(setup.bs_hap, setup.arrays);
    return cascade_snr(h, phases, setup.bs_hap, v, 1.0, scenario.antenna_gain, scenario.noise_power_uav).delta_b;
}

namespace
{

// Independent streams per trial: 0 estimation, 1 robots, 2 random phases.
Rng stream(std::uint64_t seed, int trial, int which)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(which)};
    return Rng(seq);
}

std::string threshold_tag(double t)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "@%g", t);
    return buf;
}

struct Layout
{
    std::vector<std::string> methods;
    std::vector<std::string> metrics;      // names as aggregated
    std::vector<std::string> variants{""}; // threshold tags
};

Layout layout_for(const ExperimentSpec &spec)
{
    Layout l;
    switch (spec.kind)
    {
    case ExperimentKind::nmse_vs_snr:
    case ExperimentKind::nmse_vs_pilots:
        l.methods = {"roamp", "omp", "sp"};
        l.metrics = {"nmse_db"};
        break;
    case ExperimentKind::gain_vs_N:
        l.methods = {"aligned", "random", "zero", "exhaustive"};
        l.metrics = {"gain_db"};
        break;
    default:
        l.methods = {"ptpb", "mtp", "mbl"};
        l.metrics = {"min_ee", "bs_power", "uav_power", "bs_blocklength", "mean_robot_blocklength", "constraints_ok",
                     "true_channel_dep_ok"};
        if (!spec.dep_thresholds.empty())
        {
            l.variants.clear();
            for (double t : spec.dep_thresholds)
                l.variants.push_back(threshold_tag(t));
        }
        break;
    }
    return l;
}

// Metrics averaged in the linear domain and reported in dB.
bool reported_in_db(const std::string &metric)
{
    return metric == "nmse_db" || metric == "gain_db";
}

TrialRecord failed(int trial, double sweep, const std::string &method, const std::string &variant,
                   const std::string &status, const std::string &msg)
{
    TrialRecord r;
    r.trial = trial;
    r.sweep = sweep;
    r.method = method;
    r.variant = variant;
    r.status = status;
    r.message = msg;
    return r;
}

void nmse_trial(const ExperimentSpec &spec, int trial, std::vector<TrialRecord> &out)
{
    const auto layout = layout_for(spec);
    for (double s : spec.sweep)
    {
        Scenario sc = spec.base;
        if (spec.kind == ExperimentKind::nmse_vs_snr)
            sc.estimation_snr_db = s;
        else
            sc.num_pilots = static_cast<int>(s);
        Rng rng = stream(spec.seed, trial, 0);
        const TrialSetup setup = prepare_trial(sc, rng);
        const CVec truth = setup.channel.normalized_channel();
        const Estimator methods[] = {Estimator::roamp, Estimator::omp, Estimator::sp};
        for (std::size_t m = 0; m < 3; ++m)
        {
            try
            {
                const auto est = estimate_channel(setup, methods[m], sc, spec.keep_traces);
                TrialRecord r;
                r.trial = trial;
                r.sweep = s;
                r.method = layout.methods[m];
                r.status = "ok";
                r.values.emplace_back("nmse_db", nmse(est.normalized, truth));
                r.iterations = est.iterations;
                out.push_back(std::move(r));
            }
            catch (const NumericalError &e)
            {
                out.push_back(failed(trial, s, layout.methods[m], "", "numerical", e.what()));
            }
        }
    }
}

void gain_trial(const ExperimentSpec &spec, int trial, std::vector<TrialRecord> &out)
{
    const auto layout = layout_for(spec);
    for (double s : spec.sweep)
    {
        Scenario sc = spec.base;
        sc.arrays.num_ris_elements = static_cast<int>(s);
        Rng rng = stream(spec.seed, trial, 0);
        Rng phase_rng = stream(spec.seed, trial, 2);
        const TrialSetup setup = prepare_trial(sc, rng);
        ChannelEstimate est;
        try
        {
            est = estimate_channel(setup, Estimator::roamp, sc, spec.keep_traces);
        }
        catch (const NumericalError &e)
        {
            for (const auto &m : layout.methods)
                out.push_back(failed(trial, s, m, "", "numerical", e.what()));
            continue;
        }
        const int n = sc.arrays.num_ris_elements;
        const CVec h_hat = est.normalized * setup.channel.large_scale_gain;
        const PhaseConfiguration configs[] = {
            align_phases(est.paths, setup.bs_hap.aoa, sc.arrays),
            random_phases(n, phase_rng),
            zero_phases(n),
            exhaustive_phases(h_hat, setup.bs_hap, sc.arrays),
        };
        const CVec v = mrt_precoder(setup.bs_hap, setup.arrays);
        const CVec hv = setup.bs_hap.matrix * v;
        for (std::size_t m = 0; m < layout.methods.size(); ++m)
        {
            TrialRecord r;
            r.trial = trial;
            r.sweep = s;
            r.method = layout.methods[m];
            r.status = "ok";
            const cdouble g = setup.channel.dense_channel.dot(configs[m].reflection().cwiseProduct(hv));
            r.values.emplace_back("gain_db", std::norm(g));
            if (m == 0)
                r.iterations = est.iterations;
            out.push_back(std::move(r));
        }
    }
}

void ee_trial(const ExperimentSpec &spec, int trial, std::vector<TrialRecord> &out)
{
    const auto layout = layout_for(spec);
    std::optional<TrialSetup> cached;
    std::optional<ChannelEstimate> cached_est;
    std::string estimation_failure;
    const bool estimation_fixed = spec.kind != ExperimentKind::ee_vs_N;

    for (double s : spec.sweep)
    {
        Scenario sc = spec.base;
        if (spec.kind == ExperimentKind::ee_vs_N)
            sc.arrays.num_ris_elements = static_cast<int>(s);
        else if (spec.kind == ExperimentKind::ee_vs_Pu)
            sc.uav_power_budget = s;
        else
            sc.area_side = s;

        if (!estimation_fixed || !cached)
        {
            Rng rng = stream(spec.seed, trial, 0);
            cached = prepare_trial(sc, rng);
            cached_est.reset();
            estimation_failure.clear();
            try
            {
                cached_est = estimate_channel(*cached, Estimator::roamp, sc, spec.keep_traces);
            }
            catch (const NumericalError &e)
            {
                estimation_failure = e.what();
            }
        }
        if (!cached_est)
        {
            for (const auto &v : layout.variants)
                for (const auto &m : layout.methods)
                    out.push_back(failed(trial, s, m, v, "numerical", estimation_failure));
            continue;
        }
        const TrialSetup &setup = *cached;
        const ChannelEstimate &est = *cached_est;

        Rng robot_rng = stream(spec.seed, trial, 1);
        if (sc.robot_positions.empty())
            sc.robot_positions = sample_robot_positions(sc, robot_rng);
        const auto utg = sample_utg_channels(sc, robot_rng);

        const auto phases = align_phases(est.paths, setup.bs_hap.aoa, sc.arrays);
        const CVec h_hat = est.normalized * setup.channel.large_scale_gain;
        const OptimizerInputs used{cascade_delta_b(setup, h_hat, phases, sc), utg};
        const OptimizerInputs truth{cascade_delta_b(setup, setup.channel.dense_channel, phases, sc), utg};

        std::vector<double> thresholds = spec.dep_thresholds;
        if (thresholds.empty())
            thresholds.push_back(-1.0);
        for (std::size_t t = 0; t < thresholds.size(); ++t)
        {
            Scenario st = sc;
            if (thresholds[t] > 0.0)
            {
                st.uav_dep_threshold = thresholds[t];
                st.robot_dep_threshold = thresholds[t];
            }
            for (const auto &m : layout.methods)
            {
                try
                {
                    OptimizationResult res = m == "ptpb"  ? optimize_ptpb(used, st)
                                             : m == "mtp" ? optimize_mtp(used, st)
                                                          : optimize_mbl(used, st);
                    const auto &d = res.decision;
                    const auto true_check = verify(d, truth, st);
                    double mean_bk = 0.0;
                    for (int b : d.robot_blocklengths)
                        mean_bk += b;
                    mean_bk /= static_cast<double>(d.robot_blocklengths.size());
                    TrialRecord r;
                    r.trial = trial;
                    r.sweep = s;
                    r.method = m;
                    r.variant = layout.variants[t];
                    r.status = "ok";
                    r.values = {{"min_ee", res.outcome.min_ee},
                                {"bs_power", d.bs_power},
                                {"uav_power", d.uav_power},
                                {"bs_blocklength", static_cast<double>(d.bs_blocklength)},
                                {"mean_robot_blocklength", mean_bk},
                                {"constraints_ok", res.constraints.all() ? 1.0 : 0.0},
                                {"true_channel_dep_ok", true_check.uav_dep && true_check.robot_dep ? 1.0 : 0.0}};
                    if (m == "ptpb" && t == 0)
                        r.iterations = est.iterations;
                    out.push_back(std::move(r));
                }
                catch (const InfeasibleError &e)
                {
                    out.push_back(failed(trial, s, m, layout.variants[t], "infeasible", e.what()));
                }
                catch (const NumericalError &e)
                {
                    out.push_back(failed(trial, s, m, layout.variants[t], "numerical", e.what()));
                }
            }
        }
    }
}

} // namespace

ExperimentResult run_experiment(const ExperimentSpec &spec)
{
    spec.validate();
    std::vector<std::vector<TrialRecord>> per_trial(static_cast<std::size_t>(spec.trials));
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;)
        {
            const int t = next.fetch_add(1);
            if (t >= spec.trials)
                return;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (error)
                    return;
            }
            try
            {
                auto &out = per_trial[static_cast<std::size_t>(t)];
                switch (spec.kind)
                {
                case ExperimentKind::nmse_vs_snr:
                case ExperimentKind::nmse_vs_pilots:
                    nmse_trial(spec, t, out);
                    break;
                case ExperimentKind::gain_vs_N:
                    gain_trial(spec, t, out);
                    break;
                default:
                    ee_trial(spec, t, out);
                    break;
                }
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    int threads = spec.threads > 0 ? spec.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, spec.trials);
    if (threads == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    if (error)
        std::rethrow_exception(error);

    // Keyed reduction in (sweep, variant, method, metric) order; trial order
    // within a key is fixed, so sums are bit-identical across runs.
    const auto layout = layout_for(spec);
    struct Acc
    {
        double sum = 0.0;
        int ok = 0;
        int failures = 0;
        int infeasible = 0;
    };
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, Acc> acc;
    auto index_of = [](const std::vector<std::string> &v, const std::string &x) {
        return static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
    };
    ExperimentResult result;
    for (const auto &records : per_trial)
        for (const auto &r : records)
        {
            const auto si = static_cast<std::size_t>(std::find(spec.sweep.begin(), spec.sweep.end(), r.sweep) -
                                                     spec.sweep.begin());
            const auto vi = index_of(layout.variants, r.variant);
            const auto mi = index_of(layout.methods, r.method);
            ++result.evaluations;
            if (r.status == "numerical")
                ++result.numerical_failures;
            for (std::size_t k = 0; k < layout.metrics.size(); ++k)
            {
                auto &a = acc[{si, vi, mi, k}];
                if (r.status != "ok")
                {
                    ++a.failures;
                    if (r.status == "infeasible")
                        ++a.infeasible;
                    continue;
                }
                for (const auto &[name, value] : r.values)
                    if (name == layout.metrics[k])
                    {
                        a.sum += value;
                        ++a.ok;
                    }
            }
        }
    for (std::size_t si = 0; si < spec.sweep.size(); ++si)
        for (std::size_t vi = 0; vi < layout.variants.size(); ++vi)
            for (std::size_t mi = 0; mi < layout.methods.size(); ++mi)
                for (std::size_t k = 0; k < layout.metrics.size(); ++k)
                {
                    const Acc a = acc[{si, vi, mi, k}];
                    ResultRow row;
                    row.experiment = to_string(spec.kind);
                    row.sweep = spec.sweep[si];
                    row.method = layout.methods[mi];
                    row.metric = layout.metrics[k] + layout.variants[vi];
                    row.trials = spec.trials;
                    row.failures = a.failures;
                    row.seed = spec.seed;
                    if (a.ok == 0)
                        row.value = std::nan("");
                    else if (layout.metrics[k] == "nmse_db")
                        row.value = std::max(10.0 * std::log10(a.sum / a.ok), -200.0);
                    else if (reported_in_db(layout.metrics[k]))
                        row.value = 10.0 * std::log10(a.sum / a.ok);
                    else
                        row.value = a.sum / a.ok;
                    if (a.ok == 0 && a.infeasible > 0)
                        result.fully_infeasible_point = true;
                    result.rows.push_back(row);
                }
    if (spec.keep_traces)
        for (auto &records : per_trial)
            for (auto &r : records)
                result.traces.push_back(std::move(r));
    return result;
}

void write_csv(std::ostream &out, const std::vector<ResultRow> &rows)
{
    out << "experiment,sweep,method,metric,value,trials,failures,seed\n";
    char buf[64];
    for (const auto &r : rows)
    {
        out << r.experiment << ',';
        std::snprintf(buf, sizeof buf, "%.10g", r.sweep);
        out << buf << ',' << r.method << ',' << r.metric << ',';
        std::snprintf(buf, sizeof buf, "%.10g", r.value);
        out << buf << ',' << r.trials << ',' << r.failures << ',' << r.seed << '\n';
    }
}

void write_trace_json(std::ostream &out, const ExperimentSpec &spec, const ExperimentResult &result)
{
    nlohmann::json j;
    j["experiment"] = to_string(spec.kind);
    j["seed"] = spec.seed;
    j["trials"] = spec.trials;
    j["sweep"] = spec.sweep;
    auto &records = j["records"] = nlohmann::json::array();
    for (const auto &r : result.traces)
    {
        nlohmann::json rec;
        rec["trial"] = r.trial;
        rec["sweep"] = r.sweep;
        rec["method"] = r.method;
        if (!r.variant.empty())
            rec["variant"] = r.variant;
        rec["status"] = r.status;
        if (!r.message.empty())
            rec["message"] = r.message;
        for (const auto &[name, value] : r.values)
            rec["values"][name] = value;
        if (!r.iterations.empty())
        {
            auto &it = rec["iterations"] = nlohmann::json::array();
            for (const auto &row : r.iterations)
            {
                nlohmann::json x{{"outer", row.outer}, {"inner", row.inner}, {"v_post_a", row.v_post_a},
                                 {"v_post_b", row.v_post_b}, {"surrogate", row.surrogate}};
                if (row.nmse)
                    x["nmse"] = *row.nmse;
                it.push_back(std::move(x));
            }
        }
        records.push_back(std::move(rec));
    }
    out << j.dump(1) << '\n';
}

} // namespace nsurllc
