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

// Acceptance run: one PASS/FAIL line per criterion. Usage:
//   acceptance [config] [trials]

#include "nsurllc/config.hpp"
#include "nsurllc/experiment.hpp"
#include "nsurllc/urllc_metrics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>

using namespace nsurllc;

namespace
{

int g_failed = 0;

void report(const char *id, const char *name, bool pass, const std::string &detail)
{
    std::printf("%s %s %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    g_failed += pass ? 0 : 1;
}

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

CVec random_cvec(int n, Rng &rng, double var = 1.0)
{
    CVec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = complex_normal(rng, var);
    return v;
}

RVec random_offsets(const AngularGrid &g, Rng &rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RVec o(g.size());
    for (int i = 0; i < g.size(); ++i)
        o[i] = g.cell_lower[i] + u(rng) * (g.cell_upper[i] - g.cell_lower[i]);
    return o;
}

MeasurementModel small_model(int n, int p, const AngularGrid &grid, Rng &rng)
{
    Scenario sc;
    sc.arrays.num_ris_elements = n;
    return build_measurement(grid, make_bs_hap_channel(sc, sc.arrays), sc.arrays, p, rng);
}

// ---- 1: oracle equivalences ----

void module_a_oracle()
{
    Rng rng(1001);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t)
    {
        const int n = 6 + t % 7;
        const int p = 2 + t % (n - 2);
        const auto grid = build_grid(n, 0.5);
        const auto model = small_model(n, p, grid, rng);
        EstimatorState st = initial_state(model, grid, SparsePrior{0.3, {0.0, 0.0}, 1.0});
        st.offsets = random_offsets(grid, rng);
        refresh_sensing(st, model, grid);
        st.x_pri_a = random_cvec(n, rng);
        st.v_pri_a = u(rng);
        const double s2 = 0.1 * u(rng);
        const CVec y = random_cvec(p, rng);
        const CMat f = model.effective_matrix(grid, st.offsets);
        const double v = st.v_pri_a;
        const CMat w_inv = (v * f * f.adjoint() + s2 * CMat::Identity(p, p)).inverse();
        const CVec x_ref = st.x_pri_a + v * f.adjoint() * w_inv * (y - f * st.x_pri_a);
        const double v_ref = (v * CMat::Identity(n, n) - v * v * f.adjoint() * w_inv * f).trace().real() / n;
        module_a_lmmse(st, y, s2);
        worst = std::max({worst, (st.x_post_a - x_ref).norm() / x_ref.norm(), std::abs(st.v_post_a - v_ref) / v_ref});
    }
    report("1a", "module A vs direct-inversion LMMSE (50 instances)", worst < 1e-10, fmt("max rel err %.3g", worst));
}

void gradient_oracle()
{
    Rng rng(1002);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t)
    {
        const int n = 16 + 8 * (t % 3);
        const auto grid = build_grid(n, 0.5);
        const auto model = small_model(n, n / 2, grid, rng);
        EstimatorState st = initial_state(model, grid, SparsePrior{0.25, {0.0, 0.0}, 1.0});
        st.offsets = random_offsets(grid, rng);
        refresh_sensing(st, model, grid);
        st.x_post_b = random_cvec(n, rng);
        st.v_post_b = 0.1 * u(rng);
        const double s2 = 0.01 + 0.1 * u(rng);
        const CVec y = random_cvec(n / 2, rng, 4.0);
        const RVec g = offset_gradient(st, y, model, grid, s2);
        RVec fd(n);
        const double h = 1e-6;
        for (int k = 0; k < n; ++k)
        {
            RVec op = st.offsets, om = st.offsets;
            op[k] += h;
            om[k] -= h;
            fd[k] = (surrogate(y, model.effective_matrix(grid, op), st.x_post_b, st.v_post_b, s2) -
                     surrogate(y, model.effective_matrix(grid, om), st.x_post_b, st.v_post_b, s2)) /
                    (2 * h);
        }
        worst = std::max(worst, (g - fd).norm() / fd.norm());
    }
    report("1b", "offset gradient vs finite differences (20 states)", worst < 1e-4, fmt("max rel err %.3g", worst));
}

void dirichlet_oracle()
{
    Rng rng(1003);
    std::uniform_real_distribution<double> u(-1.9, 1.9);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t)
    {
        const double dpsi = u(rng);
        const int n = 8 + 5 * t;
        cdouble acc{0.0, 0.0};
        for (int i = 0; i < n; ++i)
            acc += std::polar(1.0, 2.0 * M_PI * i * 0.5 * dpsi);
        worst = std::max(worst, std::abs(coherent_gain_closed_form(dpsi, n, 0.5) - std::norm(acc)) /
                                    std::max(1.0, std::norm(acc)));
    }
    const double at0 = coherent_gain_closed_form(0.0, 128, 0.5);
    report("1c", "array-gain closed form vs direct sum (50 points)", worst < 1e-10 && at0 == 128.0 * 128.0,
           fmt("max err %.3g, r(0) = %.0f", worst, at0));
}

void median_oracle()
{
    Rng rng(1004);
    std::uniform_real_distribution<double> ang(0.9, 1.5);
    std::uniform_int_distribution<int> cnt(1, 9);
    auto cost = [](const std::vector<PathEstimate> &p, double w) {
        double s = 0.0;
        for (const auto &q : p)
            s += std::abs(q.gain) * std::abs(std::cos(q.angle)) * std::abs(q.angle - w);
        return s;
    };
    double worst = 0.0;
    for (int t = 0; t < 100; ++t)
    {
        std::vector<PathEstimate> p;
        const int l = cnt(rng);
        for (int i = 0; i < l; ++i)
            p.push_back({complex_normal(rng), ang(rng)});
        double lo = 10.0, hi = -10.0;
        for (const auto &q : p)
        {
            lo = std::min(lo, q.angle);
            hi = std::max(hi, q.angle);
        }
        double best = cost(p, lo);
        for (int i = 0; i <= 100000; ++i)
            best = std::min(best, cost(p, lo + (hi - lo) * i / 100000.0));
        worst = std::max(worst, cost(p, weighted_median_angle(p)) - best);
    }
    report("1d", "weighted median vs 1e5-point grid (100 instances)", worst <= 1e-12,
           fmt("max excess %.3g", worst));
}

void dinkelbach_oracle()
{
    Scenario sc;
    const double bits = sc.bs_packet_bits;
    const double g1000 = std::exp2(bits / 1000) - 1.0;
    const double c1000 = std::sqrt(1000 / (2 * M_PI)) / std::sqrt(std::exp2(2 * bits / 1000) - 1.0);
    double worst_rel = 0.0, worst_y = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed)
    {
        Rng rng(seed);
        Scenario s = sc;
        s.robot_positions = sample_robot_positions(s, rng);
        OptimizerInputs in{(g1000 + 1.0 / c1000) / 10.0, sample_utg_channels(s, rng)};
        std::vector<int> bk;
        for (const auto &ch : in.utg)
            bk.push_back(robot_blocklength_search(sc.uav_power_budget, ch, sc));
        const int bu = 700;
        const double pb = bs_power_closed_form(bu, in.delta_b, sc);
        const auto dk = uav_power_dinkelbach(in, bk, bu, pb, sc);
        worst_y = std::max(worst_y, std::abs(dk.y));

        // independent fractional objective on a dense grid
        const double g = std::exp2(bits / bu) - 1.0;
        const double c = std::sqrt(bu / (2 * M_PI)) / std::sqrt(std::exp2(2 * bits / bu) - 1.0);
        const double snr = pb * in.delta_b;
        double om = snr <= g - 1 / c ? 1.0 : snr >= g + 1 / c ? 0.0 : 0.5 - 0.5 * c * (snr - g);
        const double a = bits / bu * (1.0 - om / sc.uav_dep_threshold);
        auto ee = [&](double pu) {
            double w = 1e300;
            for (std::size_t k = 0; k < bk.size(); ++k)
            {
                const double gk = std::exp2(double(sc.robot_packet_bits) / bk[k]) - 1.0;
                const double e = std::min(1.0, 2 * gk / (pu * in.utg[k].mean_snr_per_watt)) / sc.robot_dep_threshold;
                w = std::min(w, double(sc.robot_packet_bits) / bk[k] * (1.0 - e));
            }
            return (a + w) / (pb / sc.bs_power_budget + pu / sc.uav_power_budget);
        };
        double lo = 0.0;
        for (std::size_t k = 0; k < bk.size(); ++k)
            lo = std::max(lo, 2 * (std::exp2(double(sc.robot_packet_bits) / bk[k]) - 1.0) /
                                  (in.utg[k].mean_snr_per_watt * sc.robot_dep_threshold));
        double best = -1e300;
        for (int i = 0; i <= 100000; ++i)
            best = std::max(best, ee(lo + (sc.uav_power_budget - lo) * i / 100000.0));
        worst_rel = std::max(worst_rel, std::abs(ee(dk.uav_power) - best) / std::abs(best));
    }
    report("1e", "Dinkelbach vs 1e5-point grid (50 instances)", worst_rel <= 1e-3 && worst_y <= 1e-3,
           fmt("max rel gap %.3g, max |y| %.3g", worst_rel, worst_y));
}

void mar_roundtrip()
{
    Rng rng(1006);
    std::uniform_int_distribution<int> bl(50, 1000);
    std::uniform_real_distribution<double> snr(0.2, 20.0);
    std::uniform_real_distribution<double> lp(-8.0, -1.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i)
    {
        const int b = bl(rng);
        const double s = snr(rng);
        const double eps = std::pow(10.0, lp(rng));
        const double r = mar(b, s, eps).rate;
        if (r <= 0.0)
            continue;
        worst = std::max(worst, std::abs(exact_dep(LinkBudget{b, r * b, s}) - eps) / eps);
    }
    report("1f", "MAR/DEP round trip", worst < 1e-9, fmt("max rel err %.3g", worst));
}

// ---- experiments ----

using Table = std::map<std::tuple<double, std::string, std::string>, double>; // (sweep, method, metric)

struct Run
{
    Table table;
    std::string csv;
    double seconds = 0.0;
};

Run run(const ConfigFile &cfg, ExperimentKind kind, int trials, const Scenario &base)
{
    ExperimentSpec spec;
    spec.kind = kind;
    spec.base = base;
    spec.trials = trials;
    spec.seed = cfg.scenario.rng_seed;
    spec.dep_thresholds = cfg.dep_thresholds;
    auto it = cfg.sweeps.find(to_string(kind));
    spec.sweep = it != cfg.sweeps.end() ? it->second : default_sweep(kind);
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_experiment(spec);
    Run r;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto &row : res.rows)
        r.table[{row.sweep, row.method, row.metric}] = row.value;
    std::ostringstream out;
    write_csv(out, res.rows);
    r.csv = out.str();
    return r;
}

double at(const Table &t, double s, const std::string &m, const std::string &metric)
{
    auto it = t.find({s, m, metric});
    return it == t.end() ? std::nan("") : it->second;
}

std::vector<double> sweep_of(const Table &t)
{
    std::vector<double> s;
    for (const auto &[k, v] : t)
        if (s.empty() || s.back() != std::get<0>(k))
            s.push_back(std::get<0>(k));
    return s;
}

void estimation(const ConfigFile &cfg, int trials)
{
    const auto snr = run(cfg, ExperimentKind::nmse_vs_snr, trials, cfg.scenario);
    bool decreasing = true, below = true, margin = true;
    double prev = 1e300, min_margin = 1e300;
    std::string line;
    for (double s : sweep_of(snr.table))
    {
        const double r = at(snr.table, s, "roamp", "nmse_db");
        const double o = at(snr.table, s, "omp", "nmse_db");
        const double p = at(snr.table, s, "sp", "nmse_db");
        decreasing = decreasing && r < prev;
        prev = r;
        below = below && r <= o && r <= p;
        if (s >= 8.0)
        {
            min_margin = std::min(min_margin, std::min(o, p) - r);
            margin = margin && std::min(o, p) - r >= 1.0;
        }
        line += fmt("%g dB: %.2f/%.2f/", s, r, o) + fmt("%.2f; ", p);
    }
    report("2a", "R-OAMP NMSE decreasing in SNR, below OMP/SP, margin >= 1 dB at SNR >= 8 dB",
           decreasing && below && margin,
           "roamp/omp/sp " + line + fmt("min margin %.2f dB (%.0f s)", min_margin, snr.seconds));

    Scenario at15 = cfg.scenario;
    at15.estimation_snr_db = 15.0;
    const auto pil = run(cfg, ExperimentKind::nmse_vs_pilots, trials, at15);
    const auto sw = sweep_of(pil.table);
    const double first = at(pil.table, sw.front(), "roamp", "nmse_db");
    const double last = at(pil.table, sw.back(), "roamp", "nmse_db");
    report("2b", "NMSE at 15 dB drops >= 10 dB from P=30 to P=70", first - last >= 10.0,
           fmt("P=%g: %.2f dB, ", sw.front(), first) + fmt("P=%g: %.2f dB, drop %.2f dB", sw.back(), last, first - last) +
               fmt(" (%.0f s)", pil.seconds));
}

void alignment(const ConfigFile &cfg, int trials)
{
    const auto g = run(cfg, ExperimentKind::gain_vs_N, trials, cfg.scenario);
    bool gap = true, close = true, mono = true;
    double min_gap = 1e300, max_exh = -1e300, prev = -1e300;
    std::string line;
    for (double n : sweep_of(g.table))
    {
        const double a = at(g.table, n, "aligned", "gain_db");
        const double r = at(g.table, n, "random", "gain_db");
        const double z = at(g.table, n, "zero", "gain_db");
        const double e = at(g.table, n, "exhaustive", "gain_db");
        min_gap = std::min({min_gap, a - r, a - z});
        max_exh = std::max(max_exh, std::abs(e - a));
        gap = gap && a - r >= 15.0 && a - z >= 15.0;
        close = close && std::abs(e - a) <= 3.0;
        mono = mono && a >= prev;
        prev = a;
        line += fmt("N=%g: %.1f/%.1f/", n, a, r) + fmt("%.1f/%.1f; ", z, e);
    }
    report("3a", "aligned >= 15 dB above random and zero, within 3 dB of exhaustive", gap && close,
           "aligned/random/zero/exhaustive dB " + line + fmt("min gap %.2f dB, max |aligned-exhaustive| %.2f dB (%.0f s)", min_gap, max_exh, g.seconds));
    report("3b", "aligned gain non-decreasing in N", mono, line);
}

void optimization(const ConfigFile &cfg, int trials)
{
    const auto byn = run(cfg, ExperimentKind::ee_vs_N, trials, cfg.scenario);
    const auto bypu = run(cfg, ExperimentKind::ee_vs_Pu, trials, cfg.scenario);
    bool order = true, verified = true;
    int points = 0;
    double worst = 1e300;
    std::vector<std::string> tags;
    for (double t : cfg.dep_thresholds)
        tags.push_back(fmt("min_ee@%g", t));
    if (tags.empty())
        tags.push_back("min_ee");
    for (const Run *r : {&byn, &bypu})
        for (double s : sweep_of(r->table))
            for (const auto &tag : tags)
            {
                const double p = at(r->table, s, "ptpb", tag);
                const double m = at(r->table, s, "mtp", tag);
                const double b = at(r->table, s, "mbl", tag);
                ++points;
                order = order && p >= m && p >= b;
                worst = std::min({worst, p / m, p / b});
                const std::string ok = "constraints_ok" + tag.substr(6);
                for (const char *meth : {"ptpb", "mtp", "mbl"})
                {
                    const double c = at(r->table, s, meth, ok);
                    verified = verified && (std::isnan(c) || c == 1.0);
                }
            }
    report("4a", "PTPB min-EE >= MTP and MBL at every point (N and P_U sweeps, both thresholds)", order,
           std::to_string(points) + fmt(" points, worst PTPB/baseline ratio %.4f (%.0f s)", worst, byn.seconds + bypu.seconds));

    const std::string tight = fmt("min_ee@%g", 5e-6);
    const double p = at(bypu.table, cfg.scenario.uav_power_budget, "ptpb", tight);
    const double m = at(bypu.table, cfg.scenario.uav_power_budget, "mtp", tight);
    report("4b", "PTPB exceeds MTP by >= 20% at eps 5e-6, default point", p >= 1.2 * m,
           fmt("PTPB %.4f, MTP %.4f, gain %.1f%%", p, m, 100.0 * (p / m - 1.0)));
    report("4c", "every returned decision passes constraint re-verification", verified,
           verified ? "all constraints_ok rows equal 1" : "some decision failed re-verification");
}

void dep_model()
{
    Rng rng(1007);
    double worst = 0.0;
    std::string line;
    for (int b : {200, 500, 1000})
        for (double mult : {100.0, 1000.0, 1e4})
        {
            const LinkBudget lb = make_link_budget(b, 80, 0.0);
            const double mean = mult * lb.gamma();
            std::exponential_distribution<double> ex(1.0 / mean);
            double acc = 0.0;
            const int n = 1000000;
            for (int i = 0; i < n; ++i)
                acc += linearized_dep(make_link_budget(b, 80, ex(rng)));
            const double mc = acc / n;
            const double ref = 2.0 * lb.gamma() / mean;
            worst = std::max(worst, std::abs(mc / ref - 1.0));
            line += fmt("b=%g mean=%g*gamma: MC/ref %.3f; ", b, mult, mc / ref);
        }
    report("5", "MC E[Omega] within 10% of 2 gamma / mean SNR", worst <= 0.10,
           line + fmt("max rel dev %.3f", worst));
}

void determinism(const ConfigFile &cfg)
{
    bool same = true;
    std::string line;
    for (auto k : {ExperimentKind::nmse_vs_snr, ExperimentKind::nmse_vs_pilots, ExperimentKind::gain_vs_N,
                   ExperimentKind::ee_vs_N, ExperimentKind::ee_vs_Pu, ExperimentKind::ee_vs_area})
    {
        const bool eq = run(cfg, k, 5, cfg.scenario).csv == run(cfg, k, 5, cfg.scenario).csv;
        same = same && eq;
        line += std::string(to_string(k)) + (eq ? " same; " : " DIFFERS; ");
    }
    report("6", "rerun with the same seed gives byte-identical CSV", same, line + "(5 trials per experiment)");
}

} // namespace

int main(int argc, char **argv)
{
    const std::string path = argc > 1 ? argv[1] : DEFAULT_CONFIG;
    const int trials = argc > 2 ? std::atoi(argv[2]) : 200;
    ConfigFile cfg;
    try
    {
        cfg = load_config(path);
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "acceptance: %s\n", e.what());
        return 2;
    }
    std::printf("config %s, %d trials\n", path.c_str(), trials);

    module_a_oracle();
    gradient_oracle();
    dirichlet_oracle();
    median_oracle();
    dinkelbach_oracle();
    mar_roundtrip();
    dep_model();
    determinism(cfg);
    alignment(cfg, trials);
    optimization(cfg, trials);
    estimation(cfg, trials);

    std::printf("%d criteria failed\n", g_failed);
    return g_failed == 0 ? 0 : 1;
}
