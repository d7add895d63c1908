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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nsurllc/channel_models.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace nsurllc;

TEST_CASE("steering vector basics")
{
    const CVec a = steering_vector(0.0, 4, 0.5);
    for (int n = 0; n < 4; ++n)
        CHECK(std::abs(a(n) - cdouble(1.0, 0.0)) < 1e-15);

    const CVec e = steering_vector(kPi / 2 - 1e-9, 2, 0.5);
    CHECK(std::abs(e(0) - cdouble(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(e(1) - cdouble(-1.0, 0.0)) < 1e-8);

    const CVec s = steering_vector(0.3, 8, 0.5);
    for (int n = 0; n < 8; ++n)
    {
        const double ph = -2.0 * M_PI * n * 0.5 * std::sin(0.3);
        CHECK(std::abs(s(n) - cdouble(std::cos(ph), std::sin(ph))) < 1e-14);
    }
}

TEST_CASE("steering vectors have unit-modulus entries")
{
    Rng rng(1);
    std::uniform_real_distribution<double> ang(-1.5, 1.5);
    for (int t = 0; t < 50; ++t)
    {
        const int len = 1 + t * 5;
        const CVec a = steering_vector(ang(rng), len, 0.5);
        for (int n = 0; n < len; ++n)
            CHECK(std::abs(std::abs(a(n)) - 1.0) < 1e-14);
        CHECK(a.squaredNorm() == doctest::Approx(len).epsilon(1e-14));
    }
}

TEST_CASE("steering derivative against finite differences")
{
    const double w = 0.41;
    const double h = 1e-6;
    const CVec d = steering_vector_derivative(w, 16, 0.5);
    const CVec fd = (steering_vector(w + h, 16, 0.5) - steering_vector(w - h, 16, 0.5)) / (2 * h);
    CHECK((d - fd).norm() / d.norm() < 1e-8);
}

TEST_CASE("friis amplitude")
{
    const double lam = kSpeedOfLight / 6e9;
    CHECK(friis_amplitude(lam, 1000.0, 0.0) == doctest::Approx(lam / (4 * M_PI * 1000.0)).epsilon(1e-14));
    CHECK(friis_amplitude(lam, 1000.0, 20.0) == doctest::Approx(lam / (4 * M_PI * 1000.0) / 10.0).epsilon(1e-14));
}

TEST_CASE("bs-hap channel")
{
    Scenario sc;
    sc.bs_hap_excess_loss_db = 0.0;
    const auto ch = make_bs_hap_channel(sc, sc.arrays);
    const double d = distance(sc.bs_position, sc.hap_position);
    CHECK(std::abs(ch.gain) == doctest::Approx(sc.arrays.wavelength() / (4 * M_PI * d)).epsilon(1e-12));
    CHECK(ch.matrix.rows() == sc.arrays.num_ris_elements);
    CHECK(ch.matrix.cols() == sc.arrays.num_bs_antennas);

    // explicit outer product, element by element
    const CVec ar = steering_vector(ch.aoa, sc.arrays.num_ris_elements, sc.arrays.ris_spacing);
    const CVec ab = steering_vector(ch.aod, sc.arrays.num_bs_antennas, sc.arrays.bs_spacing);
    double err = 0.0;
    for (int i = 0; i < ar.size(); ++i)
        for (int j = 0; j < ab.size(); ++j)
            err = std::max(err, std::abs(ch.matrix(i, j) - ch.gain * ar(i) * std::conj(ab(j))));
    CHECK(err < 1e-12 * std::abs(ch.gain));

    Eigen::JacobiSVD<CMat> svd(ch.matrix);
    const auto sv = svd.singularValues();
    const double expect = std::abs(ch.gain) * std::sqrt(double(sc.arrays.num_ris_elements) * sc.arrays.num_bs_antennas);
    CHECK(sv(0) == doctest::Approx(expect).epsilon(1e-10));
    CHECK(sv(1) < 1e-12 * sv(0));
    CHECK(svd.rank() == 1);
}

TEST_CASE("bs-hap channel rejects degenerate geometry")
{
    Scenario sc;
    sc.hap_position = sc.bs_position;
    CHECK_THROWS(make_bs_hap_channel(sc, sc.arrays));
    Scenario below;
    below.hap_position = {1000.0, 0.0, -10.0};
    CHECK_THROWS(make_bs_hap_channel(below, below.arrays));
}

TEST_CASE("single on-axis path gives all-ones")
{
    const CVec h = synthesize_channel({cdouble(1.0, 0.0)}, {0.0}, 16, 0.5);
    CHECK((h - CVec::Ones(16)).norm() < 1e-14);
}

TEST_CASE("hap-uav channel sampling")
{
    Scenario sc;
    Rng rng(42);
    const auto inst = sample_hap_uav_channel(sc, sc.arrays, 8, rng);
    CHECK(inst.num_paths == 8);
    const CVec again = synthesize_channel(inst.path_gains, inst.path_angles, sc.arrays.num_ris_elements, sc.arrays.ris_spacing);
    CHECK((again - inst.dense_channel).norm() <= 1e-12 * inst.dense_channel.norm());
    for (double w : inst.path_angles)
        CHECK(std::abs(w - inst.los_angle) <= kPi / 24 + 1e-12);

    CHECK_THROWS(sample_hap_uav_channel(sc, sc.arrays, 0, rng));
}

TEST_CASE("small-scale normalization is independent of path count")
{
    Scenario sc;
    sc.arrays.num_ris_elements = 16;
    Rng rng(9);
    for (int paths : {1, 4, 8})
    {
        double acc = 0.0;
        const int n = 20000;
        for (int t = 0; t < n; ++t)
        {
            const auto inst = sample_hap_uav_channel(sc, sc.arrays, paths, rng);
            double s = 0.0;
            for (auto g : inst.path_gains)
                s += std::norm(g);
            acc += s / (inst.large_scale_gain * inst.large_scale_gain);
        }
        CHECK(acc / n == doctest::Approx(1.0).epsilon(0.03));
    }
}

TEST_CASE("utg channels")
{
    Scenario sc;
    sc.robot_positions = {{80000.0, 0.0}};
    Rng rng(17);
    const auto one = sample_utg_channels(sc, rng);
    REQUIRE(one.size() == 1);
    const double pu = 0.3;
    CHECK(one[0].instantaneous_snr(pu) ==
          doctest::Approx(pu * one[0].large_scale_gain * one[0].large_scale_gain * std::norm(one[0].small_scale) /
                          sc.noise_power_robot));
    const double d = 50.0;
    const double pl = sc.utg_intercept_db + 10 * sc.utg_exponent * std::log10(d);
    CHECK(one[0].large_scale_gain == doctest::Approx(std::pow(10.0, -pl / 20)).epsilon(1e-12));

    Scenario empty;
    CHECK_THROWS(sample_utg_channels(empty, rng));
}

TEST_CASE("utg small-scale moments and snr distribution")
{
    Scenario sc;
    sc.robot_positions = {{80100.0, 50.0}};
    Rng rng(23);
    const int n = 100000;
    std::vector<double> snr(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const auto ch = sample_utg_channels(sc, rng)[0];
        acc += std::norm(ch.small_scale);
        snr[i] = ch.instantaneous_snr(1.0);
    }
    CHECK(acc / n == doctest::Approx(1.0).epsilon(0.02));

    const double mean = sample_utg_channels(sc, rng)[0].mean_snr(1.0);
    const double at_mean = double(std::count_if(snr.begin(), snr.end(), [&](double x) { return x <= mean; })) / n;
    CHECK(at_mean == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(0.01));

    // Kolmogorov-Smirnov against 1 - exp(-x/mean); critical value at 0.01 is 1.628/sqrt(n)
    std::sort(snr.begin(), snr.end());
    double dmax = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double f = 1.0 - std::exp(-snr[i] / mean);
        dmax = std::max({dmax, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
    }
    CHECK(dmax < 1.628 / std::sqrt(double(n)));
}

TEST_CASE("robot layout stays inside the area")
{
    Scenario sc;
    Rng rng(5);
    const auto pos = sample_robot_positions(sc, rng);
    CHECK(pos.size() == std::size_t(sc.num_robots));
    for (const auto &p : pos)
    {
        CHECK(std::abs(p[0] - sc.area_center[0]) <= sc.area_side / 2);
        CHECK(std::abs(p[1] - sc.area_center[1]) <= sc.area_side / 2);
    }
}
