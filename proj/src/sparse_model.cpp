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

#include "nsurllc/sparse_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nsurllc
{

CVec AngularGrid::column(int n, double offset) const
{
    return steering_vector(points[n] + offset, size(), spacing);
}

CMat AngularGrid::dictionary(const RVec &offs) const
{
    const int n = size();
    CMat a(n, n);
    for (int k = 0; k < n; ++k)
        a.col(k) = column(k, offs[k]);
    return a;
}

RVec AngularGrid::clip(const RVec &offs) const
{
    return offs.cwiseMax(cell_lower).cwiseMin(cell_upper);
}

int AngularGrid::nearest(double angle) const
{
    const double *begin = points.data();
    const double *end = begin + points.size();
    const double *it = std::lower_bound(begin, end, angle);
    if (it == begin)
        return 0;
    if (it == end)
        return size() - 1;
    return (angle - *(it - 1) <= *it - angle) ? static_cast<int>(it - begin - 1) : static_cast<int>(it - begin);
}

AngularGrid build_grid(int num_points, double spacing)
{
    if (num_points < 2)
        throw std::invalid_argument("grid needs at least two points");
    AngularGrid g;
    g.spacing = spacing;
    g.points.resize(num_points);
    for (int n = 0; n < num_points; ++n)
        g.points[n] = std::asin(-1.0 + (2.0 * n + 1.0) / num_points);
    g.offsets = RVec::Zero(num_points);
    g.cell_lower.resize(num_points);
    g.cell_upper.resize(num_points);
    for (int n = 0; n < num_points; ++n)
    {
        const double lo = n > 0 ? g.points[n - 1] : -kPi / 2.0;
        const double hi = n + 1 < num_points ? g.points[n + 1] : kPi / 2.0;
        g.cell_lower[n] = -(g.points[n] - lo) / 2.0;
        g.cell_upper[n] = (hi - g.points[n]) / 2.0;
    }
    return g;
}

void SparsePrior::validate() const
{
    if (!(sparsity > 0.0 && sparsity < 1.0))
        throw std::invalid_argument("prior sparsity must lie in (0,1)");
    if (!(variance > 0.0))
        throw std::invalid_argument("prior variance must be positive");
}

CMat unitary_dft(int n)
{
    CMat d(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
            d(k, m) = std::polar(s, -2.0 * kPi * static_cast<double>((static_cast<long>(k) * m) % n) / n);
    return d;
}

MeasurementModel build_measurement(const AngularGrid &grid, cdouble cascade, std::vector<int> selected_rows,
                                   std::vector<int> permutation, const CVec &training_pattern)
{
    const int n = grid.size();
    const int p = static_cast<int>(selected_rows.size());
    if (p < 1 || p > n)
        throw std::invalid_argument("number of pilots must lie in [1, N]");
    if (static_cast<int>(permutation.size()) != n)
        throw std::invalid_argument("permutation must have N entries");
    if (training_pattern.size() != n)
        throw std::invalid_argument("training pattern must have N entries");

    const CMat dft = unitary_dft(n);
    CMat f0(p, n);
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < n; ++c)
            f0(r, c) = cascade * dft(selected_rows[r], permutation[c]);

    const CMat a0 = grid.dictionary(RVec::Zero(n));
    Eigen::PartialPivLU<CMat> lu(a0);
    if (!(lu.rcond() > 1e-12))
        throw std::invalid_argument("nominal dictionary is singular for this spacing");

    MeasurementModel m;
    m.num_pilots = p;
    m.num_elements = n;
    m.cascade = cascade;
    m.rows = f0 * lu.inverse();
    m.ris_patterns.assign(p, training_pattern);
    m.selected_rows = std::move(selected_rows);
    m.permutation = std::move(permutation);
    return m;
}

MeasurementModel build_measurement(const AngularGrid &grid, const BsHapChannel &bs_hap, const ArrayConfig &arrays,
                                   int num_pilots, Rng &rng, double training_angle)
{
    const int n = grid.size();
    if (num_pilots < 1 || num_pilots > n)
        throw std::invalid_argument("number of pilots must lie in [1, N]");
    std::vector<int> rows(n), perm(n);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(num_pilots);
    std::shuffle(perm.begin(), perm.end(), rng);

    CVec pattern(n);
    const double dpsi = std::sin(training_angle) - std::sin(bs_hap.aoa);
    for (int k = 0; k < n; ++k)
        pattern[k] = std::polar(1.0, -2.0 * kPi * k * arrays.ris_spacing * dpsi);

    const double mag = std::abs(bs_hap.gain);
    const cdouble cascade = mag > 0.0 ? bs_hap.gain / mag : cdouble(1.0, 0.0);
    return build_measurement(grid, cascade, std::move(rows), std::move(perm), pattern);
}

std::optional<GridRepresentation> place_on_grid(const AngularGrid &grid, const std::vector<cdouble> &gains,
                                                const std::vector<double> &angles)
{
    GridRepresentation rep;
    rep.x = CVec::Zero(grid.size());
    rep.offsets = RVec::Zero(grid.size());
    for (std::size_t l = 0; l < gains.size(); ++l)
    {
        const int k = grid.nearest(angles[l]);
        if (std::find(rep.support.begin(), rep.support.end(), k) != rep.support.end())
            return std::nullopt;
        rep.support.push_back(k);
        rep.x[k] = gains[l];
        rep.offsets[k] = angles[l] - grid.points[k];
    }
    return rep;
}

double calibrate_noise_variance(const MeasurementModel &model, const CVec &channel, double snr_db)
{
    const double energy = (model.rows * channel).squaredNorm();
    return energy / (model.num_pilots * db_to_linear(snr_db));
}

CVec simulate_pilot_reception(const MeasurementModel &model, const CVec &channel, double noise_variance, Rng &rng)
{
    if (channel.size() != model.num_elements)
        throw std::invalid_argument("channel length does not match the measurement model");
    CVec y = model.rows * channel;
    if (noise_variance > 0.0)
        for (int p = 0; p < y.size(); ++p)
            y[p] += complex_normal(rng, noise_variance);
    return y;
}

CVec simulate_pilot_reception(const MeasurementModel &model, const SparseChannelInstance &instance, double noise_variance, Rng &rng)
{
    return simulate_pilot_reception(model, instance.normalized_channel(), noise_variance, rng);
}

} // namespace nsurllc
