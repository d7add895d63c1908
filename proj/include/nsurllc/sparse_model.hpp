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

#ifndef NSURLLC_SPARSE_MODEL_HPP
#define NSURLLC_SPARSE_MODEL_HPP

#include "nsurllc/channel_models.hpp"

#include <optional>
#include <vector>

namespace nsurllc
{

// Angular dictionary on a grid uniform in sin(angle). Each point owns the
// angular cell halfway to its neighbours; offsets are clipped to that cell.
struct AngularGrid
{
    RVec points;      // nominal angles, ascending
    RVec offsets;     // current per-point offsets (zero on construction)
    RVec cell_lower;  // most negative admissible offset (<= 0)
    RVec cell_upper;  // most positive admissible offset (>= 0)
    double spacing = 0.5;

    int size() const { return static_cast<int>(points.size()); }
    CVec column(int n, double offset) const;
    CMat dictionary(const RVec &offs) const;
    CMat dictionary() const { return dictionary(offsets); }
    RVec clip(const RVec &offs) const;
    int nearest(double angle) const;
};

AngularGrid build_grid(int num_points, double spacing);

struct SparsePrior
{
    double sparsity = 0.05; // lambda, P(active)
    cdouble mean{0.0, 0.0}; // zeta
    double variance = 1.0;  // rho

    void validate() const;
};

// y = F(dphi) x + n with F(dphi) = rows * A(dphi). With zero offsets the
// effective matrix equals cascade * S * D * R (partial unitary DFT with random
// row selection S and column permutation R).
struct MeasurementModel
{
    int num_pilots = 0;
    int num_elements = 0;
    CMat rows; // P x N element-domain sensing rows
    std::vector<CVec> ris_patterns; // unit-modulus RIS configuration per pilot slot
    cdouble cascade{1.0, 0.0};
    double noise_variance = 0.0;
    std::vector<int> selected_rows; // S: DFT row used in slot p
    std::vector<int> permutation;   // R: column n of D*R is column permutation[n] of D

    double row_gain() const { return std::norm(cascade); }
    CMat effective_matrix(const AngularGrid &grid, const RVec &offsets) const { return rows * grid.dictionary(offsets); }
};

CMat unitary_dft(int n);

MeasurementModel build_measurement(const AngularGrid &grid, cdouble cascade, std::vector<int> selected_rows,
                                   std::vector<int> permutation, const CVec &training_pattern);

// Random S and R. The cascade scalar is the unit-modulus phase of the known
// BS-HAP gain, and every slot holds the training pattern that points the RIS
// from the BS direction toward `training_angle`.
MeasurementModel build_measurement(const AngularGrid &grid, const BsHapChannel &bs_hap, const ArrayConfig &arrays,
                                   int num_pilots, Rng &rng, double training_angle = 0.0);

struct GridRepresentation
{
    CVec x;        // sparse angular coefficients
    RVec offsets;  // true off-grid offsets (zero where inactive)
    std::vector<int> support;
};

// Places each path on its nearest grid point. Returns nullopt when two paths
// share a grid point, since a single offset cannot represent both.
std::optional<GridRepresentation> place_on_grid(const AngularGrid &grid, const std::vector<cdouble> &gains,
                                                const std::vector<double> &angles);

// sigma_e^2 such that mean received pilot energy per measurement over noise equals snr_db.
double calibrate_noise_variance(const MeasurementModel &model, const CVec &channel, double snr_db);

// y = rows * channel + noise. For collision-free instances this equals
// F(true offsets) * x_true + noise exactly.
CVec simulate_pilot_reception(const MeasurementModel &model, const CVec &channel, double noise_variance, Rng &rng);
CVec simulate_pilot_reception(const MeasurementModel &model, const SparseChannelInstance &instance, double noise_variance, Rng &rng);

} // namespace nsurllc

#endif
