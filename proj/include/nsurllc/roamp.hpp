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

#ifndef NSURLLC_ROAMP_HPP
#define NSURLLC_ROAMP_HPP

#include "nsurllc/sparse_model.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace nsurllc
{

struct EstimatorState
{
    CVec x_pri_a, x_post_a, x_pri_b, x_post_b;
    double v_pri_a = 1.0, v_post_a = 1.0, v_pri_b = 1.0, v_post_b = 1.0;
    RVec offsets;
    SparsePrior prior;

    // Module B by-products, kept for the EM step.
    RVec activity;          // pi_n
    CVec slab_mean;         // m_n
    double slab_variance = 0.0;

    // F(offsets), the squared norms of its columns, and F F^H = U diag(g) U^H
    // with F^H U kept for Module A.
    CMat sensing;
    RVec column_energy;
    CMat gram_vectors;
    RVec gram_values;
    CMat sensing_h_gram;

    int inner_iterations = 0;
    int outer_iterations = 0;
};

struct PosteriorEstimate
{
    CVec x_hat;
    double posterior_variance = 0.0;
    RVec support_posterior;
    RVec refined_offsets;
    CVec reconstructed_channel;
    SparsePrior prior;

    int inner_iterations = 0;
    int outer_iterations = 0;
    bool stagnated = false;

    // Indices with support posterior above one half, strongest first; falls
    // back to the single strongest coefficient when none qualifies.
    std::vector<int> active_paths() const;
};

struct TraceRow
{
    int outer = 0;
    int inner = 0;
    double v_post_a = 0.0;
    double v_post_b = 0.0;
    double surrogate = 0.0;
    std::optional<double> nmse;
};

struct RoampConfig
{
    std::optional<SparsePrior> initial_prior; // default: lambda = L/N, zeta = 0, rho = 1
    int num_paths = 8;
    int inner_max = 50;
    double inner_tolerance = 1e-6;
    int outer_max = 30;
    double offset_tolerance = 1e-6;
    double damping = 0.7;
    double clamp_factor = 1e8;
    double armijo_shrink = 0.5;
    double armijo_slope = 1e-3;
    double min_step = 1e-12;
    bool learn_prior = true;
    bool refine_offsets = true;

    void validate() const;
};

// Rebuilds state.sensing and state.column_energy from the offsets.
void refresh_sensing(EstimatorState &state, const MeasurementModel &model, const AngularGrid &grid);

EstimatorState initial_state(const MeasurementModel &model, const AngularGrid &grid, const SparsePrior &prior);

// LMMSE given x ~ CN(x_pri_a, v_pri_a I) and y = F x + n.
void module_a_lmmse(EstimatorState &state, const CVec &y, const CMat &f, double noise_variance);
// Same, using the cached decomposition of state.sensing.
void module_a_lmmse(EstimatorState &state, const CVec &y, double noise_variance);

struct Extrinsic
{
    CVec mean;
    double variance = 0.0;
};

Extrinsic extrinsic(const CVec &post_mean, double post_var, const CVec &pri_mean, double pri_var,
                    double clamp_factor = 1e8);

// Spike-and-slab posterior from the pseudo-observation x_pri_b with noise v_pri_b.
void module_b_mmse(EstimatorState &state);

SparsePrior em_update(const EstimatorState &state);

// -(|y - F x_b|^2 + v_b sum_n |F_n|^2) / sigma^2
double surrogate(const CVec &y, const CMat &f, const CVec &x_b, double v_b, double noise_variance);

// d surrogate / d offset_n for n in `indices` (all when empty); other entries zero.
RVec offset_gradient(const EstimatorState &state, const CVec &y, const MeasurementModel &model,
                     const AngularGrid &grid, double noise_variance, const std::vector<int> &indices = {});

struct OffsetStep
{
    RVec offsets;
    double surrogate_before = 0.0;
    double surrogate_after = 0.0;
    bool stagnated = false;
};

// Projected backtracking ascent along the gradient. Step 1 moves the largest
// component by half the smallest involved cell. Updates state.offsets and
// state.sensing on success.
OffsetStep offset_step(EstimatorState &state, const RVec &gradient, const CVec &y, const MeasurementModel &model,
                       const AngularGrid &grid, double noise_variance, const RoampConfig &config);

using TraceSink = std::function<void(const TraceRow &)>;

PosteriorEstimate run_roamp(const CVec &y, const MeasurementModel &model, const AngularGrid &grid,
                            const RoampConfig &config, const TraceSink &trace = {}, const CVec *truth = nullptr);

double nmse(const CVec &estimate, const CVec &truth);

} // namespace nsurllc

#endif
