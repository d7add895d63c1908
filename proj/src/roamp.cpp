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

#include "nsurllc/roamp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nsurllc
{

void RoampConfig::validate() const
{
    if (num_paths < 1 || inner_max < 1 || outer_max < 0)
        throw std::invalid_argument("invalid R-OAMP iteration settings");
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("damping must lie in (0,1]");
    if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0) || !(armijo_slope > 0.0 && armijo_slope < 1.0))
        throw std::invalid_argument("invalid line-search parameters");
    if (initial_prior)
        initial_prior->validate();
}

std::vector<int> PosteriorEstimate::active_paths() const
{
    std::vector<int> idx;
    for (int n = 0; n < support_posterior.size(); ++n)
        if (support_posterior(n) > 0.5)
            idx.push_back(n);
    if (idx.empty() && x_hat.size() > 0)
    {
        Eigen::Index best = 0;
        x_hat.cwiseAbs().maxCoeff(&best);
        idx.push_back(static_cast<int>(best));
    }
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return std::abs(x_hat(a)) > std::abs(x_hat(b)); });
    return idx;
}

static void refresh_gram(EstimatorState &state)
{
    state.column_energy = state.sensing.colwise().squaredNorm().transpose();
    Eigen::SelfAdjointEigenSolver<CMat> eig(state.sensing * state.sensing.adjoint());
    state.gram_vectors = eig.eigenvectors();
    state.gram_values = eig.eigenvalues().cwiseMax(0.0);
    state.sensing_h_gram = state.sensing.adjoint() * state.gram_vectors;
}

void refresh_sensing(EstimatorState &state, const MeasurementModel &model, const AngularGrid &grid)
{
    state.sensing = model.effective_matrix(grid, state.offsets);
    refresh_gram(state);
}

EstimatorState initial_state(const MeasurementModel &model, const AngularGrid &grid, const SparsePrior &prior)
{
    prior.validate();
    const int n = grid.size();
    EstimatorState s;
    s.prior = prior;
    s.x_pri_a = CVec::Zero(n);
    s.x_post_a = CVec::Zero(n);
    s.x_pri_b = CVec::Zero(n);
    s.x_post_b = CVec::Zero(n);
    s.v_pri_a = prior.sparsity * prior.variance;
    s.v_post_a = s.v_pri_a;
    s.v_pri_b = s.v_pri_a;
    s.v_post_b = s.v_pri_a;
    s.offsets = RVec::Zero(n);
    s.activity = RVec::Constant(n, prior.sparsity);
    s.slab_mean = CVec::Zero(n);
    refresh_sensing(s, model, grid);
    return s;
}

// A noiseless determined system has zero posterior variance; keep a tiny
// positive value so the extrinsic step stays defined.
static double posterior_variance(double v, Eigen::Index n, Eigen::Index p, double noise_part)
{
    const double vp = v * (static_cast<double>(n - p) + noise_part) / static_cast<double>(n);
    if (!std::isfinite(vp) || vp < 0.0)
        throw NumericalError("module A: invalid posterior variance");
    return std::max(vp, 1e-15 * v);
}

void module_a_lmmse(EstimatorState &state, const CVec &y, const CMat &f, double noise_variance)
{
    const double v = state.v_pri_a;
    if (!(v > 0.0) || !std::isfinite(v) || !(noise_variance >= 0.0))
        throw NumericalError("module A: non-positive prior variance");
    const auto n = f.cols();
    // W = v F F^H + sigma^2 I; reduces to (v s + sigma^2) I for orthogonal rows.
    CMat w = v * (f * f.adjoint());
    w.diagonal().array() += noise_variance;
    Eigen::LDLT<CMat> ldlt(w);
    if (ldlt.info() != Eigen::Success)
        throw NumericalError("module A: singular innovation covariance");
    const CVec innov = y - f * state.x_pri_a;
    state.x_post_a = state.x_pri_a + v * (f.adjoint() * ldlt.solve(innov));
    // v - v^2 tr(F^H W^-1 F)/N, written as v (N - P + sigma^2 tr W^-1) / N
    const double tr_inv = ldlt.solve(CMat::Identity(f.rows(), f.rows())).trace().real();
    state.v_post_a = posterior_variance(v, n, f.rows(), noise_variance * tr_inv);
}

void module_a_lmmse(EstimatorState &state, const CVec &y, double noise_variance)
{
    const double v = state.v_pri_a;
    if (!(v > 0.0) || !std::isfinite(v) || !(noise_variance >= 0.0))
        throw NumericalError("module A: non-positive prior variance");
    const RVec inv = (v * state.gram_values.array() + noise_variance).inverse().matrix();
    if (!inv.allFinite())
        throw NumericalError("module A: singular innovation covariance");
    const CVec innov = y - state.sensing * state.x_pri_a;
    const CVec proj = inv.cwiseProduct(state.gram_vectors.adjoint() * innov);
    state.x_post_a = state.x_pri_a + v * (state.sensing_h_gram * proj);
    state.v_post_a = posterior_variance(v, state.x_pri_a.size(), state.gram_values.size(), noise_variance * inv.sum());
}

Extrinsic extrinsic(const CVec &post_mean, double post_var, const CVec &pri_mean, double pri_var, double clamp_factor)
{
    Extrinsic e;
    if (std::isinf(pri_var))
    {
        e.mean = post_mean;
        e.variance = post_var;
        return e;
    }
    const double prec = 1.0 / post_var - 1.0 / pri_var;
    if (!(prec > 0.0))
    {
        e.variance = clamp_factor * post_var;
        e.mean = post_mean;
        return e;
    }
    e.variance = 1.0 / prec;
    e.mean = e.variance * (post_mean / post_var - pri_mean / pri_var);
    return e;
}

void module_b_mmse(EstimatorState &state)
{
    const double v = state.v_pri_b;
    if (!(v > 0.0) || !std::isfinite(v))
        throw NumericalError("module B: non-positive prior variance");
    const auto &pr = state.prior;
    const double lambda = std::clamp(pr.sparsity, 1e-300, 1.0);
    const double rho = pr.variance;
    const double slab = v + rho;
    const auto n = state.x_pri_b.size();
    state.activity.resize(n);
    state.slab_mean.resize(n);
    state.x_post_b.resize(n);
    state.slab_variance = v * rho / slab;
    double var_acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const cdouble x = state.x_pri_b(i);
        double pi = 1.0;
        if (lambda < 1.0)
        {
            const double l1 = std::log(lambda) - std::log(slab) - std::norm(x - pr.mean) / slab;
            const double l0 = std::log1p(-lambda) - std::log(v) - std::norm(x) / v;
            pi = 1.0 / (1.0 + std::exp(std::clamp(l0 - l1, -700.0, 700.0)));
        }
        const cdouble m = (rho * x + v * pr.mean) / slab;
        state.activity(i) = pi;
        state.slab_mean(i) = m;
        state.x_post_b(i) = pi * m;
        var_acc += pi * (1.0 - pi) * std::norm(m) + pi * state.slab_variance;
    }
    state.v_post_b = std::max(var_acc / static_cast<double>(n), 1e-300);
}

SparsePrior em_update(const EstimatorState &state)
{
    const double total = state.activity.sum();
    if (!(total > 0.0))
        return state.prior;
    SparsePrior p;
    const auto n = state.activity.size();
    p.sparsity = std::clamp(total / static_cast<double>(n), 1e-6, 1.0);
    cdouble zeta{0.0, 0.0};
    for (Eigen::Index i = 0; i < n; ++i)
        zeta += state.activity(i) * state.slab_mean(i);
    zeta /= total;
    double rho = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        rho += state.activity(i) * (std::norm(state.slab_mean(i) - zeta) + state.slab_variance);
    p.mean = zeta;
    p.variance = std::max(rho / total, 1e-12);
    return p;
}

double surrogate(const CVec &y, const CMat &f, const CVec &x_b, double v_b, double noise_variance)
{
    return -((y - f * x_b).squaredNorm() + v_b * f.squaredNorm()) / noise_variance;
}

RVec offset_gradient(const EstimatorState &state, const CVec &y, const MeasurementModel &model,
                     const AngularGrid &grid, double noise_variance, const std::vector<int> &indices)
{
    const int n = grid.size();
    RVec g = RVec::Zero(n);
    std::vector<int> idx = indices;
    if (idx.empty())
    {
        idx.resize(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
    }
    const CVec r = y - state.sensing * state.x_post_b;
    for (int k : idx)
    {
        const cdouble xk = state.x_post_b(k);
        const CVec bd = model.rows * steering_vector_derivative(grid.points(k) + state.offsets(k), n, grid.spacing);
        const auto bk = state.sensing.col(k);
        // y_{-k} = r + b_k x_k
        const CVec y_minus = r + bk * xk;
        const double phi1 = -(std::norm(xk) + state.v_post_b) / noise_variance;
        const cdouble phi2 = std::conj(xk) / noise_variance;
        g(k) = 2.0 * bd.dot(bk).real() * phi1 + 2.0 * (bd.dot(y_minus) * phi2).real();
    }
    return g;
}

OffsetStep offset_step(EstimatorState &state, const RVec &gradient, const CVec &y, const MeasurementModel &model,
                       const AngularGrid &grid, double noise_variance, const RoampConfig &config)
{
    OffsetStep out;
    out.offsets = state.offsets;
    out.surrogate_before = surrogate(y, state.sensing, state.x_post_b, state.v_post_b, noise_variance);
    out.surrogate_after = out.surrogate_before;
    std::vector<int> moving;
    for (int k = 0; k < gradient.size(); ++k)
        if (gradient(k) != 0.0)
            moving.push_back(k);
    if (moving.empty())
        return out;
    double gmax = 0.0;
    double half_cell = std::numeric_limits<double>::infinity();
    for (int k : moving)
    {
        gmax = std::max(gmax, std::abs(gradient(k)));
        half_cell = std::min(half_cell, 0.5 * (grid.cell_upper(k) - grid.cell_lower(k)));
    }
    if (!std::isfinite(gmax))
        throw NumericalError("offset gradient is not finite");
    const double scale = 0.5 * half_cell / gmax;
    const int n = grid.size();

    double t = 1.0;
    CMat trial_sensing = state.sensing;
    while (t >= config.min_step)
    {
        RVec trial = state.offsets;
        for (int k : moving)
            trial(k) += t * scale * gradient(k);
        trial = grid.clip(trial);
        double slope = 0.0;
        for (int k : moving)
            slope += gradient(k) * (trial(k) - state.offsets(k));
        if (slope > 0.0)
        {
            for (int k : moving)
                trial_sensing.col(k) = model.rows * steering_vector(grid.points(k) + trial(k), n, grid.spacing);
            const double value = surrogate(y, trial_sensing, state.x_post_b, state.v_post_b, noise_variance);
            if (value >= out.surrogate_before + config.armijo_slope * slope)
            {
                state.offsets = trial;
                state.sensing = trial_sensing;
                refresh_gram(state);
                out.offsets = trial;
                out.surrogate_after = value;
                return out;
            }
        }
        t *= config.armijo_shrink;
    }
    out.stagnated = true;
    return out;
}

double nmse(const CVec &estimate, const CVec &truth)
{
    const double den = truth.squaredNorm();
    if (!(den > 0.0))
        throw std::invalid_argument("nmse: zero reference");
    return (estimate - truth).squaredNorm() / den;
}

PosteriorEstimate run_roamp(const CVec &y, const MeasurementModel &model, const AngularGrid &grid,
                            const RoampConfig &config, const TraceSink &trace, const CVec *truth)
{
    config.validate();
    if (y.size() != model.num_pilots || grid.size() != model.num_elements)
        throw std::invalid_argument("run_roamp: inconsistent dimensions");
    const double sigma2 = model.noise_variance;
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("noise variance must be non-negative");
    // The surrogate and gradient divide by sigma^2; a noiseless model still
    // needs a finite scale for them.
    const double sigma2_eff = std::max(sigma2, 1e-30 * std::max(y.squaredNorm(), 1e-300));

    const int n = grid.size();
    SparsePrior prior = config.initial_prior.value_or(SparsePrior{std::min(1.0, double(config.num_paths) / n), {0.0, 0.0}, 1.0});
    EstimatorState st = initial_state(model, grid, prior);
    const double v_scale = st.v_pri_a;

    PosteriorEstimate est;
    for (int outer = 0;; ++outer)
    {
        for (int inner = 0; inner < config.inner_max; ++inner)
        {
            const CVec prev = st.x_post_b;
            module_a_lmmse(st, y, sigma2);
            auto ea = extrinsic(st.x_post_a, st.v_post_a, st.x_pri_a, st.v_pri_a, config.clamp_factor);
            st.x_pri_b = config.damping * ea.mean + (1.0 - config.damping) * st.x_pri_b;
            st.v_pri_b = ea.variance;
            module_b_mmse(st);
            if (config.learn_prior)
                st.prior = em_update(st);
            auto eb = extrinsic(st.x_post_b, st.v_post_b, st.x_pri_b, st.v_pri_b, config.clamp_factor);
            st.x_pri_a = config.damping * eb.mean + (1.0 - config.damping) * st.x_pri_a;
            st.v_pri_a = eb.variance;
            ++st.inner_iterations;

            if (!st.x_post_b.allFinite() || !std::isfinite(st.v_pri_a) || st.v_pri_a > 1e12 * v_scale)
                throw NumericalError("R-OAMP diverged: variance explosion after " +
                                     std::to_string(st.inner_iterations) + " iterations (v_pri_A=" +
                                     std::to_string(st.v_pri_a) + ")");
            if (trace)
            {
                TraceRow row{outer, inner, st.v_post_a, st.v_post_b,
                             surrogate(y, st.sensing, st.x_post_b, st.v_post_b, sigma2_eff), std::nullopt};
                if (truth)
                    row.nmse = nmse(grid.dictionary(st.offsets) * st.x_post_b, *truth);
                trace(row);
            }
            const double norm = st.x_post_b.norm();
            const double change = (st.x_post_b - prev).norm();
            if (change <= config.inner_tolerance * std::max(norm, 1e-300))
                break;
        }
        if (!config.refine_offsets || outer >= config.outer_max)
            break;

        std::vector<int> active;
        for (int k = 0; k < n; ++k)
            if (st.activity(k) > 0.5)
                active.push_back(k);
        if (active.empty())
            break;
        // Refine on the num_paths strongest active atoms with the rest of x
        // zeroed. With the full posterior, neighbours holding an off-grid
        // path's leakage leave the residual (and the gradient) near zero.
        std::sort(active.begin(), active.end(),
                  [&](int a, int b) { return std::abs(st.x_post_b(a)) > std::abs(st.x_post_b(b)); });
        if (static_cast<int>(active.size()) > config.num_paths)
            active.resize(static_cast<std::size_t>(config.num_paths));
        const CVec full = st.x_post_b;
        st.x_post_b.setZero();
        for (int k : active)
            st.x_post_b(k) = full(k);
        const RVec g = offset_gradient(st, y, model, grid, sigma2_eff, active);
        const RVec before = st.offsets;
        const OffsetStep step = offset_step(st, g, y, model, grid, sigma2_eff, config);
        st.x_post_b = full;
        ++st.outer_iterations;
        if (step.stagnated)
        {
            est.stagnated = true;
            break;
        }
        if ((st.offsets - before).cwiseAbs().maxCoeff() < config.offset_tolerance)
            break;
    }

    est.x_hat = st.x_post_b;
    est.posterior_variance = st.v_post_b;
    est.support_posterior = st.activity;
    est.refined_offsets = st.offsets;
    est.reconstructed_channel = grid.dictionary(st.offsets) * st.x_post_b;
    est.prior = st.prior;
    est.inner_iterations = st.inner_iterations;
    est.outer_iterations = st.outer_iterations;
    return est;
}

} // namespace nsurllc
