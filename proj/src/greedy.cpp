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

#include "nsurllc/greedy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace nsurllc
{

void GreedyConfig::validate() const
{
    if (target_sparsity < 1)
        throw std::invalid_argument("target sparsity must be >= 1");
    if (max_iterations < 0)
        throw std::invalid_argument("max_iterations must be >= 0");
    if (!(residual_tolerance >= 0.0))
        throw std::invalid_argument("residual tolerance must be >= 0");
}

namespace
{

CMat gather(const CMat &f, const std::vector<int> &support)
{
    CMat s(f.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i)
        s.col(static_cast<Eigen::Index>(i)) = f.col(support[i]);
    return s;
}

// Least squares on the support; false if the columns are rank deficient.
bool solve_ls(const CMat &f, const std::vector<int> &support, const CVec &y, CVec &coef)
{
    if (support.empty())
    {
        coef.resize(0);
        return true;
    }
    const CMat s = gather(f, support);
    Eigen::ColPivHouseholderQR<CMat> qr(s);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(support.size()))
        return false;
    coef = qr.solve(y);
    return true;
}

CVec residual_of(const CMat &f, const std::vector<int> &support, const CVec &coef, const CVec &y)
{
    if (support.empty())
        return y;
    return y - gather(f, support) * coef;
}

std::vector<int> top_k(const RVec &score, int k, const std::vector<char> &excluded)
{
    std::vector<int> idx;
    for (int i = 0; i < score.size(); ++i)
        if (!excluded[static_cast<std::size_t>(i)])
            idx.push_back(i);
    k = std::min<int>(k, static_cast<int>(idx.size()));
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) {
        return score(a) > score(b) || (score(a) == score(b) && a < b);
    });
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

CVec scatter(int n, const std::vector<int> &support, const CVec &coef)
{
    CVec x = CVec::Zero(n);
    for (std::size_t i = 0; i < support.size(); ++i)
        x(support[i]) = coef(static_cast<Eigen::Index>(i));
    return x;
}

} // namespace

GreedyResult omp(const CVec &y, const CMat &f, const GreedyConfig &config)
{
    config.validate();
    if (f.cols() < config.target_sparsity)
        throw std::invalid_argument("dictionary has fewer columns than the target sparsity");
    if (y.size() != f.rows())
        throw std::invalid_argument("omp: dimension mismatch");
    const int n = static_cast<int>(f.cols());
    GreedyResult out;
    out.x = CVec::Zero(n);
    const double ynorm = y.norm();
    out.residual_norm = ynorm;
    if (ynorm == 0.0)
        return out;

    std::vector<int> support;
    std::vector<char> excluded(static_cast<std::size_t>(n), 0);
    CVec coef;
    CVec r = y;
    while (static_cast<int>(support.size()) < config.target_sparsity && out.iterations < config.max_iterations)
    {
        if (r.norm() <= config.residual_tolerance * ynorm)
            break;
        const RVec score = (f.adjoint() * r).cwiseAbs();
        const auto pick = top_k(score, 1, excluded);
        if (pick.empty())
            break;
        ++out.iterations;
        excluded[static_cast<std::size_t>(pick[0])] = 1;
        support.push_back(pick[0]);
        CVec trial;
        if (!solve_ls(f, support, y, trial))
        {
            support.pop_back();
            continue;
        }
        coef = trial;
        r = residual_of(f, support, coef, y);
    }
    out.x = scatter(n, support, coef);
    out.residual_norm = r.norm();
    return out;
}

GreedyResult sp(const CVec &y, const CMat &f, const GreedyConfig &config)
{
    config.validate();
    const int k = config.target_sparsity;
    if (f.cols() < k)
        throw std::invalid_argument("dictionary has fewer columns than the target sparsity");
    if (y.size() != f.rows())
        throw std::invalid_argument("sp: dimension mismatch");
    const int n = static_cast<int>(f.cols());
    GreedyResult out;
    out.x = CVec::Zero(n);
    const double ynorm = y.norm();
    out.residual_norm = ynorm;
    if (ynorm == 0.0)
        return out;

    std::vector<char> excluded(static_cast<std::size_t>(n), 0);

    // Least squares on `cand`, dropping atoms that make it rank deficient.
    auto fit = [&](std::vector<int> cand, CVec &coef) {
        if (solve_ls(f, cand, y, coef))
            return cand;
        // slow path: rebuild in order, skipping atoms that add no rank
        std::vector<int> kept;
        for (int c : cand)
        {
            kept.push_back(c);
            CVec trial;
            if (!solve_ls(f, kept, y, trial))
            {
                excluded[static_cast<std::size_t>(c)] = 1;
                kept.pop_back();
            }
        }
        solve_ls(f, kept, y, coef);
        return kept;
    };

    std::vector<int> support = fit(top_k((f.adjoint() * y).cwiseAbs(), k, excluded), out.x);
    CVec coef = out.x;
    CVec r = residual_of(f, support, coef, y);
    double rnorm = r.norm();

    while (out.iterations < config.max_iterations && rnorm > config.residual_tolerance * ynorm)
    {
        std::vector<char> in_support(excluded);
        for (int s : support)
            in_support[static_cast<std::size_t>(s)] = 1;
        std::vector<int> cand = support;
        for (int extra : top_k((f.adjoint() * r).cwiseAbs(), k, in_support))
            cand.push_back(extra);
        CVec wide;
        cand = fit(cand, wide);
        // Prune to the K largest least-squares coefficients.
        RVec mag = RVec::Zero(n);
        std::vector<char> off(static_cast<std::size_t>(n), 1);
        for (std::size_t i = 0; i < cand.size(); ++i)
        {
            mag(cand[i]) = std::abs(wide(static_cast<Eigen::Index>(i)));
            off[static_cast<std::size_t>(cand[i])] = 0;
        }
        CVec next_coef;
        std::vector<int> next = fit(top_k(mag, k, off), next_coef);
        const CVec next_r = residual_of(f, next, next_coef, y);
        ++out.iterations;
        if (next_r.norm() >= rnorm)
            break;
        support = next;
        coef = next_coef;
        r = next_r;
        rnorm = r.norm();
    }
    out.x = scatter(n, support, coef);
    out.residual_norm = rnorm;
    return out;
}

} // namespace nsurllc
