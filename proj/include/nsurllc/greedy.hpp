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

#ifndef NSURLLC_GREEDY_HPP
#define NSURLLC_GREEDY_HPP

#include "nsurllc/types.hpp"

namespace nsurllc
{

struct GreedyConfig
{
    int target_sparsity = 8;
    double residual_tolerance = 1e-8; // relative to |y|
    int max_iterations = 50;

    void validate() const;
};

struct GreedyResult
{
    CVec x;
    double residual_norm = 0.0;
    int iterations = 0;
};

GreedyResult omp(const CVec &y, const CMat &f, const GreedyConfig &config);

// Subspace pursuit with fixed sparsity K = target_sparsity.
GreedyResult sp(const CVec &y, const CMat &f, const GreedyConfig &config);

} // namespace nsurllc

#endif
