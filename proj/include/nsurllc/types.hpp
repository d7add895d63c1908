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

#ifndef NSURLLC_TYPES_HPP
#define NSURLLC_TYPES_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace nsurllc
{

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using Vec3 = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

// All stochastic operations take an explicit engine; nothing draws from global state.
using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline cdouble complex_normal(Rng &rng, double variance = 1.0)
{
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

// Thrown when a constraint set admits no solution. `layer` names the stage
// that failed ("bs", "uav", "robot"), `index` the binding robot or -1.
class InfeasibleError : public std::runtime_error
{
public:
    InfeasibleError(std::string layer, int index, const std::string &what)
        : std::runtime_error(what), layer_(std::move(layer)), index_(index) {}
    const std::string &layer() const noexcept { return layer_; }
    int index() const noexcept { return index_; }

private:
    std::string layer_;
    int index_;
};

// Numerical breakdown inside an iterative solver (variance explosion, NaN).
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace nsurllc

#endif
