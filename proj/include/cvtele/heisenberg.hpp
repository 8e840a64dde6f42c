// Copyright 2026 The cvtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Closed-form error budget of the cubic-phase teleporter in the Heisenberg
// picture, plus a semiclassical Monte-Carlo of the exact square-root
// feed-forward that measures how good the linearization is.

#ifndef CVTELE_HEISENBERG_HPP
#define CVTELE_HEISENBERG_HPP

#include <cstddef>
#include <cstdint>

#include "cvtele/core.hpp"

namespace cvtele::heisenberg {

inline constexpr double kPlanck = 6.62607015e-34;     // J s (exact, SI 2019)
inline constexpr double kSpeedOfLight = 299792458.0;  // m / s (exact)

struct ErrorBudget {
    double err_x = 0.0;
    double err_y = 0.0;
    double baseline = 0.0;
};

struct McReport {
    std::size_t n_samples = 0;
    double emp_var_x = 0.0;
    double emp_var_y = 0.0;
    double lin_var_x = 0.0;
    double lin_var_y = 0.0;
    double rel_dev_x = 0.0;
    double rel_dev_y = 0.0;
    double clip_fraction = 0.0;
    /// clip_fraction > 0.01: the linearization regime is not reached.
    bool outside_linear_regime = false;
    /// Sample statistics of the measured y1m (all samples, clipped or not).
    double mean_y1m = 0.0;
    double sem_y1m = 0.0;
    /// Sample mean of error_y_exact evaluated at each accepted y1m.
    double cond_var_y = 0.0;
    double rel_dev_y_cond = 0.0;
};

/// x-quadrature mean-square error (1/g^2) e^{-2r}/2.
double error_x(double g, double r);

/// y-quadrature mean-square error at a measured photocurrent y1m > 0.
double error_y_exact(double g, double gamma, double y1m, double r, double var_x_in);

/// var_x_in / (36 gamma^2 alpha^2), the y-error at the mean photocurrent
/// with resource noise dropped.
double error_y_estimate(double gamma, double alpha, double var_x_in);

/// Standard CV teleportation error 2 e^{-2r} * (1/2).
double original_scheme_error(double r);

/// g = 6 gamma alpha e^{-r}: equalizes error_x and error_y_estimate for vacuum input.
double balanced_weight(double gamma, double alpha, double r);

/// Smallest alpha with error_y_estimate <= original_scheme_error.
double crossover_alpha(double gamma, double r, double var_x_in);

/// <y1> ~ 3 g gamma alpha^2.
double mean_y1(double g, double gamma, double alpha);

/// Exact first moment 3 g gamma (alpha^2 + e^{2r}/2) of the measured y1
/// for a zero-mean input.
double mean_y1_exact(double g, double gamma, double alpha, double r);

/// Standard deviation of the measured y1 for a Gaussian resource:
/// resource, input and squeezing noise added in quadrature.
double stddev_y1(double g, double gamma, double alpha, double r, double var_x_in);

/// Standard deviation of the measured y_in for a teleport-mode setup.
double stddev_yin(double g, double r, double var_y_in);

/// Pulse energy h c alpha^2 / (2 lambda tau) needed for the y-displacement.
double pulse_energy(const EnergyParams& p);

ErrorBudget error_budget(const ProtocolParams& params);

/// Samples the quadratures of input and both resource modes, propagates the
/// exact (non-linearized) output quadratures and compares against the
/// closed-form errors. Deterministic in (params, n, seed); `jobs` only
/// changes wall time.
McReport monte_carlo(const ProtocolParams& params, std::size_t n, std::uint64_t seed, unsigned jobs = 0);

}  // namespace cvtele::heisenberg

#endif
