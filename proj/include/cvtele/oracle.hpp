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

// Brute-force three-mode reference for the teleporter. The full tensor-grid
// wavefunction is materialized, both CZ gates are applied as two-body phases
// and the homodyne projections are done by direct quadrature. Only usable on
// coarse grids (reduced squeezing), which is all it is for.

#ifndef CVTELE_ORACLE_HPP
#define CVTELE_ORACLE_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "cvtele/core.hpp"
#include "cvtele/teleport.hpp"

namespace cvtele::oracle {

inline constexpr std::size_t kMaxTensorPoints = std::size_t{1} << 27;

struct OracleGrids {
    GridSpec input;       ///< x_in
    GridSpec mode1;       ///< x_1
    GridSpec mode2;       ///< x of the output mode (lab frame)
    GridSpec resource_y;  ///< quadrature grid for building psi2''(x)
};

/// Grids for outcomes with y1m in [y1_lo, y1_hi]: input on [-6, 6], mode 1
/// wide enough for the anti-squeezed profile, mode 2 a window of +-15 around
/// the mean of y1 / g.
OracleGrids validation_grids(const ProtocolParams& params, double y1_lo, double y1_hi, std::size_t n_input = 128,
                             std::size_t n_mode1 = 256, std::size_t n_mode2 = 256);

struct WaveFunction3D {
    std::array<GridSpec, 3> grids;  ///< input, mode 1, mode 2
    std::vector<Complex> amps;      ///< row-major, input slowest

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * grids[1].n + j) * grids[2].n + k;
    }
    /// Trapezoid norm over the tensor grid.
    double norm_squared() const;
};

/// psi2''(x) = (2 pi)^{-1/2} int dy e^{ixy} e^{-i gamma y^3} psi_s(y - alpha; -r)
/// by direct quadrature on `y_grid`.
std::vector<Complex> cubic_resource_position(const ProtocolParams& params, const GridSpec& y_grid,
                                             const GridSpec& x_grid);

/// psi_in (x) psi_s(x1; -r) (x) psi2''(x) times e^{i g1 x1 x} e^{i g2 x_in x1}.
/// Weights may be zero here (product state). Throws DomainError when the
/// tensor grid exceeds kMaxTensorPoints.
WaveFunction3D build_entangled(const ProtocolParams& params, const OracleGrids& grids);

/// Contracts the input and mode-1 axes against <yinm| and <y1m| by direct
/// quadrature. Throws GridError when the mode-1 grid is too coarse to resolve
/// the CZ phase for this outcome.
teleport::ConditionedState project_homodyne(const WaveFunction3D& psi3, const teleport::MeasurementOutcome& outcome,
                                            double g1, double g2, double r, unsigned jobs = 0);

/// Feed-forward as in the pipeline, then |<out|in>|^2.
double oracle_fidelity(const WaveFunction3D& psi3, const ProtocolParams& params,
                       const teleport::MeasurementOutcome& outcome, unsigned jobs = 0);
double oracle_fidelity(const ProtocolParams& params, const teleport::MeasurementOutcome& outcome,
                       const OracleGrids& grids, unsigned jobs = 0);

}  // namespace cvtele::oracle

#endif
