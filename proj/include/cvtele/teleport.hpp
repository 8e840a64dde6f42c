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

// End-to-end wavefunction model of the cubic-phase teleporter.
//
// Mode 2 (the resource) is squeezed in x, displaced by alpha in y and sent
// through e^{-i gamma y^3}; it is stored in momentum representation on the
// resource grid. The two CZ gates and the homodyne projection of mode 1 are
// integrated analytically, which leaves
//
//   psi3(x) = (2 pi)^{-1/2} psi2''(x) int dx' e^{-i x' yin} psi_in(x')
//             psi_s(g (x - x') - y1; r),
//
// whose squared norm is the outcome density P(y1, yin). psi3 is localized
// around x = y1 / g with the footprint of the input state, so it is computed
// on the input grid translated by y1 / g; the feed-forward x-shift then maps
// it back onto the input grid exactly.

#ifndef CVTELE_TELEPORT_HPP
#define CVTELE_TELEPORT_HPP

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "cvtele/core.hpp"
#include "cvtele/qstate.hpp"

namespace cvtele::teleport {

struct MeasurementOutcome {
    double y1m = 0.0;
    double yinm = 0.0;
};

struct TeleportGrids {
    GridSpec resource;  ///< y-grid of mode 2
    GridSpec input;     ///< x-grid of the input and output mode
};

/// Resource grid from suggest_resource_grid; input grid centered on the
/// input mean with half-width 8 (vacuum units, widened for squeezed inputs).
TeleportGrids default_grids(const ProtocolParams& params, std::size_t n_resource = std::size_t{1} << 14,
                            std::size_t n_input = 512);

struct ConditionedState {
    WaveFunction1D psi;  ///< unnormalized, on grids.input translated by y1m / g
    double weight = 0.0;
};

/// Weights below this are treated as an impossible outcome.
inline constexpr double kWeightFloor = 1e-300;
/// Stored fidelity where it is undefined (y1m <= 0 or vanishing weight).
inline constexpr double kUndefinedFidelity = std::numeric_limits<double>::quiet_NaN();

/// Sets g1 = g, g2 = -g with g = 6 gamma alpha e^{-r}.
ProtocolParams default_weight(ProtocolParams params);

/// Position wavefunction of mode 2 after displacement and cubic gate, on the
/// conjugate of the resource grid centered at 3 gamma (alpha^2 + e^{2r}/2).
WaveFunction1D resource_state(const ProtocolParams& params, const TeleportGrids& grids);

/// Precomputed resource and input state; every per-outcome quantity is
/// derived from this without touching shared mutable state.
class Teleporter {
   public:
    Teleporter(const ProtocolParams& params, const TeleportGrids& grids);

    const ProtocolParams& params() const { return params_; }
    const TeleportGrids& grids() const { return grids_; }
    /// Mode 2 in momentum representation on the resource grid.
    const WaveFunction1D& resource_momentum() const { return resource_; }
    const WaveFunction1D& input() const { return input_; }

    /// psi2''(x) by direct quadrature over the resource grid at x_j = x0 + j h;
    /// zero where |x| reaches pi / (resource spacing).
    std::vector<Complex> resource_at(double x0, double h, std::size_t count) const;

    ConditionedState conditioned(const MeasurementOutcome& o) const;
    WaveFunction1D output(const MeasurementOutcome& o) const;
    double fidelity(const MeasurementOutcome& o) const;

    struct NodeResult {
        double P = 0.0;
        double F = kUndefinedFidelity;
    };
    /// P and F for every yin at fixed y1, sharing one resource evaluation.
    std::vector<NodeResult> row(double y1m, std::span<const double> yinm) const;

   private:
    ConditionedState conditioned_with(const MeasurementOutcome& o, std::span<const Complex> resource_window) const;
    WaveFunction1D feed_forward(const MeasurementOutcome& o, const ConditionedState& c) const;

    ProtocolParams params_;
    TeleportGrids grids_;
    WaveFunction1D resource_;
    WaveFunction1D input_;
};

ConditionedState conditioned_state(const ProtocolParams& params, const MeasurementOutcome& outcome,
                                   const TeleportGrids& grids);
WaveFunction1D output_state(const ProtocolParams& params, const MeasurementOutcome& outcome,
                            const TeleportGrids& grids);
double fidelity(const ProtocolParams& params, const MeasurementOutcome& outcome, const TeleportGrids& grids);

/// |<out|in>|^2 for two normalized states on the same grid.
double state_fidelity(const WaveFunction1D& out, const WaveFunction1D& in);

struct OutcomeLattice {
    std::vector<double> y1m;
    std::vector<double> yinm;

    static OutcomeLattice uniform(double y1_min, double y1_max, std::size_t n_y1, double yin_min, double yin_max,
                                  std::size_t n_yin);
    /// y1m over mean +- 4 sigma (floored at -4 sigma of the measurement noise),
    /// yinm over +- max(6, 5 sigma) from the Gaussian moments of the protocol.
    static OutcomeLattice automatic(const ProtocolParams& params, std::size_t n_y1, std::size_t n_yin);
};

struct SweepResult {
    std::vector<double> y1m_axis;
    std::vector<double> yinm_axis;
    std::vector<double> P;  ///< row-major [y1m][yinm]
    std::vector<double> F;  ///< same layout; NaN where undefined
    double total_probability = 0.0;
    std::map<double, double> postselect_stats;  ///< threshold -> mass with y1m < threshold

    double p_at(std::size_t i, std::size_t j) const { return P[i * yinm_axis.size() + j]; }
    double f_at(std::size_t i, std::size_t j) const { return F[i * yinm_axis.size() + j]; }
    /// Lattice node with the largest P.
    MeasurementOutcome modal_outcome() const;
    double modal_fidelity() const;
    /// Probability mass (2D trapezoid) over nodes with F > threshold.
    double fidelity_mass(double threshold) const;
    /// Mass of the y1m-marginal below `threshold`, with linear interpolation
    /// inside the straddling lattice cell.
    double mass_below(double y1_threshold) const;
};

/// Evaluates P and F on every lattice node. Throws std::logic_error if a
/// node violates P >= 0 or F in [0, 1].
SweepResult sweep(const ProtocolParams& params, const OutcomeLattice& lattice, const TeleportGrids& grids,
                  std::span<const double> thresholds = {}, unsigned jobs = 0);

}  // namespace cvtele::teleport

#endif
