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

// Single-mode wavefunctions sampled on a uniform quadrature grid, and the
// unitary and measurement primitives the teleporter is composed from.
//
// Integrals use the trapezoid rule. Basis changes are discrete Fourier
// transforms with explicit phase factors, so grids need not be centered on
// zero: a grid of n points with spacing h maps to a conjugate grid of n
// points with spacing 2 pi / (n h) centered wherever the caller asks.

#ifndef CVTELE_QSTATE_HPP
#define CVTELE_QSTATE_HPP

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "cvtele/core.hpp"

namespace cvtele {

enum class Rep { Position, Momentum };
enum class Axis { X, Y };

/// States flagged normalized must have unit norm to within this.
inline constexpr double kNormTolerance = 1e-6;

class WaveFunction1D {
   public:
    /// Throws GridError on a size mismatch and DomainError when a state
    /// flagged normalized misses unit norm by more than kNormTolerance.
    WaveFunction1D(GridSpec grid, std::vector<Complex> amps, Rep rep, bool normalized = true);

    const GridSpec& grid() const { return grid_; }
    std::span<const Complex> amps() const { return amps_; }
    Rep rep() const { return rep_; }
    /// False for conditioned (unnormalized) states.
    bool normalized() const { return normalized_; }

    /// Trapezoid-rule integral of |psi|^2.
    double norm_squared() const;

    std::vector<Complex>& mutable_amps() { return amps_; }

   private:
    GridSpec grid_;
    std::vector<Complex> amps_;
    Rep rep_;
    bool normalized_;
};

/// Trapezoid weights (h/2, h, ..., h, h/2).
std::vector<double> trapezoid_weights(const GridSpec& grid);

/// psi_s(x - center; r) in position representation. Negative r gives the
/// anti-squeezed profile. Throws GridError when the grid truncates more than
/// 1e-4 of the norm.
WaveFunction1D squeezed_state(const GridSpec& grid, double r, double center = 0.0);

/// Shifts the quadrature `axis` by `amount`. Along the representation's own
/// axis the amplitudes are translated on the same grid by a phase ramp in the
/// conjugate representation; along the conjugate axis this is a plane-wave
/// phase (e^{i amount x} for a y-shift in position rep). Throws GridError if
/// more than 1e-6 of the mass would leave the grid.
WaveFunction1D displace(const WaveFunction1D& psi, Axis axis, double amount);

/// Relabels the grid by `amount` without touching the amplitudes, i.e. an
/// exact shift of the represented quadrature onto a moved grid.
WaveFunction1D translate_grid(const WaveFunction1D& psi, double amount);

/// Multiplies by e^{-i gamma y^3} in momentum representation (position-rep
/// input is converted there and back). Throws GridError("undersampled phase")
/// when spacing * max|3 gamma y^2| >= pi.
WaveFunction1D cubic_phase(const WaveFunction1D& psi, double gamma);

/// Position -> momentum, onto the conjugate grid centered at `center`.
WaveFunction1D to_momentum(const WaveFunction1D& psi, double center = 0.0);
/// Momentum -> position, onto the conjugate grid centered at `center`.
WaveFunction1D to_position(const WaveFunction1D& psi, double center = 0.0);

/// Grid produced by a basis change of `grid` centered at `center`.
GridSpec conjugate_grid(const GridSpec& grid, double center);

/// Trapezoid-rule <a|b>. Throws GridError on mismatched grids or representations.
Complex overlap(const WaveFunction1D& a, const WaveFunction1D& b);

struct Moments1D {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and variance along the representation's axis. Throws DomainError for
/// unnormalized states.
Moments1D quadrature_moments(const WaveFunction1D& psi);

/// Rescales to unit norm and marks the result normalized.
WaveFunction1D normalize(const WaveFunction1D& psi);

/// phi(x) = int dx' psi_s(g (x - x') - shift; r) psi(x'), evaluated on the
/// grid of psi through the analytic spectrum of the kernel. Callers that need
/// the e^{-i x' y} factor apply it to psi beforehand. Throws GridError when
/// the kernel is wider than the grid or psi is not in position rep.
WaveFunction1D gaussian_convolve(const WaveFunction1D& psi, double g, double r, double shift);

/// Two-column-plus CSV: header "q,re,im" then one row per grid point.
void write_csv(std::ostream& out, const WaveFunction1D& psi);
/// Reads what write_csv writes. The grid is reconstructed from the first and
/// last abscissae; rows must be uniformly spaced.
WaveFunction1D read_csv(std::istream& in, Rep rep);

}  // namespace cvtele

#endif
