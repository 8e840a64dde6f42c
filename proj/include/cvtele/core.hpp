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

#ifndef CVTELE_CORE_HPP
#define CVTELE_CORE_HPP

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cvtele {

using Complex = std::complex<double>;

/// Raised when an argument lies outside the domain of a formula.
class DomainError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Raised when a discretization cannot represent the requested state.
class GridError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Physical conventions shared by every module.
///
/// Quadratures obey [x, y] = i, so the vacuum has variance 1/2 in each
/// quadrature. Momentum eigenstates are |y> = (2 pi)^(-1/2) int dx e^{+ixy} |x>,
/// hence psi~(y) = (2 pi)^(-1/2) int dx e^{-ixy} psi(x).
struct Conventions {
    static constexpr double vacuum_quadrature_variance = 0.5;
    static constexpr int fourier_sign = +1;
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

/// Uniform grid with inclusive endpoints: x_i = min + i * (max - min) / (n - 1).
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;

    double spacing() const { return (max - min) / static_cast<double>(n - 1); }
    double at(std::size_t i) const { return min + static_cast<double>(i) * spacing(); }
    double center() const { return 0.5 * (min + max); }
    double width() const { return max - min; }

    /// Throws GridError unless max > min and n >= 16.
    void validate() const;

    /// Grid of n points with the given spacing, symmetric about `center`.
    static GridSpec centered(double center, double spacing, std::size_t n);
    /// Same points shifted by `amount`.
    GridSpec translated(double amount) const;

    bool operator==(const GridSpec&) const = default;
};

/// Input state to be teleported.
namespace input {
struct Vacuum {};
struct Squeezed {
    double r_in = 0.0;
};
struct Displaced {
    double x0 = 0.0;
    double y0 = 0.0;
};
/// Position-representation samples supplied by the caller.
struct Custom {
    GridSpec grid;
    std::vector<Complex> amps;
};
}  // namespace input

class InputState {
   public:
    using Kind = std::variant<input::Vacuum, input::Squeezed, input::Displaced, input::Custom>;

    InputState() = default;
    InputState(Kind kind) : kind_(std::move(kind)) {}

    static InputState vacuum() { return InputState(input::Vacuum{}); }
    static InputState squeezed(double r_in) { return InputState(input::Squeezed{r_in}); }
    static InputState displaced(double x0, double y0) { return InputState(input::Displaced{x0, y0}); }

    const Kind& kind() const { return kind_; }
    std::string name() const;

    /// Position wavefunction at `x`. Custom states use band-limited (sinc)
    /// interpolation of their samples.
    Complex amplitude(double x) const;
    std::vector<Complex> sample(const GridSpec& grid) const;

    double mean_x() const;
    double mean_y() const;
    double variance_x() const;
    double variance_y() const;

   private:
    Kind kind_ = input::Vacuum{};
};

struct ProtocolParams {
    double r = 0.0;
    double gamma = 0.1;
    double alpha = 0.0;
    double g1 = 1.0;
    double g2 = -1.0;
    InputState input_state;

    /// Throws DomainError when r < 0, gamma <= 0, or a weight is zero or not finite.
    void validate() const;
    /// validate() plus g1 == -g2.
    void validate_teleport() const;
    bool is_teleport() const { return g1 == -g2; }
    /// The common weight g = g1 of a teleport-mode parameter set.
    double g() const { return g1; }
};

/// Teleport-mode parameters: g1 = g, g2 = -g.
ProtocolParams teleport_params(double r, double gamma, double alpha, double g,
                               InputState input = InputState::vacuum());

struct EnergyParams {
    double wavelength = 430e-9;
    double tau = 0.01;
    double alpha = 0.0;

    void validate() const;
};

/// dB -> r via e^{-2r} = 10^{db/10}. Squeezing is quoted with db <= 0.
double squeezing_db_to_r(double db);
double r_to_squeezing_db(double r);

/// Squeezed-vacuum wavefunction (e^{2r}/pi)^{1/4} exp(-e^{2r} x^2 / 2).
double squeezed_amplitude(double x, double r);

/// Resource-mode y-grid centered at alpha, half-width 6 e^r / sqrt(2) plus 25%.
GridSpec suggest_resource_grid(const ProtocolParams& params, std::size_t n);

/// Warnings for a resource y-grid: empty iff the cubic phase is resolved
/// (h * max|3 gamma y^2| < pi) and the grid covers alpha +- 6 e^r / sqrt(2).
std::vector<std::string> validate_grid(const GridSpec& spec, const ProtocolParams& params);

}  // namespace cvtele

#endif
