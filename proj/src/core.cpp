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

#include "cvtele/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"

namespace cvtele {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sinc(double t) {
    if (std::abs(t) < 1e-12) {
        return 1.0;
    }
    return std::sin(kPi * t) / (kPi * t);
}

// Trapezoid-rule moments of a sampled custom state.
struct SampleMoments {
    double norm = 0, mean_x = 0, var_x = 0, mean_y = 0, var_y = 0;
};

SampleMoments sample_moments(const input::Custom& c) {
    const std::size_t n = c.amps.size();
    const double h = c.grid.spacing();
    // Spectral derivative of the band-limited samples.
    std::vector<Complex> d(c.amps);
    detail::fft_inplace(d, detail::FftDirection::Forward);
    const double dk = 2.0 * kPi / (static_cast<double>(n) * h);
    for (std::size_t m = 0; m < n; ++m) {
        const double k = m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
        d[m] *= (2 * m == n) ? Complex(0.0) : Complex(0.0, k * dk / static_cast<double>(n));
    }
    detail::fft_inplace(d, detail::FftDirection::Backward);

    SampleMoments m;
    double sx = 0, sxx = 0, sy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
        double x = c.grid.at(i);
        double p = std::norm(c.amps[i]);
        m.norm += w * p;
        sx += w * x * p;
        sxx += w * x * x * p;
        sy += w * (std::conj(c.amps[i]) * Complex(0, -1) * d[i]).real();
        syy += w * std::norm(d[i]);
    }
    m.mean_x = sx / m.norm;
    m.var_x = sxx / m.norm - m.mean_x * m.mean_x;
    m.mean_y = sy / m.norm;
    m.var_y = syy / m.norm - m.mean_y * m.mean_y;
    return m;
}

}  // namespace

void GridSpec::validate() const {
    if (!(std::isfinite(min) && std::isfinite(max)) || !(max > min)) {
        throw GridError("grid requires max > min");
    }
    if (n < 16) {
        throw GridError("grid requires at least 16 points");
    }
}

GridSpec GridSpec::centered(double c, double h, std::size_t n) {
    double half = 0.5 * h * static_cast<double>(n - 1);
    return GridSpec{c - half, c + half, n};
}

GridSpec GridSpec::translated(double amount) const { return GridSpec{min + amount, max + amount, n}; }

std::string InputState::name() const {
    return std::visit(overloaded{
                          [](const input::Vacuum&) { return std::string("vacuum"); },
                          [](const input::Squeezed&) { return std::string("squeezed"); },
                          [](const input::Displaced&) { return std::string("displaced"); },
                          [](const input::Custom&) { return std::string("custom"); },
                      },
                      kind_);
}

Complex InputState::amplitude(double x) const {
    return std::visit(overloaded{
                          [&](const input::Vacuum&) { return Complex(squeezed_amplitude(x, 0.0)); },
                          [&](const input::Squeezed& s) { return Complex(squeezed_amplitude(x, s.r_in)); },
                          [&](const input::Displaced& d) {
                              return squeezed_amplitude(x - d.x0, 0.0) * std::polar(1.0, d.y0 * x);
                          },
                          [&](const input::Custom& c) {
                              const double h = c.grid.spacing();
                              if (x < c.grid.min - h || x > c.grid.max + h) {
                                  return Complex(0.0);
                              }
                              Complex acc = 0.0;
                              for (std::size_t i = 0; i < c.amps.size(); ++i) {
                                  acc += c.amps[i] * sinc((x - c.grid.at(i)) / h);
                              }
                              return acc;
                          },
                      },
                      kind_);
}

std::vector<Complex> InputState::sample(const GridSpec& grid) const {
    if (const auto* c = std::get_if<input::Custom>(&kind_); c != nullptr && c->grid == grid) {
        return c->amps;
    }
    std::vector<Complex> out(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        out[i] = amplitude(grid.at(i));
    }
    return out;
}

double InputState::mean_x() const {
    return std::visit(overloaded{
                          [](const input::Vacuum&) { return 0.0; },
                          [](const input::Squeezed&) { return 0.0; },
                          [](const input::Displaced& d) { return d.x0; },
                          [](const input::Custom& c) { return sample_moments(c).mean_x; },
                      },
                      kind_);
}

double InputState::mean_y() const {
    return std::visit(overloaded{
                          [](const input::Vacuum&) { return 0.0; },
                          [](const input::Squeezed&) { return 0.0; },
                          [](const input::Displaced& d) { return d.y0; },
                          [](const input::Custom& c) { return sample_moments(c).mean_y; },
                      },
                      kind_);
}

double InputState::variance_x() const {
    return std::visit(overloaded{
                          [](const input::Vacuum&) { return 0.5; },
                          [](const input::Squeezed& s) { return 0.5 * std::exp(-2.0 * s.r_in); },
                          [](const input::Displaced&) { return 0.5; },
                          [](const input::Custom& c) { return sample_moments(c).var_x; },
                      },
                      kind_);
}

double InputState::variance_y() const {
    return std::visit(overloaded{
                          [](const input::Vacuum&) { return 0.5; },
                          [](const input::Squeezed& s) { return 0.5 * std::exp(2.0 * s.r_in); },
                          [](const input::Displaced&) { return 0.5; },
                          [](const input::Custom& c) { return sample_moments(c).var_y; },
                      },
                      kind_);
}

void ProtocolParams::validate() const {
    if (!std::isfinite(r) || r < 0.0) {
        throw DomainError("squeezing r must be >= 0");
    }
    if (!std::isfinite(gamma) || !(gamma > 0.0)) {
        throw DomainError("cubic coefficient gamma must be > 0");
    }
    if (!std::isfinite(alpha)) {
        throw DomainError("displacement alpha must be finite");
    }
    if (!std::isfinite(g1) || !std::isfinite(g2) || g1 == 0.0 || g2 == 0.0) {
        throw DomainError("CZ weights g1, g2 must be nonzero");
    }
    if (const auto* c = std::get_if<input::Custom>(&input_state.kind())) {
        c->grid.validate();
        if (c->amps.size() != c->grid.n) {
            throw DomainError("custom input: amplitude count does not match grid");
        }
    }
}

void ProtocolParams::validate_teleport() const {
    validate();
    if (g1 != -g2) {
        throw DomainError("teleportation requires g1 = -g2");
    }
}

ProtocolParams teleport_params(double r, double gamma, double alpha, double g, InputState input) {
    ProtocolParams p;
    p.r = r;
    p.gamma = gamma;
    p.alpha = alpha;
    p.g1 = g;
    p.g2 = -g;
    p.input_state = std::move(input);
    return p;
}

void EnergyParams::validate() const {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw DomainError("wavelength must be > 0");
    }
    if (!(tau > 0.0 && tau <= 1.0)) {
        throw DomainError("transmittance tau must lie in (0, 1]");
    }
    if (!std::isfinite(alpha)) {
        throw DomainError("alpha must be finite");
    }
}

double squeezing_db_to_r(double db) {
    if (!(db <= 0.0)) {
        throw DomainError("squeezing in dB must be <= 0");
    }
    return -db * std::log(10.0) / 20.0;
}

double r_to_squeezing_db(double r) {
    if (!(r >= 0.0)) {
        throw DomainError("squeezing r must be >= 0");
    }
    return -20.0 * r / std::log(10.0);
}

double squeezed_amplitude(double x, double r) {
    const double s = std::exp(2.0 * r);
    return std::pow(s / kPi, 0.25) * std::exp(-0.5 * s * x * x);
}

GridSpec suggest_resource_grid(const ProtocolParams& params, std::size_t n) {
    const double half = 1.25 * 6.0 * std::exp(params.r) / std::sqrt(2.0);
    return GridSpec{params.alpha - half, params.alpha + half, n};
}

std::vector<std::string> validate_grid(const GridSpec& spec, const ProtocolParams& params) {
    std::vector<std::string> warnings;
    if (!(spec.max > spec.min) || spec.n < 16) {
        warnings.emplace_back("invalid grid");
        return warnings;
    }
    const double ymax = std::max(std::abs(spec.min), std::abs(spec.max));
    const double max_rate = 3.0 * params.gamma * ymax * ymax;
    if (spec.spacing() * max_rate >= kPi) {
        std::ostringstream os;
        os << "undersampled phase: spacing " << spec.spacing() << " * max|3 gamma y^2| " << max_rate
           << " >= pi";
        warnings.push_back(os.str());
    }
    const double half = 6.0 * std::exp(params.r) / std::sqrt(2.0);
    if (spec.min > params.alpha - half || spec.max < params.alpha + half) {
        std::ostringstream os;
        os << "insufficient coverage: grid [" << spec.min << ", " << spec.max << "] does not cover alpha +- "
           << half;
        warnings.push_back(os.str());
    }
    return warnings;
}

}  // namespace cvtele
