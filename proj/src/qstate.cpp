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

#include "cvtele/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fft.hpp"

namespace cvtele {

namespace {

using detail::FftDirection;
using detail::fft_inplace;

constexpr double kSqrt2Pi = 2.5066282746310005024;

bool same_grid(const GridSpec& a, const GridSpec& b) {
    if (a.n != b.n) {
        return false;
    }
    const double tol = 1e-9 * std::max(a.spacing(), b.spacing());
    return std::abs(a.min - b.min) <= tol && std::abs(a.max - b.max) <= tol;
}

// Centre of the spectrum of a sampled function, recovered as the circular
// mean of its DFT power. For position-rep samples this is a momentum, for
// momentum-rep samples a position.
double spectral_center(const WaveFunction1D& psi) {
    std::vector<Complex> buf(psi.amps().begin(), psi.amps().end());
    const std::size_t n = buf.size();
    const bool pos = psi.rep() == Rep::Position;
    fft_inplace(buf, pos ? FftDirection::Forward : FftDirection::Backward);
    Complex acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += std::norm(buf[k]) * std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    }
    if (std::abs(acc) == 0.0) {
        return 0.0;
    }
    const double theta = std::arg(acc);
    // Bin k sits at phase theta = q * h for conjugate coordinate q.
    return theta / psi.grid().spacing();
}

double mass_outside(const WaveFunction1D& psi, double lo, double hi) {
    const auto w = trapezoid_weights(psi.grid());
    double out = 0.0;
    for (std::size_t i = 0; i < psi.grid().n; ++i) {
        double q = psi.grid().at(i);
        if (q < lo || q > hi) {
            out += w[i] * std::norm(psi.amps()[i]);
        }
    }
    return out;
}

WaveFunction1D with_amps(const WaveFunction1D& like, std::vector<Complex> amps) {
    return WaveFunction1D(like.grid(), std::move(amps), like.rep(), like.normalized());
}

// Multiplies by e^{i k q} where q runs over the grid.
WaveFunction1D plane_wave(const WaveFunction1D& psi, double k) {
    std::vector<Complex> out(psi.amps().begin(), psi.amps().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= std::polar(1.0, k * psi.grid().at(i));
    }
    return with_amps(psi, std::move(out));
}

// Translates along the representation's own axis on a fixed grid.
WaveFunction1D translate_in_place(const WaveFunction1D& psi, double amount) {
    const GridSpec& g = psi.grid();
    const double total = psi.norm_squared();
    const double leaving = amount > 0 ? mass_outside(psi, -INFINITY, g.max - amount)
                                      : mass_outside(psi, g.min - amount, INFINITY);
    if (leaving > 1e-6 * total) {
        throw GridError("displace: shift pushes significant mass off the grid");
    }
    const double c = spectral_center(psi);
    if (psi.rep() == Rep::Position) {
        // psi(x - s) <-> e^{-i s y} psi~(y)
        auto mom = to_momentum(psi, c);
        auto shifted = plane_wave(mom, -amount);
        auto back = to_position(shifted, g.center());
        return WaveFunction1D(g, std::vector<Complex>(back.amps().begin(), back.amps().end()), Rep::Position,
                              psi.normalized());
    }
    // psi~(y - s) <-> e^{i s x} psi(x)
    auto pos = to_position(psi, c);
    auto shifted = plane_wave(pos, amount);
    auto back = to_momentum(shifted, g.center());
    return WaveFunction1D(g, std::vector<Complex>(back.amps().begin(), back.amps().end()), Rep::Momentum,
                          psi.normalized());
}

}  // namespace

WaveFunction1D::WaveFunction1D(GridSpec grid, std::vector<Complex> amps, Rep rep, bool normalized)
    : grid_(grid), amps_(std::move(amps)), rep_(rep), normalized_(normalized) {
    grid_.validate();
    if (amps_.size() != grid_.n) {
        throw GridError("wavefunction: amplitude count does not match grid");
    }
    if (normalized_ && std::abs(norm_squared() - 1.0) > kNormTolerance) {
        throw DomainError("wavefunction: flagged normalized but norm deviates from 1");
    }
}

double WaveFunction1D::norm_squared() const {
    const double h = grid_.spacing();
    double acc = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        double w = (i == 0 || i + 1 == amps_.size()) ? 0.5 * h : h;
        acc += w * std::norm(amps_[i]);
    }
    return acc;
}

std::vector<double> trapezoid_weights(const GridSpec& grid) {
    std::vector<double> w(grid.n, grid.spacing());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

WaveFunction1D squeezed_state(const GridSpec& grid, double r, double center) {
    grid.validate();
    std::vector<Complex> amps(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        amps[i] = squeezed_amplitude(grid.at(i) - center, r);
    }
    WaveFunction1D raw(grid, amps, Rep::Position, false);
    if (std::abs(raw.norm_squared() - 1.0) > kNormTolerance) {
        throw GridError("squeezed_state: grid too narrow or too coarse for the state");
    }
    return WaveFunction1D(grid, std::move(amps), Rep::Position);
}

WaveFunction1D displace(const WaveFunction1D& psi, Axis axis, double amount) {
    if (amount == 0.0) {
        return psi;
    }
    const bool own_axis = (axis == Axis::X) == (psi.rep() == Rep::Position);
    if (!own_axis) {
        // y-shift in position rep: e^{i s x}; x-shift in momentum rep: e^{-i s y}.
        return plane_wave(psi, axis == Axis::Y ? amount : -amount);
    }
    return translate_in_place(psi, amount);
}

WaveFunction1D translate_grid(const WaveFunction1D& psi, double amount) {
    return WaveFunction1D(psi.grid().translated(amount), std::vector<Complex>(psi.amps().begin(), psi.amps().end()),
                          psi.rep(), psi.normalized());
}

WaveFunction1D cubic_phase(const WaveFunction1D& psi, double gamma) {
    if (gamma == 0.0) {
        return psi;
    }
    if (psi.rep() == Rep::Position) {
        auto mom = to_momentum(psi, spectral_center(psi));
        auto out = to_position(cubic_phase(mom, gamma), psi.grid().center());
        return WaveFunction1D(psi.grid(), std::vector<Complex>(out.amps().begin(), out.amps().end()),
                              Rep::Position, psi.normalized());
    }
    const GridSpec& g = psi.grid();
    const double ymax = std::max(std::abs(g.min), std::abs(g.max));
    if (g.spacing() * 3.0 * std::abs(gamma) * ymax * ymax >= kPi) {
        throw GridError("cubic_phase: undersampled phase");
    }
    std::vector<Complex> out(psi.amps().begin(), psi.amps().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = g.at(i);
        out[i] *= std::polar(1.0, -gamma * y * y * y);
    }
    return with_amps(psi, std::move(out));
}

GridSpec conjugate_grid(const GridSpec& grid, double center) {
    const double h = 2.0 * kPi / (static_cast<double>(grid.n) * grid.spacing());
    return GridSpec::centered(center, h, grid.n);
}

WaveFunction1D to_momentum(const WaveFunction1D& psi, double center) {
    if (psi.rep() != Rep::Position) {
        throw GridError("to_momentum: state is already in momentum representation");
    }
    const GridSpec& xg = psi.grid();
    const GridSpec yg = conjugate_grid(xg, center);
    const std::size_t n = xg.n;
    const double h = xg.spacing();
    const double x0 = xg.min;
    const double y0 = yg.min;
    std::vector<Complex> buf(n);
    for (std::size_t j = 0; j < n; ++j) {
        buf[j] = psi.amps()[j] * std::polar(1.0, -static_cast<double>(j) * h * y0);
    }
    fft_inplace(buf, FftDirection::Forward);
    const double scale = h / kSqrt2Pi;
    for (std::size_t k = 0; k < n; ++k) {
        buf[k] *= scale * std::polar(1.0, -x0 * yg.at(k));
    }
    return WaveFunction1D(yg, std::move(buf), Rep::Momentum, psi.normalized());
}

WaveFunction1D to_position(const WaveFunction1D& psi, double center) {
    if (psi.rep() != Rep::Momentum) {
        throw GridError("to_position: state is already in position representation");
    }
    const GridSpec& yg = psi.grid();
    const GridSpec xg = conjugate_grid(yg, center);
    const std::size_t n = yg.n;
    const double dy = yg.spacing();
    const double x0 = xg.min;
    const double y0 = yg.min;
    std::vector<Complex> buf(n);
    for (std::size_t k = 0; k < n; ++k) {
        buf[k] = psi.amps()[k] * std::polar(1.0, x0 * static_cast<double>(k) * dy);
    }
    fft_inplace(buf, FftDirection::Backward);
    const double scale = dy / kSqrt2Pi;
    for (std::size_t j = 0; j < n; ++j) {
        buf[j] *= scale * std::polar(1.0, xg.at(j) * y0);
    }
    return WaveFunction1D(xg, std::move(buf), Rep::Position, psi.normalized());
}

Complex overlap(const WaveFunction1D& a, const WaveFunction1D& b) {
    if (a.rep() != b.rep() || !same_grid(a.grid(), b.grid())) {
        throw GridError("overlap: states live on different grids or representations");
    }
    const auto w = trapezoid_weights(a.grid());
    Complex acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i] * std::conj(a.amps()[i]) * b.amps()[i];
    }
    return acc;
}

Moments1D quadrature_moments(const WaveFunction1D& psi) {
    if (!psi.normalized()) {
        throw DomainError("quadrature_moments: state is not normalized");
    }
    const auto w = trapezoid_weights(psi.grid());
    double n0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double p = w[i] * std::norm(psi.amps()[i]);
        n0 += p;
        s1 += p * psi.grid().at(i);
    }
    const double mean = s1 / n0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double d = psi.grid().at(i) - mean;
        s2 += w[i] * std::norm(psi.amps()[i]) * d * d;
    }
    return {mean, s2 / n0};
}

WaveFunction1D normalize(const WaveFunction1D& psi) {
    const double nrm = psi.norm_squared();
    if (!(nrm > 0.0)) {
        throw DomainError("normalize: zero state");
    }
    const double s = 1.0 / std::sqrt(nrm);
    std::vector<Complex> out(psi.amps().begin(), psi.amps().end());
    for (auto& a : out) {
        a *= s;
    }
    return WaveFunction1D(psi.grid(), std::move(out), psi.rep(), true);
}

WaveFunction1D gaussian_convolve(const WaveFunction1D& psi, double g, double r, double shift) {
    if (psi.rep() != Rep::Position) {
        throw GridError("gaussian_convolve: state must be in position representation");
    }
    if (g == 0.0) {
        throw DomainError("gaussian_convolve: kernel scale must be nonzero");
    }
    const double kernel_width = 8.0 / (std::abs(g) * std::exp(r));
    if (kernel_width > psi.grid().width()) {
        throw GridError("gaussian_convolve: kernel wider than grid");
    }
    auto mom = to_momentum(psi, spectral_center(psi));
    std::vector<Complex> spec(mom.amps().begin(), mom.amps().end());
    // K(u) = psi_s(g u - shift; r) has spectrum (1/|g|) e^{-i shift y / g} psi_s(y / g; -r).
    const double pref = kSqrt2Pi / std::abs(g);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double y = mom.grid().at(k);
        spec[k] *= pref * squeezed_amplitude(y / g, -r) * std::polar(1.0, -shift * y / g);
    }
    WaveFunction1D conv(mom.grid(), std::move(spec), Rep::Momentum, false);
    auto out = to_position(conv, psi.grid().center());
    return WaveFunction1D(psi.grid(), std::vector<Complex>(out.amps().begin(), out.amps().end()), Rep::Position,
                          false);
}

void write_csv(std::ostream& out, const WaveFunction1D& psi) {
    out << "q,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < psi.grid().n; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", psi.grid().at(i), psi.amps()[i].real(),
                      psi.amps()[i].imag());
        out << buf;
    }
}

WaveFunction1D read_csv(std::istream& in, Rep rep) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("q,re,im", 0) != 0) {
        throw GridError("read_csv: missing 'q,re,im' header");
    }
    std::vector<double> qs;
    std::vector<Complex> amps;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        double q, re, im;
        char c1, c2;
        if (!(row >> q >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
            throw GridError("read_csv: malformed row '" + line + "'");
        }
        qs.push_back(q);
        amps.emplace_back(re, im);
    }
    if (qs.size() < 2) {
        throw GridError("read_csv: need at least two rows");
    }
    GridSpec grid{qs.front(), qs.back(), qs.size()};
    const double h = grid.spacing();
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (std::abs(qs[i] - grid.at(i)) > 1e-6 * h) {
            throw GridError("read_csv: abscissae are not uniformly spaced");
        }
    }
    WaveFunction1D psi(grid, std::move(amps), rep, false);
    const bool unit = std::abs(psi.norm_squared() - 1.0) <= 1e-6;
    return unit ? normalize(psi) : psi;
}

}  // namespace cvtele
