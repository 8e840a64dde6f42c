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

#include "cvtele/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "cvtele/qstate.hpp"
#include "parallel.hpp"

namespace cvtele::oracle {

namespace {

std::vector<double> weights(const GridSpec& g) {
    std::vector<double> w(g.n, g.spacing());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

}  // namespace

OracleGrids validation_grids(const ProtocolParams& params, double y1_lo, double y1_hi, std::size_t n_input,
                             std::size_t n_mode1, std::size_t n_mode2) {
    OracleGrids g;
    g.input = GridSpec{-6.0, 6.0, n_input};
    const double half1 = std::max(10.0, 4.5 * std::exp(params.r));
    g.mode1 = GridSpec{-half1, half1, n_mode1};
    const double a_c = 0.5 * (y1_lo + y1_hi) / params.g1;
    g.mode2 = GridSpec{a_c - 15.0, a_c + 15.0, n_mode2};
    g.resource_y = suggest_resource_grid(params, 4096);
    return g;
}

double WaveFunction3D::norm_squared() const {
    const auto w0 = weights(grids[0]);
    const auto w1 = weights(grids[1]);
    const auto w2 = weights(grids[2]);
    double acc = 0.0;
    for (std::size_t i = 0; i < grids[0].n; ++i) {
        for (std::size_t j = 0; j < grids[1].n; ++j) {
            for (std::size_t k = 0; k < grids[2].n; ++k) {
                acc += w0[i] * w1[j] * w2[k] * std::norm(amps[index(i, j, k)]);
            }
        }
    }
    return acc;
}

std::vector<Complex> cubic_resource_position(const ProtocolParams& params, const GridSpec& y_grid,
                                             const GridSpec& x_grid) {
    const auto wy = weights(y_grid);
    std::vector<Complex> phi(y_grid.n);
    for (std::size_t k = 0; k < y_grid.n; ++k) {
        const double y = y_grid.at(k);
        phi[k] = wy[k] * squeezed_amplitude(y - params.alpha, -params.r) *
                 std::polar(1.0, -params.gamma * y * y * y);
    }
    std::vector<Complex> out(x_grid.n);
    for (std::size_t j = 0; j < x_grid.n; ++j) {
        const double x = x_grid.at(j);
        Complex acc = 0.0;
        for (std::size_t k = 0; k < y_grid.n; ++k) {
            acc += phi[k] * std::polar(1.0, x * y_grid.at(k));
        }
        out[j] = kInvSqrt2Pi * acc;
    }
    return out;
}

WaveFunction3D build_entangled(const ProtocolParams& params, const OracleGrids& grids) {
    if (!(params.r >= 0.0) || !(params.gamma > 0.0)) {
        throw DomainError("build_entangled: need r >= 0 and gamma > 0");
    }
    for (const GridSpec* g : {&grids.input, &grids.mode1, &grids.mode2, &grids.resource_y}) {
        g->validate();
    }
    const std::size_t total = grids.input.n * grids.mode1.n * grids.mode2.n;
    if (total > kMaxTensorPoints) {
        throw DomainError("build_entangled: tensor grid exceeds 2^27 points");
    }
    WaveFunction3D psi;
    psi.grids = {grids.input, grids.mode1, grids.mode2};
    psi.amps.resize(total);

    const auto in = params.input_state.sample(grids.input);
    std::vector<double> m1(grids.mode1.n);
    for (std::size_t j = 0; j < m1.size(); ++j) {
        m1[j] = squeezed_amplitude(grids.mode1.at(j), -params.r);
    }
    const auto m2 = cubic_resource_position(params, grids.resource_y, grids.mode2);

    for (std::size_t i = 0; i < grids.input.n; ++i) {
        const double xin = grids.input.at(i);
        for (std::size_t j = 0; j < grids.mode1.n; ++j) {
            const double x1 = grids.mode1.at(j);
            const Complex base = in[i] * m1[j] * std::polar(1.0, params.g2 * xin * x1);
            for (std::size_t k = 0; k < grids.mode2.n; ++k) {
                const double x = grids.mode2.at(k);
                psi.amps[psi.index(i, j, k)] = base * m2[k] * std::polar(1.0, params.g1 * x1 * x);
            }
        }
    }
    return psi;
}

teleport::ConditionedState project_homodyne(const WaveFunction3D& psi3, const teleport::MeasurementOutcome& o,
                                            double g1, double g2, double r, unsigned jobs) {
    const GridSpec& gi = psi3.grids[0];
    const GridSpec& g1d = psi3.grids[1];
    const GridSpec& g2d = psi3.grids[2];

    // After integrating x1 the amplitude is psi_s(g1 x + g2 x_in - y1; r); its
    // Riemann sum has images every 2 pi / h1, which must stay clear of the
    // frequencies reached on the grid.
    double qmax = 0.0;
    for (double x : {g2d.min, g2d.max}) {
        for (double xin : {gi.min, gi.max}) {
            qmax = std::max(qmax, std::abs(g1 * x + g2 * xin - o.y1m));
        }
    }
    if (2.0 * kPi / g1d.spacing() - qmax < 8.0 * std::exp(-r)) {
        throw GridError("project_homodyne: mode-1 grid too coarse for this outcome");
    }

    const auto wi = weights(gi);
    const auto w1 = weights(g1d);
    std::vector<Complex> pin(gi.n), p1(g1d.n);
    for (std::size_t i = 0; i < gi.n; ++i) {
        pin[i] = wi[i] * std::polar(1.0, -gi.at(i) * o.yinm);
    }
    for (std::size_t j = 0; j < g1d.n; ++j) {
        p1[j] = w1[j] * std::polar(1.0, -g1d.at(j) * o.y1m);
    }
    const double norm = 1.0 / (2.0 * kPi);

    std::vector<Complex> out(g2d.n, 0.0);
    constexpr std::size_t kChunk = 32;
    const std::size_t chunks = (g2d.n + kChunk - 1) / kChunk;
    detail::parallel_for(chunks, jobs, [&](std::size_t c) {
        const std::size_t k0 = c * kChunk;
        const std::size_t k1 = std::min(g2d.n, k0 + kChunk);
        for (std::size_t i = 0; i < gi.n; ++i) {
            for (std::size_t j = 0; j < g1d.n; ++j) {
                const Complex wgt = pin[i] * p1[j];
                const Complex* row = &psi3.amps[psi3.index(i, j, 0)];
                for (std::size_t k = k0; k < k1; ++k) {
                    out[k] += wgt * row[k];
                }
            }
        }
    });
    for (auto& v : out) {
        v *= norm;
    }
    WaveFunction1D psi(g2d, std::move(out), Rep::Position, false);
    const double weight = psi.norm_squared();
    return teleport::ConditionedState{std::move(psi), weight};
}

double oracle_fidelity(const WaveFunction3D& psi3, const ProtocolParams& params, const teleport::MeasurementOutcome& o,
                       unsigned jobs) {
    params.validate_teleport();
    const double g = params.g();
    const double branch = o.y1m / (3.0 * params.gamma * g);
    if (!(o.y1m > 0.0) || !(branch > 0.0)) {
        throw DomainError("oracle_fidelity: y1m must be > 0");
    }
    auto c = project_homodyne(psi3, o, params.g1, params.g2, params.r, jobs);
    if (!(c.weight >= teleport::kWeightFloor)) {
        throw DomainError("oracle_fidelity: degenerate outcome");
    }
    auto out = normalize(c.psi);
    out = displace(out, Axis::Y, o.yinm - std::sqrt(branch));
    out = translate_grid(out, -o.y1m / g);
    WaveFunction1D in(out.grid(), params.input_state.sample(out.grid()), Rep::Position);
    return teleport::state_fidelity(out, in);
}

double oracle_fidelity(const ProtocolParams& params, const teleport::MeasurementOutcome& outcome,
                       const OracleGrids& grids, unsigned jobs) {
    return oracle_fidelity(build_entangled(params, grids), params, outcome, jobs);
}

}  // namespace cvtele::oracle
