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

#include "cvtele/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cvtele/heisenberg.hpp"
#include "parallel.hpp"

namespace cvtele::teleport {

namespace {

WaveFunction1D on_grid(const GridSpec& grid, const WaveFunction1D& psi) {
    return WaveFunction1D(grid, std::vector<Complex>(psi.amps().begin(), psi.amps().end()), psi.rep(),
                          psi.normalized());
}

WaveFunction1D build_resource_momentum(const ProtocolParams& params, const TeleportGrids& grids) {
    params.validate();
    auto warnings = validate_grid(grids.resource, params);
    if (!warnings.empty()) {
        std::string msg = "resource grid rejected:";
        for (const auto& w : warnings) {
            msg += " " + w + ";";
        }
        throw GridError(msg);
    }
    const GridSpec xg = conjugate_grid(grids.resource, 0.0);
    auto psi = squeezed_state(xg, params.r, 0.0);
    psi = displace(psi, Axis::Y, params.alpha);
    auto mom = to_momentum(psi, grids.resource.center());
    return on_grid(grids.resource, cubic_phase(on_grid(grids.resource, mom), params.gamma));
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) {
            return false;
        }
    }
    return true;
}

// Trapezoid over a possibly nonuniform axis.
double trapz(const std::vector<double>& axis, const std::vector<double>& f) {
    double acc = 0.0;
    for (std::size_t i = 1; i < axis.size(); ++i) {
        acc += 0.5 * (axis[i] - axis[i - 1]) * (f[i] + f[i - 1]);
    }
    return acc;
}

double trapz2(const SweepResult& s, const std::vector<double>& values) {
    const std::size_t nj = s.yinm_axis.size();
    std::vector<double> marginal(s.y1m_axis.size());
    std::vector<double> row(nj);
    for (std::size_t i = 0; i < s.y1m_axis.size(); ++i) {
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(i * nj), nj, row.begin());
        marginal[i] = trapz(s.yinm_axis, row);
    }
    return trapz(s.y1m_axis, marginal);
}

}  // namespace

TeleportGrids default_grids(const ProtocolParams& params, std::size_t n_resource, std::size_t n_input) {
    TeleportGrids g;
    g.resource = suggest_resource_grid(params, n_resource);
    if (const auto* c = std::get_if<input::Custom>(&params.input_state.kind())) {
        g.input = c->grid;
        return g;
    }
    const double spread = std::sqrt(2.0 * params.input_state.variance_x());
    const double half = 8.0 * std::max(1.0, spread);
    const double c = params.input_state.mean_x();
    g.input = GridSpec{c - half, c + half, n_input};
    return g;
}

ProtocolParams default_weight(ProtocolParams params) {
    const double g = heisenberg::balanced_weight(params.gamma, params.alpha, params.r);
    params.g1 = g;
    params.g2 = -g;
    return params;
}

WaveFunction1D resource_state(const ProtocolParams& params, const TeleportGrids& grids) {
    auto mom = build_resource_momentum(params, grids);
    const double center = 3.0 * params.gamma * (params.alpha * params.alpha + 0.5 * std::exp(2.0 * params.r));
    return to_position(mom, center);
}

Teleporter::Teleporter(const ProtocolParams& params, const TeleportGrids& grids)
    : params_(params),
      grids_(grids),
      resource_(build_resource_momentum(params, grids)),
      input_(normalize(WaveFunction1D(grids.input, params.input_state.sample(grids.input), Rep::Position))) {
    params_.validate_teleport();
}

std::vector<Complex> Teleporter::resource_at(double x0, double h, std::size_t count) const {
    const GridSpec& yg = resource_.grid();
    const auto w = trapezoid_weights(yg);
    std::vector<double> re(count, 0.0), im(count, 0.0);
    for (std::size_t k = 0; k < yg.n; ++k) {
        const double y = yg.at(k);
        const Complex v = w[k] * resource_.amps()[k] * std::polar(1.0, x0 * y);
        const Complex step = std::polar(1.0, h * y);
        double zr = v.real(), zi = v.imag();
        const double sr = step.real(), si = step.imag();
        for (std::size_t j = 0; j < count; ++j) {
            re[j] += zr;
            im[j] += zi;
            const double t = zr * sr - zi * si;
            zi = zr * si + zi * sr;
            zr = t;
        }
    }
    // The quadrature is periodic in x; points past the principal period are aliases.
    const double period_half = kPi / yg.spacing();
    std::vector<Complex> out(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double x = x0 + static_cast<double>(j) * h;
        out[j] = std::abs(x) < period_half ? kInvSqrt2Pi * Complex(re[j], im[j]) : Complex(0.0);
    }
    return out;
}

ConditionedState Teleporter::conditioned_with(const MeasurementOutcome& o,
                                              std::span<const Complex> resource_window) const {
    if (!std::isfinite(o.y1m) || !std::isfinite(o.yinm)) {
        throw DomainError("conditioned_state: outcome must be finite");
    }
    const double g = params_.g();
    const double a = o.y1m / g;
    // The mode-1 projection leaves psi_s(g (x - x') - y1; r); on the grid
    // translated by a = y1 / g this is psi_s(g (x - x'); r).
    auto f = displace(input_, Axis::Y, -o.yinm);
    auto conv = gaussian_convolve(f, g, params_.r, 0.0);
    std::vector<Complex> amps(grids_.input.n);
    for (std::size_t j = 0; j < amps.size(); ++j) {
        amps[j] = kInvSqrt2Pi * resource_window[j] * conv.amps()[j];
    }
    WaveFunction1D psi(grids_.input.translated(a), std::move(amps), Rep::Position, false);
    const double weight = psi.norm_squared();
    return ConditionedState{std::move(psi), weight};
}

ConditionedState Teleporter::conditioned(const MeasurementOutcome& o) const {
    const double a = o.y1m / params_.g();
    auto window = resource_at(grids_.input.min + a, grids_.input.spacing(), grids_.input.n);
    return conditioned_with(o, window);
}

WaveFunction1D Teleporter::feed_forward(const MeasurementOutcome& o, const ConditionedState& c) const {
    const double g = params_.g();
    const double branch = o.y1m / (3.0 * params_.gamma * g);
    if (!(o.y1m > 0.0) || !(branch > 0.0)) {
        throw DomainError("output_state: y1m must be > 0 for the square-root branch");
    }
    if (!(c.weight >= kWeightFloor)) {
        throw DomainError("output_state: degenerate outcome (weight below 1e-300)");
    }
    auto psi = normalize(c.psi);
    psi = displace(psi, Axis::Y, o.yinm - std::sqrt(branch));
    return on_grid(grids_.input, translate_grid(psi, -o.y1m / g));
}

WaveFunction1D Teleporter::output(const MeasurementOutcome& o) const { return feed_forward(o, conditioned(o)); }

double Teleporter::fidelity(const MeasurementOutcome& o) const { return state_fidelity(output(o), input_); }

std::vector<Teleporter::NodeResult> Teleporter::row(double y1m, std::span<const double> yinm) const {
    const double g = params_.g();
    const double a = y1m / g;
    auto window = resource_at(grids_.input.min + a, grids_.input.spacing(), grids_.input.n);
    const bool branch_ok = y1m > 0.0 && y1m / (params_.gamma * g) > 0.0;
    std::vector<NodeResult> out(yinm.size());
    for (std::size_t j = 0; j < yinm.size(); ++j) {
        const MeasurementOutcome o{y1m, yinm[j]};
        auto c = conditioned_with(o, window);
        out[j].P = c.weight;
        if (branch_ok && c.weight >= kWeightFloor) {
            out[j].F = state_fidelity(feed_forward(o, c), input_);
        }
    }
    return out;
}

ConditionedState conditioned_state(const ProtocolParams& params, const MeasurementOutcome& outcome,
                                   const TeleportGrids& grids) {
    return Teleporter(params, grids).conditioned(outcome);
}

WaveFunction1D output_state(const ProtocolParams& params, const MeasurementOutcome& outcome,
                            const TeleportGrids& grids) {
    return Teleporter(params, grids).output(outcome);
}

double fidelity(const ProtocolParams& params, const MeasurementOutcome& outcome, const TeleportGrids& grids) {
    return Teleporter(params, grids).fidelity(outcome);
}

double state_fidelity(const WaveFunction1D& out, const WaveFunction1D& in) {
    return std::norm(overlap(out, in)) / (out.norm_squared() * in.norm_squared());
}

OutcomeLattice OutcomeLattice::uniform(double y1_min, double y1_max, std::size_t n_y1, double yin_min,
                                       double yin_max, std::size_t n_yin) {
    auto axis = [](double lo, double hi, std::size_t n) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        }
        return v;
    };
    return OutcomeLattice{axis(y1_min, y1_max, n_y1), axis(yin_min, yin_max, n_yin)};
}

OutcomeLattice OutcomeLattice::automatic(const ProtocolParams& params, std::size_t n_y1, std::size_t n_yin) {
    params.validate_teleport();
    const double g = params.g();
    const double var_x = params.input_state.variance_x();
    const double mu = heisenberg::mean_y1_exact(g, params.gamma, params.alpha, params.r) +
                      params.g2 * params.input_state.mean_x();
    const double sigma = heisenberg::stddev_y1(g, params.gamma, params.alpha, params.r, var_x);
    const double n2 = 0.5 * std::exp(-2.0 * params.r);
    const double noise = std::sqrt(n2 + g * g * (n2 + var_x));
    const double lo = std::max(mu - 4.0 * sigma, -4.0 * noise);
    const double hi = mu + 4.0 * sigma;
    const double yin_c = params.input_state.mean_y();
    const double yin_half = std::max(6.0, 5.0 * heisenberg::stddev_yin(g, params.r, params.input_state.variance_y()));
    return uniform(lo, hi, n_y1, yin_c - yin_half, yin_c + yin_half, n_yin);
}

MeasurementOutcome SweepResult::modal_outcome() const {
    const auto it = std::max_element(P.begin(), P.end());
    const std::size_t idx = static_cast<std::size_t>(it - P.begin());
    return {y1m_axis[idx / yinm_axis.size()], yinm_axis[idx % yinm_axis.size()]};
}

double SweepResult::modal_fidelity() const {
    const auto it = std::max_element(P.begin(), P.end());
    return F[static_cast<std::size_t>(it - P.begin())];
}

double SweepResult::fidelity_mass(double threshold) const {
    std::vector<double> masked(P.size());
    for (std::size_t k = 0; k < P.size(); ++k) {
        masked[k] = F[k] > threshold ? P[k] : 0.0;  // NaN compares false
    }
    return trapz2(*this, masked);
}

double SweepResult::mass_below(double t) const {
    const std::size_t nj = yinm_axis.size();
    std::vector<double> m(y1m_axis.size());
    std::vector<double> row(nj);
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::copy_n(P.begin() + static_cast<std::ptrdiff_t>(i * nj), nj, row.begin());
        m[i] = trapz(yinm_axis, row);
    }
    double acc = 0.0;
    for (std::size_t i = 1; i < m.size(); ++i) {
        const double y0 = y1m_axis[i - 1], y1 = y1m_axis[i];
        if (t <= y0) {
            break;
        }
        if (t >= y1) {
            acc += 0.5 * (y1 - y0) * (m[i] + m[i - 1]);
            continue;
        }
        const double mt = m[i - 1] + (m[i] - m[i - 1]) * (t - y0) / (y1 - y0);
        acc += 0.5 * (t - y0) * (m[i - 1] + mt);
        break;
    }
    return acc;
}

SweepResult sweep(const ProtocolParams& params, const OutcomeLattice& lattice, const TeleportGrids& grids,
                  std::span<const double> thresholds, unsigned jobs) {
    if (lattice.y1m.empty() || lattice.yinm.empty() || !strictly_increasing(lattice.y1m) ||
        !strictly_increasing(lattice.yinm)) {
        throw DomainError("sweep: lattice axes must be non-empty and strictly increasing");
    }
    const Teleporter tp(params, grids);
    SweepResult s;
    s.y1m_axis = lattice.y1m;
    s.yinm_axis = lattice.yinm;
    const std::size_t ni = lattice.y1m.size();
    const std::size_t nj = lattice.yinm.size();
    s.P.assign(ni * nj, 0.0);
    s.F.assign(ni * nj, kUndefinedFidelity);
    detail::parallel_for(ni, jobs, [&](std::size_t i) {
        auto row = tp.row(lattice.y1m[i], lattice.yinm);
        for (std::size_t j = 0; j < nj; ++j) {
            s.P[i * nj + j] = row[j].P;
            s.F[i * nj + j] = row[j].F;
        }
    });
    for (std::size_t k = 0; k < s.P.size(); ++k) {
        if (!(s.P[k] >= 0.0)) {
            throw std::logic_error("sweep: negative probability density");
        }
        if (std::isnan(s.F[k])) {
            continue;
        }
        if (s.F[k] < 0.0 || s.F[k] > 1.0 + 1e-9) {
            throw std::logic_error("sweep: fidelity outside [0, 1]");
        }
        s.F[k] = std::min(s.F[k], 1.0);
    }
    s.total_probability = trapz2(s, s.P);
    for (double t : thresholds) {
        s.postselect_stats[t] = s.mass_below(t);
    }
    return s;
}

}  // namespace cvtele::teleport
