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

#include "cvtele/heisenberg.hpp"

#include <cmath>
#include <random>
#include <variant>
#include <vector>

#include "parallel.hpp"

namespace cvtele::heisenberg {

double error_x(double g, double r) {
    if (g == 0.0 || !std::isfinite(g)) {
        throw DomainError("error_x: CZ weight must be nonzero");
    }
    return std::exp(-2.0 * r) * Conventions::vacuum_quadrature_variance / (g * g);
}

double error_y_exact(double g, double gamma, double y1m, double r, double var_x_in) {
    if (!(y1m > 0.0)) {
        throw DomainError("error_y_exact: measured y1m must be > 0");
    }
    if (!(gamma > 0.0) || !(g > 0.0)) {
        throw DomainError("error_y_exact: gamma and g must be > 0");
    }
    const double vac = std::exp(-2.0 * r) * Conventions::vacuum_quadrature_variance;
    return (g * var_x_in + vac / g + g * vac) / (12.0 * gamma * y1m);
}

double error_y_estimate(double gamma, double alpha, double var_x_in) {
    if (!(gamma > 0.0) || !(alpha > 0.0)) {
        throw DomainError("error_y_estimate: gamma and alpha must be > 0");
    }
    return var_x_in / (36.0 * gamma * gamma * alpha * alpha);
}

double original_scheme_error(double r) {
    if (!(r >= 0.0)) {
        throw DomainError("original_scheme_error: r must be >= 0");
    }
    return 2.0 * std::exp(-2.0 * r) * Conventions::vacuum_quadrature_variance;
}

double balanced_weight(double gamma, double alpha, double r) {
    if (!(gamma > 0.0) || !(alpha > 0.0)) {
        throw DomainError("balanced_weight: gamma and alpha must be > 0");
    }
    return 6.0 * gamma * alpha * std::exp(-r);
}

double crossover_alpha(double gamma, double r, double var_x_in) {
    if (!(gamma > 0.0)) {
        throw DomainError("crossover_alpha: gamma must be > 0");
    }
    return std::sqrt(var_x_in / (36.0 * gamma * gamma * original_scheme_error(r)));
}

double mean_y1(double g, double gamma, double alpha) { return 3.0 * g * gamma * alpha * alpha; }

double mean_y1_exact(double g, double gamma, double alpha, double r) {
    return 3.0 * g * gamma * (alpha * alpha + 0.5 * std::exp(2.0 * r));
}

double stddev_y1(double g, double gamma, double alpha, double r, double var_x_in) {
    const double s2 = 0.5 * std::exp(2.0 * r);   // Var(y_s2)
    const double n2 = 0.5 * std::exp(-2.0 * r);  // Var(x_s2) = Var(y_s1)
    // Var((alpha + y)^2) for y ~ N(0, s2) is 4 alpha^2 s2 + 2 s2^2.
    const double cubic = 9.0 * gamma * gamma * (4.0 * alpha * alpha * s2 + 2.0 * s2 * s2);
    return std::sqrt(n2 + g * g * (n2 + cubic + var_x_in));
}

double stddev_yin(double g, double r, double var_y_in) {
    return std::sqrt(var_y_in + g * g * 0.5 * std::exp(2.0 * r));
}

double pulse_energy(const EnergyParams& p) {
    p.validate();
    return kPlanck * kSpeedOfLight * p.alpha * p.alpha / (2.0 * p.wavelength * p.tau);
}

ErrorBudget error_budget(const ProtocolParams& params) {
    params.validate_teleport();
    ErrorBudget b;
    b.err_x = error_x(params.g(), params.r);
    b.err_y = error_y_estimate(params.gamma, params.alpha, params.input_state.variance_x());
    b.baseline = original_scheme_error(params.r);
    return b;
}

namespace {

// Streaming mean/variance with pairwise merge (Chan et al.).
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double v) {
        count += 1.0;
        double d = v - mean;
        mean += d / count;
        m2 += d * (v - mean);
    }
    void merge(const Moments& o) {
        if (o.count == 0.0) {
            return;
        }
        double total = count + o.count;
        double d = o.mean - mean;
        mean += d * o.count / total;
        m2 += o.m2 + d * d * count * o.count / total;
        count = total;
    }
    double variance() const { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
};

struct Shard {
    Moments ex, ey, y1m;
    double cond_sum = 0.0;
    std::size_t clipped = 0;
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::size_t kShards = 64;

}  // namespace

McReport monte_carlo(const ProtocolParams& params, std::size_t n, std::uint64_t seed, unsigned jobs) {
    params.validate_teleport();
    if (n < 1) {
        throw DomainError("monte_carlo: need at least one sample");
    }
    if (std::holds_alternative<input::Custom>(params.input_state.kind())) {
        throw DomainError("monte_carlo: only Gaussian input states can be sampled");
    }
    const double g1 = params.g1;
    const double g2 = params.g2;
    const double g = params.g();
    const double gamma = params.gamma;
    const double alpha = params.alpha;
    const double er = std::exp(params.r);
    const double mx = params.input_state.mean_x();
    const double my = params.input_state.mean_y();
    const double sx = std::sqrt(params.input_state.variance_x());
    const double sy = std::sqrt(params.input_state.variance_y());
    const double var_x_in = params.input_state.variance_x();
    const double sv = std::sqrt(Conventions::vacuum_quadrature_variance);

    std::vector<Shard> shards(kShards);
    detail::parallel_for(kShards, jobs, [&](std::size_t s) {
        const std::size_t begin = n * s / kShards;
        const std::size_t end = n * (s + 1) / kShards;
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(s)));
        std::normal_distribution<double> normal(0.0, 1.0);
        Shard& out = shards[s];
        for (std::size_t i = begin; i < end; ++i) {
            const double x_in = mx + sx * normal(rng);
            const double y_in = my + sy * normal(rng);
            const double xs1 = er * sv * normal(rng);
            const double ys1 = sv * normal(rng) / er;
            const double xs2 = sv * normal(rng) / er;
            const double ys2 = er * sv * normal(rng);

            const double x2pp = xs2 + 3.0 * gamma * (alpha + ys2) * (alpha + ys2);
            const double yinm = y_in + g2 * xs1;
            const double y1m = ys1 + g1 * x2pp + g2 * x_in;
            out.y1m.push(y1m);

            // Mode-2 quadratures after the measurement, written in terms of the
            // recorded photocurrents; only the positive root is physical.
            const double arg = y1m / g1 - (g2 / g1) * x_in - ys1 / g1 - xs2;
            const double ff = y1m / (3.0 * gamma * g);
            if (arg < 0.0 || !(ff > 0.0)) {
                ++out.clipped;
                continue;
            }
            const double x3_noise = -(g2 / g1) * x_in - ys1 / g1;
            const double y3 = -(g1 / g2) * y_in + g1 * yinm / g2 + std::sqrt(arg / (3.0 * gamma));

            // Grouped so the large photocurrent terms cancel before the noise is added.
            const double x_out = x3_noise + (y1m / g1 - y1m / g);
            const double y_out = y3 + yinm - std::sqrt(ff);
            out.ex.push(x_out - x_in);
            out.ey.push(y_out - y_in);
            out.cond_sum += error_y_exact(std::abs(g), gamma, std::abs(y1m), params.r, var_x_in);
        }
    });

    Shard total;
    for (const Shard& s : shards) {
        total.ex.merge(s.ex);
        total.ey.merge(s.ey);
        total.y1m.merge(s.y1m);
        total.cond_sum += s.cond_sum;
        total.clipped += s.clipped;
    }

    McReport rep;
    rep.n_samples = n;
    rep.emp_var_x = total.ex.variance();
    rep.emp_var_y = total.ey.variance();
    rep.lin_var_x = error_x(g, params.r);
    rep.lin_var_y = alpha > 0.0 ? error_y_estimate(gamma, alpha, var_x_in) : 0.0;
    rep.rel_dev_x = std::abs(rep.emp_var_x - rep.lin_var_x) / rep.lin_var_x;
    rep.rel_dev_y = rep.lin_var_y > 0.0 ? std::abs(rep.emp_var_y - rep.lin_var_y) / rep.lin_var_y : 0.0;
    rep.clip_fraction = static_cast<double>(total.clipped) / static_cast<double>(n);
    rep.outside_linear_regime = rep.clip_fraction > 0.01;
    rep.mean_y1m = total.y1m.mean;
    rep.sem_y1m = std::sqrt(total.y1m.variance() / total.y1m.count);
    const double accepted = total.ey.count;
    rep.cond_var_y = accepted > 0.0 ? total.cond_sum / accepted : 0.0;
    rep.rel_dev_y_cond = rep.cond_var_y > 0.0 ? std::abs(rep.emp_var_y - rep.cond_var_y) / rep.cond_var_y : 0.0;
    return rep;
}

}  // namespace cvtele::heisenberg
