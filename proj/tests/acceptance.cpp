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


// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "cvtele/cli.hpp"
#include "cvtele/heisenberg.hpp"
#include "cvtele/oracle.hpp"
#include "cvtele/qstate.hpp"
#include "cvtele/serialize.hpp"
#include "cvtele/teleport.hpp"

using namespace cvtele;

namespace {

int g_failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    g_failures += ok ? 0 : 1;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct PresetSweep {
    RunConfig config;
    teleport::TeleportGrids grids;
    teleport::SweepResult result;
    double seconds = 0.0;
};

PresetSweep run_preset(const std::string& name) {
    PresetSweep s;
    s.config = load_config(std::string(CVTELE_PRESETS_DIR) + "/" + name + ".json");
    s.grids = s.config.grids.build(s.config.params);
    const auto t0 = std::chrono::steady_clock::now();
    s.result = teleport::sweep(s.config.params, s.config.lattice.build(s.config.params), s.grids, s.config.thresholds);
    s.seconds = seconds_since(t0);
    return s;
}

bool sweep_invariants(const teleport::SweepResult& s) {
    for (double p : s.P) {
        if (!(p >= 0.0)) return false;
    }
    for (double f : s.F) {
        if (!std::isnan(f) && !(f >= 0.0 && f <= 1.0)) return false;
    }
    return true;
}

void criterion_crossover() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = cli::errors_table(ErrorsSpec{});
    std::size_t cross = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i - 1].err_y_estimate > rows[i].baseline && rows[i].err_y_estimate <= rows[i].baseline) {
            cross = i;
        }
    }
    const double r = squeezing_db_to_r(-15.0);
    const double a_star = heisenberg::crossover_alpha(0.1, r, 0.5);
    const double closed = std::sqrt(0.5) / (6.0 * 0.1 * std::exp(-r));
    const double identity = std::abs(heisenberg::error_y_estimate(0.1, a_star, 0.5) - heisenberg::original_scheme_error(r));
    const double dt = seconds_since(t0);
    const bool ok = cross > 0 && rows[cross - 1].alpha < a_star && a_star <= rows[cross].alpha && a_star > 6.5 &&
                    a_star < 7.0 && std::abs(a_star - closed) < 1e-12 && identity < 1e-12 && dt < 1.0;
    std::ostringstream d;
    d << "alpha*=" << fmt("%.6f", a_star) << " crossing rows " << (cross ? rows[cross - 1].alpha : 0.0) << " -> "
      << (cross ? rows[cross].alpha : 0.0) << ", baseline " << fmt("%.4e", rows[0].baseline) << ", identity residual "
      << fmt("%.1e", identity) << ", " << fmt("%.3f", dt) << " s";
    report(1, "crossover", ok, d.str());
}

void criterion_energy() {
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream out, err;
    const int code = cli::cmd_energy(EnergyParams{430e-9, 0.01, 20.0}, out, err);
    const double joules = std::stod(out.str());
    const double dt = seconds_since(t0);
    const bool ok = code == 0 && joules >= 9.0e-15 && joules <= 9.5e-15 && dt < 1.0;
    report(2, "energy", ok, "cmd_energy -> " + out.str().substr(0, out.str().size() - 1) + ", " + fmt("%.3f", dt) + " s");
}

void criterion_alpha20(const PresetSweep& s) {
    const auto mode = s.result.modal_outcome();
    const double f = s.result.modal_fidelity();
    const auto fine = teleport::default_grids(s.config.params, 2 * s.grids.resource.n, 2 * s.grids.input.n);
    const double f_fine = teleport::fidelity(s.config.params, mode, fine);
    const bool ok = f > 0.998 && std::abs(f_fine - f) < 1e-4;
    std::ostringstream d;
    d << "mode (" << fmt("%.2f", mode.y1m) << ", " << fmt("%.3f", mode.yinm) << ") F=" << fmt("%.6f", f)
      << ", doubled grids dF=" << fmt("%.1e", std::abs(f_fine - f)) << ", 64x64 sweep " << fmt("%.1f", s.seconds)
      << " s";
    report(3, "alpha=20 fidelity", ok, d.str());
}

void criterion_alpha10(const PresetSweep& s) {
    const auto& r = s.result;
    const double p_max = *std::max_element(r.P.begin(), r.P.end());
    double f_min = 1.0, y1_at = 0.0, yin_at = 0.0;
    for (std::size_t i = 0; i < r.y1m_axis.size(); ++i) {
        if (r.y1m_axis[i] < 5.0) continue;
        for (std::size_t j = 0; j < r.yinm_axis.size(); ++j) {
            if (r.p_at(i, j) < 1e-3 * p_max) continue;
            if (r.f_at(i, j) < f_min) {
                f_min = r.f_at(i, j);
                y1_at = r.y1m_axis[i];
                yin_at = r.yinm_axis[j];
            }
        }
    }
    const double below = r.postselect_stats.at(5.0);
    const bool f_ok = f_min > 0.99;
    const bool mass_ok = std::abs(below - 0.10) <= 0.03;
    std::ostringstream d;
    d << "min F over y1m>=5 nodes with P>=1e-3 Pmax = " << fmt("%.4f", f_min) << " at (" << fmt("%.2f", y1_at)
      << ", " << fmt("%.2f", yin_at) << ") [" << (f_ok ? "ok" : "needs > 0.99") << "]; mass(y1m<5) = "
      << fmt("%.4f", below) << " [" << (mass_ok ? "ok" : "needs 0.10 +- 0.03") << "]";
    report(4, "alpha=10 postselection", f_ok && mass_ok, d.str());
}

void criterion_alpha6(const PresetSweep& s6, const PresetSweep& s10) {
    const double m6 = s6.result.fidelity_mass(0.99);
    const double m10 = s10.result.fidelity_mass(0.99);
    const bool ok = m6 * 10.0 <= m10;
    std::ostringstream d;
    d << "mass(F>0.99): alpha=6 " << fmt("%.4f", m6) << ", alpha=10 " << fmt("%.4f", m10) << ", ratio "
      << fmt("%.2f", m10 / m6) << " (needs >= 10)";
    report(5, "alpha=6 degradation", ok, d.str());
}

void criterion_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = load_config(std::string(CVTELE_PRESETS_DIR) + "/validate.json");
    const auto& p = cfg.params;
    const auto& o = *cfg.oracle;
    const auto [lo, hi] = std::minmax_element(o.y1m.begin(), o.y1m.end());
    const auto psi3 = oracle::build_entangled(p, oracle::validation_grids(p, *lo, *hi, o.n_input, o.n_mode1, o.n_mode2));
    const teleport::Teleporter tele(p, cfg.grids.build(p));
    double worst_f = 0.0, worst_w = 0.0;
    for (double y1 : o.y1m) {
        for (double yin : o.yinm) {
            const teleport::MeasurementOutcome m{y1, yin};
            worst_f = std::max(worst_f, std::abs(oracle::oracle_fidelity(psi3, p, m) - tele.fidelity(m)));
            const double w = oracle::project_homodyne(psi3, m, p.g1, p.g2, p.r).weight;
            worst_w = std::max(worst_w, std::abs(w / tele.conditioned(m).weight - 1.0));
        }
    }
    const bool ok = worst_f < 1e-3 && worst_w < 1e-2;
    std::ostringstream d;
    d << "r=" << p.r << " alpha=" << p.alpha << ", 5x5 lattice, max |dF|=" << fmt("%.1e", worst_f)
      << ", max |dP/P|=" << fmt("%.1e", worst_w) << ", " << fmt("%.1f", seconds_since(t0)) << " s";
    report(6, "oracle equivalence", ok, d.str());
}

void criterion_monte_carlo() {
    const double r = squeezing_db_to_r(-15.0);
    const auto p20 = teleport::default_weight(teleport_params(r, 0.1, 20.0, 1.0));
    const auto m = heisenberg::monte_carlo(p20, 1000000, 20240101);
    const bool ok = m.rel_dev_x < 0.02 && m.rel_dev_y < 0.10 && m.clip_fraction == 0.0;
    const auto m6 = heisenberg::monte_carlo(teleport::default_weight(teleport_params(r, 0.1, 6.0, 1.0)), 1000000,
                                            20240101);
    std::ostringstream d;
    d << "alpha=20: rel_dev_x=" << fmt("%.4f", m.rel_dev_x) << " rel_dev_y=" << fmt("%.4f", m.rel_dev_y)
      << " (emp " << fmt("%.4e", m.emp_var_y) << " vs estimate " << fmt("%.4e", m.lin_var_y)
      << ") clip=" << m.clip_fraction << "; alpha=6 (informational): rel_dev_y=" << fmt("%.3f", m6.rel_dev_y)
      << " clip=" << fmt("%.4f", m6.clip_fraction);
    report(7, "Monte-Carlo consistency", ok, d.str());
}

void criterion_invariants(const std::vector<const PresetSweep*>& sweeps) {
    const GridSpec grid{-10.0, 10.0, 128};
    std::mt19937_64 rng(99);
    std::normal_distribution<double> n(0.0, 1.0);
    double worst_norm = 0.0, worst_trip = 0.0;
    for (int t = 0; t < 8; ++t) {
        std::vector<Complex> amps(grid.n);
        const double x0 = n(rng), y0 = n(rng), rr = 0.3 * n(rng);
        for (std::size_t i = 0; i < grid.n; ++i) {
            amps[i] = squeezed_amplitude(grid.at(i) - x0, rr) *
                      std::polar(1.0, y0 * grid.at(i) + 0.1 * grid.at(i) * grid.at(i));
        }
        const auto psi = normalize(WaveFunction1D(grid, amps, Rep::Position, false));
        const auto mom = to_momentum(psi, y0);
        const auto back = to_position(mom, psi.grid().center());
        for (const auto& w : {mom, displace(psi, Axis::X, 0.37), displace(psi, Axis::Y, 1.3),
                              cubic_phase(mom, 0.005), displace(mom, Axis::Y, -0.4)}) {
            worst_norm = std::max(worst_norm, std::abs(w.norm_squared() - 1.0));
        }
        for (std::size_t i = 0; i < grid.n; ++i) {
            worst_trip = std::max(worst_trip, std::abs(back.amps()[i] - psi.amps()[i]));
        }
    }
    bool sweeps_ok = true;
    std::ostringstream totals;
    for (const auto* s : sweeps) {
        sweeps_ok = sweeps_ok && sweep_invariants(s->result) && s->result.total_probability >= 0.97 &&
                    s->result.total_probability <= 1.01;
        totals << ' ' << s->config.name << '=' << fmt("%.4f", s->result.total_probability);
    }
    const bool ok = worst_norm < 1e-10 && worst_trip < 1e-10 && sweeps_ok;
    std::ostringstream d;
    d << "max norm drift " << fmt("%.1e", worst_norm) << ", round trip " << fmt("%.1e", worst_trip)
      << ", P>=0 and F in [0,1] " << (sweeps_ok ? "hold" : "VIOLATED") << ", total probability" << totals.str();
    report(8, "engine invariants", ok, d.str());
}

}  // namespace

int main() {
    try {
        criterion_crossover();
        criterion_energy();
        const auto s20 = run_preset("fig6-alpha20");
        criterion_alpha20(s20);
        const auto s10 = run_preset("fig5-alpha10");
        criterion_alpha10(s10);
        const auto s6 = run_preset("fig5-alpha6");
        criterion_alpha6(s6, s10);
        criterion_oracle();
        criterion_monte_carlo();
        criterion_invariants({&s20, &s10, &s6});
    } catch (const std::exception& e) {
        std::printf("FAIL aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%d of 8 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
