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

#include "cvtele/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cvtele/heisenberg.hpp"
#include "cvtele/oracle.hpp"
#include "cvtele/teleport.hpp"

namespace cvtele::cli {

using nlohmann::json;

namespace {

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> formats_for(const RunConfig* config, const OutputOptions& opts,
                                     std::vector<std::string> fallback) {
    if (!opts.formats.empty()) {
        return opts.formats;
    }
    return config != nullptr ? config->formats : fallback;
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot write " + path.string());
    }
    body(os);
    os.flush();
    if (!os) {
        throw IoError("write failed: " + path.string());
    }
}

void stamp_json(json& j, const OutputOptions& opts) {
    if (opts.timestamp) {
        j["generated"] = timestamp_line().substr(std::string("# generated ").size());
    }
}

/// Shared exception-to-exit-code mapping of all subcommands.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const GridError& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace

std::vector<ErrorsRow> errors_table(const ErrorsSpec& spec) {
    if (!(spec.alpha_min > 0.0) || spec.steps == 0 || !(spec.alpha_max >= spec.alpha_min) ||
        (spec.steps > 1 && !(spec.alpha_max > spec.alpha_min))) {
        throw DomainError("errors: need 0 < alpha_min < alpha_max and steps >= 1");
    }
    const double r = squeezing_db_to_r(spec.squeeze_db);
    const double baseline = heisenberg::original_scheme_error(r);
    std::vector<ErrorsRow> rows(spec.steps);
    for (std::size_t i = 0; i < spec.steps; ++i) {
        const double alpha =
            spec.steps == 1 ? spec.alpha_min
                            : spec.alpha_min + (spec.alpha_max - spec.alpha_min) * static_cast<double>(i) /
                                                   static_cast<double>(spec.steps - 1);
        rows[i] = {alpha, heisenberg::error_y_estimate(spec.gamma, alpha, spec.var_x_in), baseline};
    }
    return rows;
}

std::string format_energy(double joules) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", joules);
    return buf;
}

std::string timestamp_line() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[64];
    std::strftime(buf, sizeof buf, "# generated %Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int cmd_errors(const ErrorsSpec& spec, const OutputOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto rows = errors_table(spec);
        const auto formats = formats_for(nullptr, opts, {"csv"});
        const auto emit_csv = [&](std::ostream& os) {
            if (opts.timestamp) {
                os << timestamp_line() << '\n';
            }
            os << "alpha,err_y_estimate,baseline\n";
            for (const auto& row : rows) {
                os << format_number(row.alpha) << ',' << format_number(row.err_y_estimate) << ','
                   << format_number(row.baseline) << '\n';
            }
        };
        const auto emit_json = [&](std::ostream& os) {
            json j;
            stamp_json(j, opts);
            json alpha = json::array(), err_y = json::array(), base = json::array();
            for (const auto& row : rows) {
                alpha.push_back(row.alpha);
                err_y.push_back(row.err_y_estimate);
                base.push_back(row.baseline);
            }
            j["alpha"] = alpha;
            j["err_y_estimate"] = err_y;
            j["baseline"] = base;
            j["crossover_alpha"] =
                heisenberg::crossover_alpha(spec.gamma, squeezing_db_to_r(spec.squeeze_db), spec.var_x_in);
            os << j.dump(2) << '\n';
        };
        for (const auto& f : formats) {
            const auto& emit = f == "json" ? std::function<void(std::ostream&)>(emit_json) : emit_csv;
            if (opts.out_dir) {
                write_file(*opts.out_dir / ("errors." + f), emit);
            } else {
                emit(out);
            }
        }
        return static_cast<int>(kOk);
    });
}

int cmd_energy(const EnergyParams& params, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        out << format_energy(heisenberg::pulse_energy(params)) << " J\n";
        return static_cast<int>(kOk);
    });
}

int cmd_sweep(const RunConfig& config, const OutputOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!config.has_params) {
            throw ConfigError("sweep: config has no 'params'");
        }
        const auto& params = config.params;
        params.validate_teleport();
        const auto grids = config.grids.build(params);
        const auto warnings = validate_grid(grids.resource, params);
        if (!warnings.empty()) {
            for (const auto& w : warnings) {
                err << "error: " << w << '\n';
            }
            return static_cast<int>(kFailure);
        }
        const auto lattice = config.lattice.build(params);
        const auto result = teleport::sweep(params, lattice, grids, config.thresholds, opts.jobs);

        const auto mode = result.modal_outcome();
        const double f_mode = result.modal_fidelity();
        const double hf_mass = result.fidelity_mass(config.fidelity_threshold);
        const bool low_success = !(hf_mass >= config.low_success_mass);

        json summary;
        stamp_json(summary, opts);
        summary["name"] = config.name;
        summary["params"] = to_json(params);
        summary["lattice"] = {{"n_y1", lattice.y1m.size()},
                              {"n_yin", lattice.yinm.size()},
                              {"y1m_range", {lattice.y1m.front(), lattice.y1m.back()}},
                              {"yinm_range", {lattice.yinm.front(), lattice.yinm.back()}}};
        summary["grids"] = {{"resource", to_json(grids.resource)}, {"input", to_json(grids.input)}};
        summary["modal_outcome"] = {{"y1m", mode.y1m}, {"yinm", mode.yinm}};
        summary["P_at_mode"] = *std::max_element(result.P.begin(), result.P.end());
        summary["F_at_mode"] = std::isfinite(f_mode) ? json(f_mode) : json(nullptr);
        summary["total_probability"] = result.total_probability;
        summary["postselect_stats"] = to_json(result)["postselect_stats"];
        summary["fidelity_threshold"] = config.fidelity_threshold;
        summary["high_fidelity_mass"] = hf_mass;
        summary["low_success"] = low_success;

        const auto dir = opts.out_dir.value_or(config.out_dir);
        for (const auto& f : formats_for(&config, opts, {})) {
            if (f == "csv") {
                write_file(dir / (config.name + "_sweep.csv"), [&](std::ostream& os) {
                    if (opts.timestamp) {
                        os << timestamp_line() << '\n';
                    }
                    write_sweep_csv(os, result);
                });
            } else {
                write_file(dir / (config.name + "_sweep.json"), [&](std::ostream& os) {
                    json j = to_json(result);
                    stamp_json(j, opts);
                    os << j.dump() << '\n';
                });
            }
        }
        write_file(dir / (config.name + "_summary.json"),
                   [&](std::ostream& os) { os << summary.dump(2) << '\n'; });

        out << "modal outcome: y1m=" << format_number(mode.y1m) << " yinm=" << format_number(mode.yinm) << '\n';
        out << "F_at_mode: " << format_number(f_mode) << '\n';
        out << "total_probability: " << format_number(result.total_probability) << '\n';
        for (const auto& [t, m] : result.postselect_stats) {
            out << "P(y1m < " << format_number(t) << "): " << format_number(m) << '\n';
        }
        out << "mass with F > " << format_number(config.fidelity_threshold) << ": " << format_number(hf_mass)
            << '\n';
        if (low_success) {
            out << "low success probability: high-fidelity mass below " << format_number(config.low_success_mass)
                << '\n';
        }
        return static_cast<int>(kOk);
    });
}

int cmd_validate(const RunConfig& config, const OutputOptions& opts, std::uint64_t seed, std::ostream& out,
                 std::ostream& err) {
    return guarded(err, [&] {
        if (!config.has_params) {
            throw ConfigError("validate: config has no 'params'");
        }
        int failures = 0;
        const auto report = [&](bool ok, const std::string& what) {
            out << (ok ? "PASS " : "FAIL ") << what << '\n';
            failures += ok ? 0 : 1;
        };
        const auto& params = config.params;
        params.validate_teleport();
        const auto grids = config.grids.build(params);
        const auto warnings = validate_grid(grids.resource, params);
        for (const auto& w : warnings) {
            report(false, "grid: " + w);
        }
        if (warnings.empty()) {
            report(true, "grid: resource grid resolves the cubic phase and covers the resource");
        }

        if (config.oracle && warnings.empty()) {
            const auto& o = *config.oracle;
            const auto [lo, hi] = std::minmax_element(o.y1m.begin(), o.y1m.end());
            const auto og = oracle::validation_grids(params, *lo, *hi, o.n_input, o.n_mode1, o.n_mode2);
            const auto psi3 = oracle::build_entangled(params, og);
            const teleport::Teleporter tele(params, grids);
            double worst_f = 0.0, worst_p = 0.0;
            for (double y1 : o.y1m) {
                for (double yin : o.yinm) {
                    const teleport::MeasurementOutcome m{y1, yin};
                    std::ostringstream where;
                    where << "y1m=" << format_number(y1) << " yinm=" << format_number(yin);
                    try {
                        const double f_o = oracle::oracle_fidelity(psi3, params, m, opts.jobs);
                        const double w_o =
                            oracle::project_homodyne(psi3, m, params.g1, params.g2, params.r, opts.jobs).weight;
                        const double f_p = tele.fidelity(m);
                        const double w_p = tele.conditioned(m).weight;
                        const double df = std::abs(f_o - f_p);
                        const double dw = std::abs(w_o / w_p - 1.0);
                        worst_f = std::max(worst_f, df);
                        worst_p = std::max(worst_p, dw);
                        if (df >= o.fidelity_tol || dw >= o.weight_rel_tol) {
                            report(false, "oracle " + where.str() + ": |dF|=" + format_number(df) +
                                              " |dP/P|=" + format_number(dw));
                        }
                    } catch (const std::exception& e) {
                        report(false, "oracle " + where.str() + ": " + e.what());
                    }
                }
            }
            report(worst_f < o.fidelity_tol && worst_p < o.weight_rel_tol,
                   "oracle: " + std::to_string(o.y1m.size() * o.yinm.size()) + " outcomes, max |dF|=" +
                       format_number(worst_f) + ", max |dP/P|=" + format_number(worst_p));
        } else if (config.oracle) {
            out << "SKIP oracle: pipeline grid rejected\n";
        }

        if (config.mc) {
            const auto& s = *config.mc;
            const auto mc = heisenberg::monte_carlo(s.params, s.samples, seed, opts.jobs);
            const bool powered = s.samples >= s.min_power_samples;
            if (!powered) {
                err << "warning: " << s.samples << " Monte-Carlo samples give little statistical power; "
                    << "tolerance breaches are reported but not enforced\n";
            }
            const double mean_exact = heisenberg::mean_y1_exact(s.params.g(), s.params.gamma, s.params.alpha, s.params.r);
            const std::vector<std::pair<bool, std::string>> checks{
                {mc.rel_dev_x < s.rel_tol_x, "mc x-error: rel_dev_x=" + format_number(mc.rel_dev_x)},
                {mc.rel_dev_y_cond < s.rel_tol_y,
                 "mc y-error vs outcome-averaged exact error: rel_dev=" + format_number(mc.rel_dev_y_cond)},
                {!mc.outside_linear_regime, "mc linear regime: clip_fraction=" + format_number(mc.clip_fraction) +
                                                " (" + std::to_string(std::llround(mc.clip_fraction * double(mc.n_samples))) +
                                                " clipped)"},
                {std::abs(mc.mean_y1m - mean_exact) < 3.0 * mc.sem_y1m,
                 "mc mean y1m=" + format_number(mc.mean_y1m) + " vs " + format_number(mean_exact)},
            };
            for (const auto& [ok, what] : checks) {
                if (powered) {
                    report(ok, what);
                } else {
                    out << (ok ? "PASS " : "WARN ") << what << '\n';
                }
            }
            out << "info mc y-error vs linearized estimate: rel_dev_y=" << format_number(mc.rel_dev_y) << '\n';
        }
        out << "validate: " << (failures == 0 ? "ok" : std::to_string(failures) + " check(s) failed") << '\n';
        return static_cast<int>(failures == 0 ? kOk : kFailure);
    });
}

int cmd_mc(const ProtocolParams& params, std::size_t samples, std::uint64_t seed, const OutputOptions& opts,
           std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (samples < 100000) {
            err << "warning: " << samples << " samples give little statistical power\n";
        }
        const auto report = heisenberg::monte_carlo(params, samples, seed, opts.jobs);
        json j;
        stamp_json(j, opts);
        j["params"] = to_json(params);
        j["seed"] = seed;
        j["error_budget"] = to_json(heisenberg::error_budget(params));
        j["report"] = to_json(report);
        if (opts.out_dir) {
            write_file(*opts.out_dir / "mc.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
        } else {
            out << j.dump(2) << '\n';
        }
        return static_cast<int>(kOk);
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cubic-phase-gate CV teleportation simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> formats;
    unsigned jobs = 0;
    std::uint64_t seed = 1;
    bool no_timestamp = false;
    app.add_option("--config", config_path, "Run configuration (JSON)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--format", formats, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    app.add_option("--seed", seed, "Monte-Carlo seed");
    app.add_flag("--no-timestamp", no_timestamp, "Omit the generation timestamp");

    ErrorsSpec errors;
    auto* sub_errors = app.add_subcommand("errors", "y-error estimate versus alpha");
    auto* o_amin = sub_errors->add_option("--alpha-min", errors.alpha_min);
    auto* o_amax = sub_errors->add_option("--alpha-max", errors.alpha_max);
    auto* o_steps = sub_errors->add_option("--steps", errors.steps);
    auto* o_egamma = sub_errors->add_option("--gamma", errors.gamma);
    auto* o_edb = sub_errors->add_option("--squeeze-db", errors.squeeze_db);

    EnergyParams energy;
    auto* sub_energy = app.add_subcommand("energy", "Pulse energy of the resource displacement");
    sub_energy->add_option("--alpha", energy.alpha)->required();
    sub_energy->add_option("--wavelength", energy.wavelength);
    sub_energy->add_option("--tau", energy.tau);

    auto* sub_sweep = app.add_subcommand("sweep", "P and F over an outcome lattice");
    auto* sub_validate = app.add_subcommand("validate", "Oracle and Monte-Carlo checks");

    double mc_alpha = 20.0, mc_gamma = 0.1, mc_db = -15.0;
    std::size_t mc_samples = 1000000;
    auto* sub_mc = app.add_subcommand("mc", "Monte-Carlo check of the error budget");
    auto* o_malpha = sub_mc->add_option("--alpha", mc_alpha);
    auto* o_mgamma = sub_mc->add_option("--gamma", mc_gamma);
    auto* o_mdb = sub_mc->add_option("--squeeze-db", mc_db);
    sub_mc->add_option("--samples", mc_samples);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    OutputOptions opts;
    if (!out_dir.empty()) {
        opts.out_dir = out_dir;
    }
    opts.formats = formats;
    opts.timestamp = !no_timestamp;
    opts.jobs = jobs;

    std::optional<RunConfig> config;
    if (!config_path.empty()) {
        const int code = guarded(err, [&] {
            config = load_config(config_path);
            return static_cast<int>(kOk);
        });
        if (code != kOk) {
            return code;
        }
    }

    if (sub_errors->parsed()) {
        ErrorsSpec spec = config && config->errors ? *config->errors : ErrorsSpec{};
        if (*o_amin) spec.alpha_min = errors.alpha_min;
        if (*o_amax) spec.alpha_max = errors.alpha_max;
        if (*o_steps) spec.steps = errors.steps;
        if (*o_egamma) spec.gamma = errors.gamma;
        if (*o_edb) spec.squeeze_db = errors.squeeze_db;
        if (opts.out_dir == std::nullopt && config && !config->out_dir.empty() && config->out_dir != ".") {
            opts.out_dir = config->out_dir;
        }
        return cmd_errors(spec, opts, out, err);
    }
    if (sub_energy->parsed()) {
        return cmd_energy(energy, out, err);
    }
    if (sub_sweep->parsed() || sub_validate->parsed()) {
        if (!config) {
            err << "error: --config is required\n";
            return kUsage;
        }
        return sub_sweep->parsed() ? cmd_sweep(*config, opts, out, err)
                                   : cmd_validate(*config, opts, seed, out, err);
    }
    // mc
    return guarded(err, [&] {
        ProtocolParams params;
        if (config && (config->mc || config->has_params)) {
            params = config->mc ? config->mc->params : config->params;
            if (config->mc && !*sub_mc->get_option("--samples")) {
                mc_samples = config->mc->samples;
            }
        } else {
            params = teleport_params(squeezing_db_to_r(mc_db), mc_gamma, mc_alpha, 1.0);
            params = teleport::default_weight(params);
        }
        if (*o_malpha || *o_mgamma || *o_mdb) {
            if (*o_malpha) params.alpha = mc_alpha;
            if (*o_mgamma) params.gamma = mc_gamma;
            if (*o_mdb) params.r = squeezing_db_to_r(mc_db);
            params = teleport::default_weight(params);
        }
        return cmd_mc(params, mc_samples, seed, opts, out, err);
    });
}

}  // namespace cvtele::cli
