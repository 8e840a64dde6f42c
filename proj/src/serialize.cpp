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

#include "cvtele/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <variant>

#include "cvtele/qstate.hpp"

namespace cvtele {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

InputState input_from_json(const json& j, const std::filesystem::path& base) {
    const auto type = get_or<std::string>(j, "type", "vacuum");
    if (type == "vacuum") {
        return InputState::vacuum();
    }
    if (type == "squeezed") {
        return InputState::squeezed(get_or(j, "r_in", 0.0));
    }
    if (type == "displaced") {
        return InputState::displaced(get_or(j, "x0", 0.0), get_or(j, "y0", 0.0));
    }
    if (type == "custom") {
        if (!j.contains("file")) {
            throw ConfigError("custom input state needs a 'file'");
        }
        auto path = std::filesystem::path(j.at("file").get<std::string>());
        if (path.is_relative()) {
            path = base / path;
        }
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open custom input state: " + path.string());
        }
        auto psi = read_csv(in, Rep::Position);
        return InputState(input::Custom{psi.grid(), {psi.amps().begin(), psi.amps().end()}});
    }
    throw ConfigError("unknown input state type: " + type);
}

}  // namespace

teleport::OutcomeLattice LatticeSpec::build(const ProtocolParams& params) const {
    if (automatic) {
        return teleport::OutcomeLattice::automatic(params, n_y1, n_yin);
    }
    return teleport::OutcomeLattice::uniform(y1_min, y1_max, n_y1, yin_min, yin_max, n_yin);
}

teleport::TeleportGrids GridConfig::build(const ProtocolParams& params) const {
    auto g = teleport::default_grids(params, n_resource, n_input);
    if (resource) {
        g.resource = *resource;
    }
    if (input) {
        g.input = *input;
    }
    return g;
}

json to_json(const GridSpec& g) { return json{{"min", g.min}, {"max", g.max}, {"n", g.n}}; }

json to_json(const InputState& s) {
    json j{{"type", s.name()}};
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, input::Squeezed>) {
                j["r_in"] = k.r_in;
            } else if constexpr (std::is_same_v<K, input::Displaced>) {
                j["x0"] = k.x0;
                j["y0"] = k.y0;
            } else if constexpr (std::is_same_v<K, input::Custom>) {
                j["grid"] = to_json(k.grid);
            }
        },
        s.kind());
    return j;
}

json to_json(const ProtocolParams& p) {
    return json{{"r", p.r},
                {"squeeze_db", r_to_squeezing_db(p.r)},
                {"gamma", p.gamma},
                {"alpha", p.alpha},
                {"g1", p.g1},
                {"g2", p.g2},
                {"input_state", to_json(p.input_state)}};
}

json to_json(const heisenberg::ErrorBudget& b) {
    return json{{"err_x", b.err_x}, {"err_y", b.err_y}, {"baseline", b.baseline}};
}

json to_json(const heisenberg::McReport& m) {
    return json{{"n_samples", m.n_samples},
                {"emp_var_x", m.emp_var_x},
                {"emp_var_y", m.emp_var_y},
                {"lin_var_x", m.lin_var_x},
                {"lin_var_y", m.lin_var_y},
                {"rel_dev_x", m.rel_dev_x},
                {"rel_dev_y", m.rel_dev_y},
                {"clip_fraction", m.clip_fraction},
                {"outside_linear_regime", m.outside_linear_regime},
                {"mean_y1m", m.mean_y1m},
                {"sem_y1m", m.sem_y1m},
                {"cond_var_y", m.cond_var_y},
                {"rel_dev_y_cond", m.rel_dev_y_cond}};
}

json to_json(const teleport::SweepResult& s) {
    json F = json::array();
    for (double f : s.F) {
        F.push_back(number_or_null(f));
    }
    json stats = json::object();
    for (const auto& [t, m] : s.postselect_stats) {
        stats[format_number(t)] = m;
    }
    return json{{"y1m_axis", s.y1m_axis},
                {"yinm_axis", s.yinm_axis},
                {"layout", "row-major [y1m][yinm]"},
                {"P", s.P},
                {"F", std::move(F)},
                {"total_probability", s.total_probability},
                {"postselect_stats", std::move(stats)}};
}

GridSpec grid_from_json(const json& j) {
    try {
        GridSpec g{j.at("min").get<double>(), j.at("max").get<double>(), j.at("n").get<std::size_t>()};
        g.validate();
        return g;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad grid: ") + e.what());
    } catch (const GridError& e) {
        throw ConfigError(e.what());
    }
}

ProtocolParams params_from_json(const json& j, const std::filesystem::path& base) {
    if (!j.is_object()) {
        throw ConfigError("params must be an object");
    }
    ProtocolParams p;
    if (j.contains("r") && j.contains("squeeze_db")) {
        throw ConfigError("give either 'r' or 'squeeze_db', not both");
    }
    try {
        p.r = j.contains("squeeze_db") ? squeezing_db_to_r(j.at("squeeze_db").get<double>()) : get_or(j, "r", 0.0);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    p.gamma = get_or(j, "gamma", 0.1);
    p.alpha = get_or(j, "alpha", 0.0);
    if (j.contains("input_state")) {
        p.input_state = input_from_json(j.at("input_state"), base);
    }
    const bool has_pair = j.contains("g1") || j.contains("g2");
    if (has_pair && j.contains("g")) {
        throw ConfigError("give either 'g' or 'g1'/'g2', not both");
    }
    if (has_pair) {
        p.g1 = get_or(j, "g1", 1.0);
        p.g2 = get_or(j, "g2", -p.g1);
    } else if (j.contains("g")) {
        p.g1 = j.at("g").get<double>();
        p.g2 = -p.g1;
    }
    try {
        if (!has_pair && !j.contains("g")) {
            p = teleport::default_weight(p);
        }
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return p;
}

RunConfig config_from_json(const json& j, const std::filesystem::path& base) {
    RunConfig c;
    try {
        c.name = get_or<std::string>(j, "name", c.name);
        c.has_params = j.contains("params");
        if (c.has_params) {
            c.params = params_from_json(j.at("params"), base);
        }
        if (j.contains("grids")) {
            const auto& g = j.at("grids");
            c.grids.n_resource = get_or(g, "n_resource", c.grids.n_resource);
            c.grids.n_input = get_or(g, "n_input", c.grids.n_input);
            if (g.contains("resource")) {
                c.grids.resource = grid_from_json(g.at("resource"));
            }
            if (g.contains("input")) {
                c.grids.input = grid_from_json(g.at("input"));
            }
        }
        if (j.contains("lattice")) {
            const auto& l = j.at("lattice");
            auto& s = c.lattice;
            s.n_y1 = get_or(l, "n_y1", s.n_y1);
            s.n_yin = get_or(l, "n_yin", s.n_yin);
            s.automatic = !l.contains("y1_min");
            if (!s.automatic) {
                s.y1_min = l.at("y1_min").get<double>();
                s.y1_max = l.at("y1_max").get<double>();
                s.yin_min = get_or(l, "yin_min", s.yin_min);
                s.yin_max = get_or(l, "yin_max", s.yin_max);
            }
        }
        c.thresholds = get_or(j, "thresholds", c.thresholds);
        c.fidelity_threshold = get_or(j, "fidelity_threshold", c.fidelity_threshold);
        c.low_success_mass = get_or(j, "low_success_mass", c.low_success_mass);
        if (j.contains("out_dir")) {
            c.out_dir = j.at("out_dir").get<std::string>();
        }
        c.formats = get_or(j, "formats", c.formats);
        if (j.contains("oracle")) {
            const auto& o = j.at("oracle");
            OracleCheckSpec s;
            s.y1m = get_or(o, "y1m", s.y1m);
            s.yinm = get_or(o, "yinm", s.yinm);
            s.n_input = get_or(o, "n_input", s.n_input);
            s.n_mode1 = get_or(o, "n_mode1", s.n_mode1);
            s.n_mode2 = get_or(o, "n_mode2", s.n_mode2);
            s.fidelity_tol = get_or(o, "fidelity_tol", s.fidelity_tol);
            s.weight_rel_tol = get_or(o, "weight_rel_tol", s.weight_rel_tol);
            c.oracle = s;
        }
        if (j.contains("mc")) {
            const auto& m = j.at("mc");
            McCheckSpec s;
            s.params = params_from_json(m.at("params"), base);
            s.samples = get_or(m, "samples", s.samples);
            s.rel_tol_x = get_or(m, "rel_tol_x", s.rel_tol_x);
            s.rel_tol_y = get_or(m, "rel_tol_y", s.rel_tol_y);
            s.min_power_samples = get_or(m, "min_power_samples", s.min_power_samples);
            c.mc = s;
        }
        if (j.contains("errors")) {
            const auto& e = j.at("errors");
            ErrorsSpec s;
            s.alpha_min = get_or(e, "alpha_min", s.alpha_min);
            s.alpha_max = get_or(e, "alpha_max", s.alpha_max);
            s.steps = get_or(e, "steps", s.steps);
            s.gamma = get_or(e, "gamma", s.gamma);
            s.squeeze_db = get_or(e, "squeeze_db", s.squeeze_db);
            s.var_x_in = get_or(e, "var_x_in", s.var_x_in);
            c.errors = s;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    for (const auto& f : c.formats) {
        if (f != "csv" && f != "json") {
            throw ConfigError("unknown format: " + f);
        }
    }
    if (c.formats.empty()) {
        throw ConfigError("formats must not be empty");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open config: " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

void write_sweep_csv(std::ostream& os, const teleport::SweepResult& s) {
    os << "y1m,yinm,P,F\n";
    for (std::size_t i = 0; i < s.y1m_axis.size(); ++i) {
        for (std::size_t j = 0; j < s.yinm_axis.size(); ++j) {
            os << format_number(s.y1m_axis[i]) << ',' << format_number(s.yinm_axis[j]) << ','
               << format_number(s.p_at(i, j)) << ',' << format_number(s.f_at(i, j)) << '\n';
        }
    }
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace cvtele
