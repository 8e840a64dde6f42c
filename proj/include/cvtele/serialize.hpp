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

// JSON and CSV layouts for parameters, reports and sweep results, and the
// run-configuration file read by the command-line tool.

#ifndef CVTELE_SERIALIZE_HPP
#define CVTELE_SERIALIZE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "cvtele/core.hpp"
#include "cvtele/heisenberg.hpp"
#include "cvtele/teleport.hpp"

namespace cvtele {

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct LatticeSpec {
    bool automatic = true;
    std::size_t n_y1 = 64;
    std::size_t n_yin = 64;
    double y1_min = 0.0;
    double y1_max = 0.0;
    double yin_min = -6.0;
    double yin_max = 6.0;

    teleport::OutcomeLattice build(const ProtocolParams& params) const;
};

struct GridConfig {
    std::size_t n_resource = std::size_t{1} << 14;
    std::size_t n_input = 512;
    std::optional<GridSpec> resource;  ///< overrides the suggested grid
    std::optional<GridSpec> input;

    teleport::TeleportGrids build(const ProtocolParams& params) const;
};

struct OracleCheckSpec {
    std::vector<double> y1m{70.0, 76.5, 83.0, 89.5, 96.0};
    std::vector<double> yinm{-4.0, -2.0, 0.0, 2.0, 4.0};
    std::size_t n_input = 128;
    std::size_t n_mode1 = 256;
    std::size_t n_mode2 = 256;
    double fidelity_tol = 1e-3;
    double weight_rel_tol = 1e-2;
};

struct McCheckSpec {
    ProtocolParams params;
    std::size_t samples = 1000000;
    double rel_tol_x = 0.02;
    double rel_tol_y = 0.10;
    /// Below this sample count tolerance breaches only warn.
    std::size_t min_power_samples = 100000;
};

struct ErrorsSpec {
    double alpha_min = 1.0;
    double alpha_max = 30.0;
    std::size_t steps = 291;
    double gamma = 0.1;
    double squeeze_db = -15.0;
    double var_x_in = Conventions::vacuum_quadrature_variance;
};

struct RunConfig {
    std::string name = "run";
    bool has_params = false;
    ProtocolParams params;
    GridConfig grids;
    LatticeSpec lattice;
    std::vector<double> thresholds;
    double fidelity_threshold = 0.99;
    /// Summary flags low success when the F > fidelity_threshold mass is below this.
    double low_success_mass = 0.25;
    std::filesystem::path out_dir = ".";
    std::vector<std::string> formats{"csv", "json"};
    std::optional<OracleCheckSpec> oracle;
    std::optional<McCheckSpec> mc;
    std::optional<ErrorsSpec> errors;
};

nlohmann::json to_json(const GridSpec& g);
nlohmann::json to_json(const InputState& s);
nlohmann::json to_json(const ProtocolParams& p);
nlohmann::json to_json(const heisenberg::ErrorBudget& b);
nlohmann::json to_json(const heisenberg::McReport& m);
/// Axes plus row-major P and F arrays; undefined F is written as null.
nlohmann::json to_json(const teleport::SweepResult& s);

GridSpec grid_from_json(const nlohmann::json& j);
/// Accepts "r" or "squeeze_db"; weights as "g1"/"g2", a single "g", or
/// neither (balanced weight). Relative custom-state paths resolve against `base`.
ProtocolParams params_from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
/// Throws ConfigError on parse failures, std::ios_base::failure when unreadable.
RunConfig load_config(const std::filesystem::path& path);

/// Long format with header y1m,yinm,P,F.
void write_sweep_csv(std::ostream& os, const teleport::SweepResult& s);

/// Shortest decimal text that round-trips, "nan" for NaN.
std::string format_number(double v);

}  // namespace cvtele

#endif
