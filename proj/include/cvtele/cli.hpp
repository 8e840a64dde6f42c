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

// Subcommands of the `cvtele` tool. Each returns a process exit code and
// writes only to the streams and directories it is given.

#ifndef CVTELE_CLI_HPP
#define CVTELE_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cvtele/core.hpp"
#include "cvtele/serialize.hpp"

namespace cvtele::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kFailure = 2, kIo = 3 };

struct OutputOptions {
    std::optional<std::filesystem::path> out_dir;  ///< overrides the config
    std::vector<std::string> formats;              ///< overrides the config when non-empty
    bool timestamp = true;
    unsigned jobs = 0;
};

struct ErrorsRow {
    double alpha = 0.0;
    double err_y_estimate = 0.0;
    double baseline = 0.0;
};

/// Throws DomainError on a bad range.
std::vector<ErrorsRow> errors_table(const ErrorsSpec& spec);

/// Joules with three significant digits, e.g. "9.24e-15".
std::string format_energy(double joules);

/// "# generated <UTC time>".
std::string timestamp_line();

int cmd_errors(const ErrorsSpec& spec, const OutputOptions& opts, std::ostream& out, std::ostream& err);
int cmd_energy(const EnergyParams& params, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, const OutputOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, const OutputOptions& opts, std::uint64_t seed, std::ostream& out,
                 std::ostream& err);
int cmd_mc(const ProtocolParams& params, std::size_t samples, std::uint64_t seed, const OutputOptions& opts,
           std::ostream& out, std::ostream& err);

/// Parses the command line and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvtele::cli

#endif
