// Copyright 2026 The qepi Authors
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

#ifndef QEPI_CLI_H
#define QEPI_CLI_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qepi::cli {

enum ExitCode : int {
    kSuccess = 0,
    kViolation = 1,
    kUsage = 2,
    kCutoff = 3,
};

struct RunConfig {
    std::string command;
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    std::optional<double> lambda;
    std::optional<double> kappa;
    std::optional<double> n_bar;
    std::size_t cutoff = 60;
    std::string out;  // file for verify/oracle (stdout if empty), directory for figures
    std::string format = "json";
    std::string suite = "default";
    std::size_t modes = 1;
    double nu_max = 20.0;
    double r_max = 1.5;
};

/// Parses argv and dispatches; never throws.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, char **argv, std::ostream &out, std::ostream &err);

int cmd_verify(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_figures(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_oracle(const RunConfig &config, std::ostream &out, std::ostream &err);

}  // namespace qepi::cli

#endif  // QEPI_CLI_H
