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

#ifndef QEPI_REPORT_H
#define QEPI_REPORT_H

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

namespace qepi {

/// Relative slack tolerance for inequalities evaluated on closed-form inputs.
inline constexpr double kClosedFormTolerance = 1e-9;
/// Relative slack tolerance when an input entropy came from the Fock oracle.
inline constexpr double kOracleTolerance = 1e-6;

/// Outcome of one checked inequality lhs >= rhs.
struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double tolerance = kClosedFormTolerance;
    bool holds = false;
    nlohmann::json inputs = nlohmann::json::object();
};

/// Builds a report with slack = lhs - rhs and
/// holds <=> slack >= -tolerance * max(1, |rhs|).
inline InequalityReport make_inequality(std::string name, double lhs, double rhs, double tolerance,
                                        nlohmann::json inputs) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = lhs - rhs;
    r.tolerance = tolerance;
    r.holds = r.slack >= -tolerance * std::max(1.0, std::abs(rhs));
    r.inputs = std::move(inputs);
    return r;
}

/// Outcome of a numerical identity check: two routes that must agree.
struct EqualityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double deviation = 0.0;  // absolute or relative, see `relative`
    bool relative = false;
    double tolerance = 0.0;
    bool passes = false;
    nlohmann::json inputs = nlohmann::json::object();
};

}  // namespace qepi

#endif  // QEPI_REPORT_H
