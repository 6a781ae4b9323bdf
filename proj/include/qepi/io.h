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

#ifndef QEPI_IO_H
#define QEPI_IO_H

#include <string>
#include <vector>

#include <json.hpp>

#include "qepi/broadcast.h"
#include "qepi/fock.h"
#include "qepi/inequalities.h"
#include "qepi/report.h"
#include "qepi/symplectic.h"

namespace qepi {

/// {"n": modes, "gamma": row-major 2n x 2n, "d": 2n}.
nlohmann::json to_json(const GaussianState &state);
GaussianState gaussian_from_json(const nlohmann::json &j);

nlohmann::json to_json(const InequalityReport &report);
nlohmann::json to_json(const EqualityReport &report);

/// Header row plus data rows; rendered with '.' decimals, CRLF line ends and
/// quoting only where a field needs it.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const;
};

/// Shortest representation that round-trips.
std::string format_number(double value);

CsvTable delta_surface_csv(const DeltaSurface &surface);
/// Columns S_bar, lambda, conjectured, bound for the given entropies on a
/// uniform lambda grid.
CsvTable moe_bounds_csv(const std::vector<double> &s_bars, std::size_t lambda_points);
CsvTable trajectory_csv(const std::vector<TrajectoryPoint> &points);
CsvTable region_csv(const std::vector<CapacityPoint> &points);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string &path, const std::string &content);
std::string read_file(const std::string &path);

/// Binary density-matrix dump: "FOCKRHO1", u32 modes, u32 cutoff, then
/// row-major (re, im) pairs, all little-endian.
std::string encode_fock_dump(const fock::FockDensityMatrix &rho);
fock::FockDensityMatrix decode_fock_dump(const std::string &bytes);

}  // namespace qepi

#endif  // QEPI_IO_H
