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

#include "qepi/broadcast.h"

#include <cmath>
#include <sstream>

#include "qepi/errors.h"
#include "qepi/symplectic.h"

namespace qepi {

CapacityPoint capacity_point(double lambda, double n_bar, double beta) {
    if (!(lambda >= 0.5 && lambda <= 1.0)) {
        std::ostringstream msg;
        msg << "broadcast transmissivity must lie in [1/2, 1], got " << lambda;
        throw DomainError(msg.str());
    }
    if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
        throw DomainError("mean photon number must be finite and non-negative");
    }
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw DomainError("power split beta must lie in [0, 1]");
    }
    CapacityPoint p;
    p.beta = beta;
    p.r_b = g(lambda * beta * n_bar);
    const double total = g((1.0 - lambda) * n_bar);
    p.r_c_conjectured = total - g((1.0 - lambda) * beta * n_bar);
    // ln[((1-lambda) e^x + 2 lambda - 1) / lambda] = ln(1 + (1-lambda)(e^x - 1) / lambda)
    p.r_c_qepi = total - std::log1p((1.0 - lambda) * std::expm1(p.r_b) / lambda);
    p.feasible = p.r_c_conjectured >= 0.0;
    return p;
}

std::vector<CapacityPoint> capacity_region(double lambda, double n_bar, std::size_t grid_size) {
    if (grid_size < 2) {
        throw DomainError("capacity region needs at least two grid points");
    }
    std::vector<CapacityPoint> out;
    out.reserve(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double beta = i + 1 == grid_size ? 1.0 : static_cast<double>(i) / static_cast<double>(grid_size - 1);
        out.push_back(capacity_point(lambda, n_bar, beta));
    }
    return out;
}

}  // namespace qepi
