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

#ifndef QEPI_BROADCAST_H
#define QEPI_BROADCAST_H

#include <cstddef>
#include <vector>

namespace qepi {

/// Rates in nats per channel use for one power split beta.
struct CapacityPoint {
    double beta = 0.0;
    double r_b = 0.0;
    double r_c_conjectured = 0.0;
    double r_c_qepi = 0.0;
    bool feasible = true;  // r_c_conjectured >= 0; negative rates are kept, not clipped
};

/// R_B = g(lambda beta N), R_C <= g((1-lambda) N) - g((1-lambda) beta N) under
/// the EPnI, and the weaker bound
/// R_C <= g((1-lambda) N) - ln[((1-lambda) e^{g(lambda beta N)} + 2 lambda - 1) / lambda]
/// implied by the qEPI. lambda in [1/2, 1].
CapacityPoint capacity_point(double lambda, double n_bar, double beta);

/// Uniform beta grid on [0, 1] with `grid_size` >= 2 points.
std::vector<CapacityPoint> capacity_region(double lambda, double n_bar, std::size_t grid_size);

}  // namespace qepi

#endif  // QEPI_BROADCAST_H
