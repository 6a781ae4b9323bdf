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

#ifndef QEPI_FISHER_H
#define QEPI_FISHER_H

#include <string>
#include <vector>

#include <json.hpp>

#include "qepi/channels.h"
#include "qepi/fock.h"
#include "qepi/report.h"
#include "qepi/symplectic.h"

namespace qepi {

/// Fisher information for phase-space translations, in nats per theta^2.
struct FisherRecord {
    std::vector<double> per_direction;  // empty for the total-only Gaussian route
    double total = 0.0;
    std::string method;  // "gaussian_debruijn" or "fock_finite_difference"
    std::string state_ref;
};

nlohmann::json to_json(const FisherRecord &record);

/// Smallest symplectic eigenvalue accepted by fisher_total_gaussian.
inline constexpr double kFullRankMargin = 1e-6;

/// J = 4 dS(gamma + t 1)/dt at t = 0 from Richardson-extrapolated central
/// differences of the closed-form entropy. Throws DivergenceError when
/// min nu < 1 + kFullRankMargin.
FisherRecord fisher_total_gaussian(const GaussianState &state);

/// [S(rho || rho^h) + S(rho || rho^-h)] / h^2, Richardson-extrapolated over h
/// and h / 2. Throws DivergenceError when the displaced state reaches the
/// numerical kernel of rho, AccuracyError when the two step sizes disagree by
/// more than 1e-4 relative.
double fisher_direction_fock(const fock::FockDensityMatrix &rho, fock::Direction direction, double h = 0.05);

/// Per-direction values for all 2n directions and their sum.
FisherRecord fisher_total_fock(const fock::FockDensityMatrix &rho, const std::string &state_ref = "", double h = 0.05);

/// Compares sum_R J_R (finite differences of relative entropy) with 4 dS/dt
/// along the noise semigroup (forward differences of the Liouville-evolved
/// entropy, extrapolated to t = 0). Passes below 1e-3 relative deviation.
EqualityReport debruijn_check(const fock::FockDensityMatrix &rho);

/// 1/J_C >= lambda_A / J_A + lambda_B / J_B.
InequalityReport stam_check(double j_a, double j_b, double j_c, const MixingParams &params,
                            double tolerance = kClosedFormTolerance);

/// w_A^2 J_A + w_B^2 J_B >= w_C^2 J_C with w_C = sqrt(lambda_A) w_A + sqrt(lambda_B) w_B.
InequalityReport weighted_fisher_check(double j_a, double j_b, double j_c, double w_a, double w_b,
                                       const MixingParams &params, double tolerance = kClosedFormTolerance);

/// Cauchy-Schwarz optimal weights w_X = sqrt(lambda_X) / J_X.
std::pair<double, double> optimal_weights(double j_a, double j_b, const MixingParams &params);

}  // namespace qepi

#endif  // QEPI_FISHER_H
