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

#ifndef QEPI_INEQUALITIES_H
#define QEPI_INEQUALITIES_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qepi/channels.h"
#include "qepi/report.h"
#include "qepi/symplectic.h"

namespace qepi {

/// e^{S_C/n} >= lambda_A e^{S_A/n} + lambda_B e^{S_B/n}.
InequalityReport qepi_check(double s_a, double s_b, double s_c, std::size_t modes, const MixingParams &params,
                            double tolerance = kClosedFormTolerance);

/// Beam splitter: S_C >= lambda S_A + (1 - lambda) S_B.
/// Amplifier: S_C >= (kappa S_A + (kappa - 1) S_B) / (2 kappa - 1) + n ln(2 kappa - 1).
InequalityReport linear_check(double s_a, double s_b, double s_c, std::size_t modes, const MixingParams &params,
                              double tolerance = kClosedFormTolerance);

/// 1/e - 1/2.
double epni_gap_bound();

/// lhs = N_C - lambda N_A - (1 - lambda) N_B, rhs = 1/e - 1/2. Whether the
/// gap is also >= 0 (the open conjecture, same tolerance rule) is recorded in inputs["conjecture_holds"].
InequalityReport epni_gap(double n_a, double n_b, double n_c, double lambda, double tolerance = kClosedFormTolerance);

/// Amplifier probe: lhs = N_C - kappa N_A - (kappa - 1)(N_B + 1), checked
/// against the bound -(2 kappa - 1)(1/2 - 1/e) that the amplifier qEPI implies.
InequalityReport epni_amplifier_gap(double n_a, double n_b, double n_c, double kappa,
                                    double tolerance = kClosedFormTolerance);

/// ln(lambda e^{S} + 1 - lambda).
double moe_bound(double s_bar, double lambda);
/// g(lambda g^{-1}(S)).
double moe_conjectured(double s_bar, double lambda);
double moe_delta(double s_bar, double lambda);

struct DeltaSample {
    double s_bar = 0.0;
    double lambda = 0.0;
    double delta = 0.0;
};

struct DeltaSurfaceConfig {
    double s_min = 0.01;
    double s_max = 6.0;
    std::size_t s_points = 200;  // log-spaced
    std::size_t lambda_points = 201;
    std::size_t refine_rounds = 4;
};

struct DeltaSurface {
    std::vector<DeltaSample> samples;  // s-major
    DeltaSample grid_max;
    DeltaSample refined_max;
    double min_delta = 0.0;
};

/// Grid evaluation followed by alternating golden-section refinement inside
/// the grid cells adjacent to the grid argmax.
DeltaSurface delta_surface(const DeltaSurfaceConfig &config = {});

struct TrajectoryPoint {
    double t = 0.0;
    double t_a = 0.0;
    double t_b = 0.0;
    double t_c = 0.0;
    double s_a = 0.0;
    double s_b = 0.0;
    double s_c = 0.0;
    double ratio = 0.0;
};

struct TrajectorySchedule {
    double initial_step = 0.01;
    double switch_time = 10.0;
    double growth = 1.05;
    double max_step = 1.0;
};

/// Integrates dt_X/dt = e^{S(X + t_X noise)/n}, t_X(0) = 0, for X = A, B with
/// fixed-step RK4 in u = ln(1 + t_X), and reports the qEPI ratio
/// (lambda_A e^{S_A/n} + lambda_B e^{S_B/n}) / e^{S_C/n} along the way.
/// The step sequence is re-run with halved steps; a ratio difference above
/// 1e-7 raises AccuracyError.
std::vector<TrajectoryPoint> ratio_trajectory(const GaussianState &a, const GaussianState &b,
                                              const MixingParams &params, double t_max,
                                              const TrajectorySchedule &schedule = {});

struct AsymptoticPoint {
    double t = 0.0;
    double power = 0.0;      // e^{S(t)/n}
    double upper = 0.0;      // e (lambda_0 + t) / 2
    double deviation = 0.0;  // |power / (e t / 2) - 1|
    double allowed = 0.0;    // (lambda_0 + 2) / t
    bool upper_holds = true;
    bool deviation_holds = true;  // vacuous at t = 0
};

struct AsymptoticReport {
    double lambda0 = 0.0;
    double upper_slack = 0.01;
    std::vector<AsymptoticPoint> points;
    bool holds = true;
};

AsymptoticReport asymptotic_check(const GaussianState &state, const std::vector<double> &t_grid,
                                  double upper_slack = 0.01);

struct SuiteConfig {
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::size_t modes = 1;
    GeneratorParams generator;
};

struct SuiteSummary {
    std::size_t trials = 0;
    std::string params;
    double min_qepi_slack = 0.0;
    double min_linear_slack = 0.0;
    double min_stam_slack = 0.0;
    double min_weighted_slack = 0.0;
    double min_epni_gap = 0.0;
    std::size_t epni_negative = 0;  // conjecture probe, not a failure
    std::size_t stam_skipped = 0;   // pure inputs, J diverges
    std::vector<double> histogram_edges;
    std::vector<std::size_t> epni_histogram;
    std::vector<std::string> failures;
};

nlohmann::json to_json(const SuiteSummary &summary);

/// Random Gaussian pairs through qepi_check, linear_check, stam_check,
/// weighted_fisher_check and the EPnI gap. Trial i draws A and B from seeds
/// derived from (seed, "suite/A", i) and (seed, "suite/B", i).
SuiteSummary random_qepi_suite(const SuiteConfig &config, const MixingParams &params);

}  // namespace qepi

#endif  // QEPI_INEQUALITIES_H
