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

#include "qepi/fisher.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qepi/errors.h"

namespace qepi {

namespace {

constexpr double kKernelEigenvalue = 1e-10;
constexpr double kKernelMass = 1e-8;

void require_positive_fisher(double j, const char *name) {
    if (!(j > 0.0) || !std::isfinite(j)) {
        throw DomainError(std::string(name) + " must be positive and finite");
    }
}

// Mass that sigma places on the eigenvectors of rho with eigenvalue <= 1e-10.
double kernel_mass(const Eigen::MatrixXcd &kernel, const fock::FockDensityMatrix &sigma) {
    if (kernel.cols() == 0) {
        return 0.0;
    }
    return (kernel.adjoint() * sigma.matrix() * kernel).trace().real();
}

double symmetric_quotient(const fock::FockDensityMatrix &rho, const Eigen::MatrixXcd &kernel, fock::Direction direction,
                          double h) {
    double sum = 0.0;
    for (const double theta : {h, -h}) {
        const fock::FockDensityMatrix shifted = fock::displace_fock(rho, direction, theta);
        const double mass = kernel_mass(kernel, shifted);
        if (mass > kKernelMass) {
            std::ostringstream msg;
            msg << "Fisher information diverges: displaced state puts " << mass << " on the kernel of rho";
            throw DivergenceError(msg.str());
        }
        const double s = fock::relative_entropy(rho, shifted);
        if (!std::isfinite(s)) {
            throw DivergenceError("Fisher information diverges: support of rho is not preserved by the displacement");
        }
        sum += s;
    }
    return sum / (h * h);
}

}  // namespace

nlohmann::json to_json(const FisherRecord &record) {
    return nlohmann::json{{"method", record.method},
                          {"state", record.state_ref},
                          {"per_direction", record.per_direction},
                          {"total", record.total}};
}

FisherRecord fisher_total_gaussian(const GaussianState &state) {
    const SpectrumReport spectrum = symplectic_eigenvalues(state);
    if (spectrum.min_nu < 1.0 + kFullRankMargin) {
        std::ostringstream msg;
        msg << "Fisher information diverges: min symplectic eigenvalue " << spectrum.min_nu << " is within "
            << kFullRankMargin << " of 1";
        throw DivergenceError(msg.str());
    }
    const Eigen::MatrixXd &gamma = state.covariance();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(gamma.rows(), gamma.cols());
    double h = std::min(1e-3, (spectrum.min_nu - 1.0) / 4.0);
    while (!symplectic_eigenvalues(Eigen::MatrixXd(gamma - h * id)).physical) {
        h /= 2.0;
    }
    auto slope = [&](double step) {
        return (covariance_entropy(gamma + step * id) - covariance_entropy(gamma - step * id)) / (2.0 * step);
    };
    const double coarse = slope(h);
    const double fine = slope(h / 2.0);
    FisherRecord record;
    record.total = std::max(0.0, 4.0 * (4.0 * fine - coarse) / 3.0);
    record.method = "gaussian_debruijn";
    std::ostringstream ref;
    ref << "gaussian(n=" << state.modes() << ", min_nu=" << spectrum.min_nu << ")";
    record.state_ref = ref.str();
    return record;
}

double fisher_direction_fock(const fock::FockDensityMatrix &rho, fock::Direction direction, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("finite-difference step must be positive");
    }
    if (direction.mode >= rho.modes()) {
        throw DomainError("direction exceeds number of modes");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
    if (solver.info() != Eigen::Success) {
        throw NumericError("Hermitian eigen-solver failed");
    }
    const Eigen::VectorXd &p = solver.eigenvalues();  // ascending
    Eigen::Index rank_deficit = 0;
    while (rank_deficit < p.size() && p(rank_deficit) <= kKernelEigenvalue) {
        ++rank_deficit;
    }
    const Eigen::MatrixXcd kernel = solver.eigenvectors().leftCols(rank_deficit);

    const double coarse = symmetric_quotient(rho, kernel, direction, h);
    const double fine = symmetric_quotient(rho, kernel, direction, h / 2.0);
    const double j = (4.0 * fine - coarse) / 3.0;
    const double disagreement = std::abs(coarse - fine) / std::max(std::abs(j), 1e-12);
    if (disagreement > 1e-4) {
        std::ostringstream msg;
        msg << "Fisher finite differences disagree by " << disagreement << " relative";
        throw AccuracyError(msg.str());
    }
    if (j < -1e-8) {
        throw NumericError("Fisher information came out negative");
    }
    return std::max(0.0, j);
}

FisherRecord fisher_total_fock(const fock::FockDensityMatrix &rho, const std::string &state_ref, double h) {
    FisherRecord record;
    record.method = "fock_finite_difference";
    record.state_ref = state_ref;
    for (std::size_t r = 0; r < 2 * rho.modes(); ++r) {
        record.per_direction.push_back(fisher_direction_fock(rho, fock::Direction::from_index(r), h));
        record.total += record.per_direction.back();
    }
    return record;
}

EqualityReport debruijn_check(const fock::FockDensityMatrix &rho) {
    const double lhs = fisher_total_fock(rho).total;

    // Forward differences at t = h0, h0/2, h0/4, two rounds of Richardson.
    const double h0 = 0.02;
    const double s0 = fock::vn_entropy(rho);
    double forward[3];
    for (int k = 0; k < 3; ++k) {
        const double t = h0 / static_cast<double>(1 << k);
        forward[k] = (fock::vn_entropy(fock::liouville_evolve(rho, t)) - s0) / t;
    }
    const double r1_coarse = 2.0 * forward[1] - forward[0];
    const double r1_fine = 2.0 * forward[2] - forward[1];
    const double rhs = 4.0 * (4.0 * r1_fine - r1_coarse) / 3.0;

    EqualityReport report;
    report.name = "debruijn";
    report.lhs = lhs;
    report.rhs = rhs;
    report.relative = true;
    report.deviation = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
    report.tolerance = 1e-3;
    report.passes = report.deviation < report.tolerance;
    report.inputs = {{"modes", rho.modes()}, {"cutoff", rho.cutoff()}, {"h0", h0}};
    return report;
}

InequalityReport stam_check(double j_a, double j_b, double j_c, const MixingParams &params, double tolerance) {
    require_positive_fisher(j_a, "J_A");
    require_positive_fisher(j_b, "J_B");
    require_positive_fisher(j_c, "J_C");
    const double rhs = params.lambda_a() / j_a + params.lambda_b() / j_b;
    return make_inequality("stam", 1.0 / j_c, rhs, tolerance,
                           {{"J_A", j_a}, {"J_B", j_b}, {"J_C", j_c}, {"params", params.describe()}});
}

InequalityReport weighted_fisher_check(double j_a, double j_b, double j_c, double w_a, double w_b,
                                       const MixingParams &params, double tolerance) {
    require_positive_fisher(j_a, "J_A");
    require_positive_fisher(j_b, "J_B");
    require_positive_fisher(j_c, "J_C");
    if (!std::isfinite(w_a) || !std::isfinite(w_b)) {
        throw DomainError("weights must be finite");
    }
    const double w_c = std::sqrt(params.lambda_a()) * w_a + std::sqrt(params.lambda_b()) * w_b;
    return make_inequality("weighted_fisher", w_a * w_a * j_a + w_b * w_b * j_b, w_c * w_c * j_c, tolerance,
                           {{"J_A", j_a},
                            {"J_B", j_b},
                            {"J_C", j_c},
                            {"w_A", w_a},
                            {"w_B", w_b},
                            {"params", params.describe()}});
}

std::pair<double, double> optimal_weights(double j_a, double j_b, const MixingParams &params) {
    require_positive_fisher(j_a, "J_A");
    require_positive_fisher(j_b, "J_B");
    return {std::sqrt(params.lambda_a()) / j_a, std::sqrt(params.lambda_b()) / j_b};
}

}  // namespace qepi
