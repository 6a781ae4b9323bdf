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

#ifndef QEPI_FOCK_H
#define QEPI_FOCK_H

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "qepi/channels.h"

// Truncated Fock-space simulation of one or two bosonic modes. Everything the
// Gaussian modules compute in closed form can be recomputed here by brute
// force, and non-Gaussian inputs are supported.
namespace qepi::fock {

/// Population allowed beyond the cutoff when a state is built.
inline constexpr double kTailTolerance = 1e-10;
/// Gate on trace_leak() for derived states.
inline constexpr double kLeakTolerance = 1e-8;
inline constexpr double kHermitianTolerance = 1e-12;
/// Eigenvalues in [-kNegativeTolerance, 0] are treated as roundoff.
inline constexpr double kNegativeTolerance = 1e-8;
/// Eigenvalues of sigma at or below this define its numerical kernel.
inline constexpr double kSupportThreshold = 1e-12;
/// Mass of rho on the kernel of sigma above which S(rho||sigma) = +inf.
inline constexpr double kSupportMassThreshold = 1e-9;

/// Density operator on a truncated Fock space of `modes` (1 or 2) modes with
/// `cutoff` levels each. Two-mode index is j * cutoff + k.
class FockDensityMatrix {
   public:
    /// Validates Hermiticity, unit trace (within 1e-8) and, for dimensions up
    /// to 1024, eigenvalues >= -1e-10.
    FockDensityMatrix(std::size_t modes, std::size_t cutoff, Eigen::MatrixXcd rho);

    /// For states produced by channels: only shape and Hermiticity are
    /// checked, the trace deficit is left for trace_leak().
    static FockDensityMatrix derived(std::size_t modes, std::size_t cutoff, Eigen::MatrixXcd rho);

    std::size_t modes() const {
        return modes_;
    }
    std::size_t cutoff() const {
        return cutoff_;
    }
    std::size_t dimension() const {
        return static_cast<std::size_t>(rho_.rows());
    }
    const Eigen::MatrixXcd &matrix() const {
        return rho_;
    }

   private:
    struct Unchecked {};
    FockDensityMatrix(Unchecked, std::size_t modes, std::size_t cutoff, Eigen::MatrixXcd rho);

    std::size_t modes_;
    std::size_t cutoff_;
    Eigen::MatrixXcd rho_;
};

enum class Quadrature { Q, P };

/// Phase-space direction; index 2j is Q_j, 2j + 1 is P_j.
struct Direction {
    std::size_t mode = 0;
    Quadrature which = Quadrature::Q;

    static Direction from_index(std::size_t index) {
        return Direction{index / 2, index % 2 == 0 ? Quadrature::Q : Quadrature::P};
    }
    std::size_t index() const {
        return 2 * mode + (which == Quadrature::P ? 1 : 0);
    }
};

/// Q_j = (a_j + a_j^dag)/sqrt2 or P_j = i(a_j^dag - a_j)/sqrt2 on the full
/// truncated space.
class QuadratureOp {
   public:
    QuadratureOp(Direction direction, std::size_t modes, std::size_t cutoff);

    Direction direction() const {
        return direction_;
    }
    const Eigen::MatrixXcd &matrix() const {
        return matrix_;
    }

   private:
    Direction direction_;
    Eigen::MatrixXcd matrix_;
};

/// Truncated annihilation operator, a|k> = sqrt(k)|k-1>.
Eigen::MatrixXcd annihilation(std::size_t cutoff);
/// Lifts a single-mode operator to `mode` of a `modes`-mode space.
Eigen::MatrixXcd embed(const Eigen::MatrixXcd &op, std::size_t mode, std::size_t modes);

struct Vacuum {};
struct FockNumber {
    std::size_t photons = 0;
};
struct Thermal {
    double mean_photons = 0.0;
};
struct Coherent {
    std::complex<double> alpha;
};
/// S(r) rho_thermal(N) S(r)^dag with S(r) = exp(r (a^2 - a^dag^2) / 2), which
/// squeezes Q: gamma = (2N + 1) diag(e^{-2r}, e^{2r}).
struct SqueezedThermal {
    double r = 0.0;
    double mean_photons = 0.0;
};
using StateSpec = std::variant<Vacuum, FockNumber, Thermal, Coherent, SqueezedThermal>;

std::string describe(const StateSpec &spec);
double mean_photon_number(const StateSpec &spec);
/// Gaussian description of the requested state; empty for Fock number states k >= 1.
std::optional<GaussianState> gaussian_equivalent(const StateSpec &spec);

/// Cutoff for a state with per-mode mean photon number N: the larger of
/// ceil(N + 10 sqrt(N + 1) + 15) and the smallest D whose thermal tail is
/// below kTailTolerance; multiplied by `gain` for amplifier outputs.
std::size_t recommended_cutoff(double mean_photons, double gain = 1.0);

/// Throws CutoffError if more than kTailTolerance of the population lies at
/// or beyond the cutoff.
FockDensityMatrix build_state(const StateSpec &spec, std::size_t cutoff);

FockDensityMatrix tensor(const FockDensityMatrix &a, const FockDensityMatrix &b);
/// Reduced state of mode `keep` (0 or 1) of a two-mode state.
FockDensityMatrix partial_trace(const FockDensityMatrix &two_mode, std::size_t keep);

/// Tr_B[U (rho_A (x) rho_B) U^dag] truncated to `output_cutoff` levels, with U
/// the beam-splitter or two-mode-squeezing unitary. Throws CutoffError when
/// trace_leak of the result exceeds kLeakTolerance.
FockDensityMatrix two_mode_mix(const FockDensityMatrix &a, const FockDensityMatrix &b, const MixingParams &params,
                               std::size_t output_cutoff);

double vn_entropy(const FockDensityMatrix &rho);
/// S(rho || sigma); +infinity when rho has weight outside the support of sigma.
double relative_entropy(const FockDensityMatrix &rho, const FockDensityMatrix &sigma);

/// L(rho) = -1/4 sum_j ([Q_j, [Q_j, rho]] + [P_j, [P_j, rho]]).
Eigen::MatrixXcd liouvillian(const FockDensityMatrix &rho);

/// e^{tL} rho by fixed-step RK4. steps == 0 selects max(100, ceil(200 t)).
/// The result is compared against a run with twice the steps; a difference
/// above 1e-7 raises AccuracyError.
FockDensityMatrix liouville_evolve(const FockDensityMatrix &rho, double t, std::size_t steps = 0);

/// D rho D^dag with D = exp(-i theta P_j) for Q_j and exp(i theta Q_j) for
/// P_j, so that <R> increases by theta.
FockDensityMatrix displace_fock(const FockDensityMatrix &rho, Direction direction, double theta);

/// (1 - tr rho) plus the population of the highest Fock layer.
double trace_leak(const FockDensityMatrix &rho);

double trace_distance(const FockDensityMatrix &a, const FockDensityMatrix &b);

/// First and second moments in the Gaussian conventions (d = <R>,
/// gamma_ij = <{R_i, R_j}> - 2 d_i d_j).
struct Moments {
    Eigen::MatrixXd covariance;
    Eigen::VectorXd displacement;
};
Moments moments(const FockDensityMatrix &rho);

}  // namespace qepi::fock

#endif  // QEPI_FOCK_H
