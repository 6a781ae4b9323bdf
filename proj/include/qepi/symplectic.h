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

#ifndef QEPI_SYMPLECTIC_H
#define QEPI_SYMPLECTIC_H

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qepi {

/// Smallest admissible symplectic eigenvalue is 1 - kPhysicalityTolerance.
inline constexpr double kPhysicalityTolerance = 1e-9;
/// Maximum absolute asymmetry accepted in a covariance matrix.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Phase-space structure for n modes in interleaved (Q1, P1, ..., Qn, Pn)
/// ordering: a block diagonal of [[0, 1], [-1, 0]].
class SymplecticForm {
   public:
    explicit SymplecticForm(std::size_t modes);

    std::size_t modes() const {
        return modes_;
    }
    const Eigen::MatrixXd &matrix() const {
        return matrix_;
    }

   private:
    std::size_t modes_;
    Eigen::MatrixXd matrix_;
};

/// n-mode Gaussian state: covariance matrix (vacuum = identity) and
/// displacement vector. Construction validates symmetry and physicality, so
/// every live instance is a physical state.
class GaussianState {
   public:
    GaussianState(Eigen::MatrixXd covariance, Eigen::VectorXd displacement);

    static GaussianState vacuum(std::size_t modes);
    /// Thermal state with every symplectic eigenvalue equal to `nu`.
    static GaussianState thermal(std::size_t modes, double nu);

    std::size_t modes() const {
        return modes_;
    }
    const Eigen::MatrixXd &covariance() const {
        return covariance_;
    }
    const Eigen::VectorXd &displacement() const {
        return displacement_;
    }

   private:
    std::size_t modes_;
    Eigen::MatrixXd covariance_;
    Eigen::VectorXd displacement_;
};

struct SpectrumReport {
    std::vector<double> nus;  // ascending
    double min_nu = 0.0;
    bool physical = false;
};

/// Entropy in nats of a single-mode thermal state with mean photon number N.
double g(double mean_photons);
/// Inverse of g on [0, inf).
double g_inv(double entropy_nats);

/// Symplectic eigenvalues of a symmetric covariance matrix. Throws
/// ValidationError if `covariance` is not square, even-sized and symmetric.
SpectrumReport symplectic_eigenvalues(const Eigen::MatrixXd &covariance);
SpectrumReport symplectic_eigenvalues(const GaussianState &state);

/// von Neumann entropy of a Gaussian state, sum over modes of g((nu - 1) / 2).
double entropy(const GaussianState &state);
/// Same as entropy() for a bare covariance matrix; rejects unphysical input.
double covariance_entropy(const Eigen::MatrixXd &covariance);

double entropy_power(double entropy_nats, std::size_t modes);
/// Entropy photon number g_inv(S / n).
double photon_number(double entropy_nats, std::size_t modes);
/// Deviation of g_inv(ln x) from its asymptote x/e - 1/2, for x >= 1.
double delta(double entropy_power_value);

struct GeneratorParams {
    double nu_min = 1.0;
    double nu_max = 1.0;
    double r_max = 0.0;
    double displacement_max = 0.0;
};

struct RandomDraw {
    GaussianState state;
    std::vector<double> nus;  // drawn symplectic eigenvalues, in mode order
};

/// gamma = S diag(nu_1, nu_1, ..., nu_n, nu_n) S^T with nu_k log-uniform in
/// [nu_min, nu_max] and S built from random rotations, squeezers (|r| <= r_max)
/// and inter-mode beam splitters. Deterministic in `seed`.
RandomDraw draw_random_gaussian(std::size_t modes, std::uint64_t seed, const GeneratorParams &params);
GaussianState random_gaussian_state(std::size_t modes, std::uint64_t seed, const GeneratorParams &params);

/// Random symplectic matrix from the same layered construction.
Eigen::MatrixXd random_symplectic(std::size_t modes, std::uint64_t seed, double r_max);

/// max |S Omega S^T - Omega|.
double symplectic_defect(const Eigen::MatrixXd &s);

}  // namespace qepi

#endif  // QEPI_SYMPLECTIC_H
