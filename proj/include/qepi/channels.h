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

#ifndef QEPI_CHANNELS_H
#define QEPI_CHANNELS_H

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "qepi/report.h"
#include "qepi/symplectic.h"

namespace qepi {

enum class MixerKind { beam_splitter, amplifier };

/// Largest amplifier gain accepted anywhere in the library.
inline constexpr double kMaxAmplifierGain = 16.0;

/// Beam splitter of transmissivity lambda (lambda_A = lambda,
/// lambda_B = 1 - lambda) or amplifier of gain kappa (lambda_A = kappa,
/// lambda_B = kappa - 1).
class MixingParams {
   public:
    static MixingParams beam_splitter(double transmissivity);
    static MixingParams amplifier(double gain);

    MixerKind kind() const {
        return kind_;
    }
    double lambda_a() const {
        return lambda_a_;
    }
    double lambda_b() const {
        return lambda_b_;
    }
    /// lambda for a beam splitter, kappa for an amplifier.
    double coupling() const {
        return lambda_a_;
    }
    std::string describe() const;

   private:
    MixingParams(MixerKind kind, double lambda_a, double lambda_b) : kind_(kind), lambda_a_(lambda_a), lambda_b_(lambda_b) {
    }

    MixerKind kind_;
    double lambda_a_;
    double lambda_b_;
};

/// diag(+1, -1, ..., +1, -1): flips the sign of every P quadrature.
class TimeReversal {
   public:
    explicit TimeReversal(std::size_t modes);

    const Eigen::MatrixXd &matrix() const {
        return matrix_;
    }

   private:
    Eigen::MatrixXd matrix_;
};

/// Output mode C of the beam splitter / amplifier acting on independent
/// inputs A and B.
GaussianState mix(const GaussianState &a, const GaussianState &b, const MixingParams &params);

/// Additive Gaussian noise semigroup: gamma -> gamma + t * 1, d unchanged.
GaussianState add_noise(const GaussianState &state, double t);

/// Compares noise-then-mix against mix-then-noise with t_C = lambda_A t_A + lambda_B t_B.
EqualityReport noise_commutation_check(const GaussianState &a, const GaussianState &b, const MixingParams &params,
                                       double t_a, double t_b, double tolerance = 1e-12);

/// Shift the displacement by `shift` along quadrature `direction`
/// (0 -> Q1, 1 -> P1, 2 -> Q2, ...).
GaussianState displace(const GaussianState &state, std::size_t direction, double shift);

GaussianState time_reverse(const GaussianState &state);

}  // namespace qepi

#endif  // QEPI_CHANNELS_H
