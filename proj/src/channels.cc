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

#include "qepi/channels.h"

#include <cmath>
#include <sstream>

#include "qepi/errors.h"

namespace qepi {

MixingParams MixingParams::beam_splitter(double transmissivity) {
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        std::ostringstream msg;
        msg << "beam splitter transmissivity must lie in [0, 1], got " << transmissivity;
        throw DomainError(msg.str());
    }
    return MixingParams(MixerKind::beam_splitter, transmissivity, 1.0 - transmissivity);
}

MixingParams MixingParams::amplifier(double gain) {
    if (!(gain >= 1.0 && gain <= kMaxAmplifierGain)) {
        std::ostringstream msg;
        msg << "amplifier gain must lie in [1, " << kMaxAmplifierGain << "], got " << gain;
        throw DomainError(msg.str());
    }
    return MixingParams(MixerKind::amplifier, gain, gain - 1.0);
}

std::string MixingParams::describe() const {
    std::ostringstream out;
    out << (kind_ == MixerKind::beam_splitter ? "beam_splitter(lambda=" : "amplifier(kappa=") << lambda_a_ << ")";
    return out.str();
}

TimeReversal::TimeReversal(std::size_t modes) : matrix_(Eigen::MatrixXd::Identity(2 * modes, 2 * modes)) {
    for (std::size_t j = 0; j < modes; ++j) {
        matrix_(2 * j + 1, 2 * j + 1) = -1.0;
    }
}

GaussianState mix(const GaussianState &a, const GaussianState &b, const MixingParams &params) {
    if (a.modes() != b.modes()) {
        std::ostringstream msg;
        msg << "mix: mode-count mismatch (" << a.modes() << " vs " << b.modes() << ")";
        throw ValidationError(msg.str());
    }
    const double la = params.lambda_a();
    const double lb = params.lambda_b();
    if (params.kind() == MixerKind::beam_splitter) {
        return GaussianState(la * a.covariance() + lb * b.covariance(),
                             std::sqrt(la) * a.displacement() + std::sqrt(lb) * b.displacement());
    }
    const Eigen::MatrixXd t = TimeReversal(a.modes()).matrix();
    return GaussianState(la * a.covariance() + lb * (t * b.covariance() * t),
                         std::sqrt(la) * a.displacement() + std::sqrt(lb) * (t * b.displacement()));
}

GaussianState add_noise(const GaussianState &state, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        std::ostringstream msg;
        msg << "add_noise: time must be finite and >= 0, got " << t;
        throw DomainError(msg.str());
    }
    Eigen::MatrixXd gamma = state.covariance();
    gamma.diagonal().array() += t;
    return GaussianState(std::move(gamma), state.displacement());
}

EqualityReport noise_commutation_check(const GaussianState &a, const GaussianState &b, const MixingParams &params,
                                       double t_a, double t_b, double tolerance) {
    const double t_c = params.lambda_a() * t_a + params.lambda_b() * t_b;
    GaussianState noise_first = mix(add_noise(a, t_a), add_noise(b, t_b), params);
    GaussianState mix_first = add_noise(mix(a, b, params), t_c);

    double dev_gamma = (noise_first.covariance() - mix_first.covariance()).cwiseAbs().maxCoeff();
    double dev_d = (noise_first.displacement() - mix_first.displacement()).cwiseAbs().maxCoeff();

    EqualityReport r;
    r.name = "noise_commutation";
    r.lhs = entropy(noise_first);
    r.rhs = entropy(mix_first);
    r.deviation = std::max(dev_gamma, dev_d);
    r.relative = false;
    r.tolerance = tolerance;
    r.passes = r.deviation <= tolerance;
    r.inputs = {{"mixer", params.describe()}, {"t_A", t_a}, {"t_B", t_b}, {"t_C", t_c},
                {"max_dev_gamma", dev_gamma}, {"max_dev_d", dev_d}};
    return r;
}

GaussianState displace(const GaussianState &state, std::size_t direction, double shift) {
    if (direction >= 2 * state.modes()) {
        std::ostringstream msg;
        msg << "displace: quadrature index " << direction << " out of range for " << state.modes() << " modes";
        throw DomainError(msg.str());
    }
    Eigen::VectorXd d = state.displacement();
    d(static_cast<Eigen::Index>(direction)) += shift;
    return GaussianState(state.covariance(), std::move(d));
}

GaussianState time_reverse(const GaussianState &state) {
    const Eigen::MatrixXd t = TimeReversal(state.modes()).matrix();
    return GaussianState(t * state.covariance() * t, t * state.displacement());
}

}  // namespace qepi
