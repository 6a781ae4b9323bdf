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

#include <gtest/gtest.h>

#include "qepi/errors.h"
#include "qepi/random.h"

using namespace qepi;

namespace {

GeneratorParams wide() {
    return GeneratorParams{1.0, 20.0, 1.5, 2.0};
}

double max_abs(const Eigen::MatrixXd &m) {
    return m.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(MixingParams, invariants) {
    const MixingParams bs = MixingParams::beam_splitter(0.3);
    EXPECT_EQ(bs.kind(), MixerKind::beam_splitter);
    EXPECT_DOUBLE_EQ(bs.lambda_a() + bs.lambda_b(), 1.0);
    const MixingParams amp = MixingParams::amplifier(2.5);
    EXPECT_EQ(amp.kind(), MixerKind::amplifier);
    EXPECT_DOUBLE_EQ(amp.lambda_a() - amp.lambda_b(), 1.0);
    EXPECT_THROW(MixingParams::beam_splitter(1.5), DomainError);
    EXPECT_THROW(MixingParams::beam_splitter(-0.1), DomainError);
    EXPECT_THROW(MixingParams::amplifier(0.9), DomainError);
    EXPECT_THROW(MixingParams::amplifier(16.5), DomainError);
    EXPECT_NO_THROW(MixingParams::amplifier(16.0));
}

TEST(TimeReversal, is_involution) {
    const Eigen::MatrixXd t = TimeReversal(3).matrix();
    EXPECT_EQ(t, t.transpose());
    EXPECT_TRUE((t * t).isIdentity(0));
    EXPECT_EQ(t(1, 1), -1.0);
    EXPECT_EQ(t(2, 2), 1.0);
}

TEST(mix, vacuum_inputs) {
    const GaussianState v = GaussianState::vacuum(1);
    for (double l : {0.0, 0.3, 1.0}) {
        EXPECT_TRUE(mix(v, v, MixingParams::beam_splitter(l)).covariance().isIdentity(1e-15));
    }
    const GaussianState amp = mix(v, v, MixingParams::amplifier(2.0));
    EXPECT_TRUE(amp.covariance().isApprox(3.0 * Eigen::MatrixXd::Identity(2, 2), 1e-15));
    EXPECT_NEAR(entropy(amp), 2.0 * std::log(2.0), 1e-14);
}

TEST(mix, thermal_and_vacuum) {
    const GaussianState c = mix(GaussianState::thermal(1, 3.0), GaussianState::vacuum(1), MixingParams::beam_splitter(0.5));
    EXPECT_TRUE(c.covariance().isApprox(2.0 * Eigen::MatrixXd::Identity(2, 2), 1e-15));
    EXPECT_NEAR(entropy(c), 0.954771252442219, 1e-12);
}

TEST(mix, displacement_rules) {
    const GaussianState a(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1.0, 2.0));
    const GaussianState b(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(-0.5, 0.25));
    const GaussianState bs = mix(a, b, MixingParams::beam_splitter(0.25));
    EXPECT_NEAR(bs.displacement()(0), 0.5 * 1.0 + std::sqrt(0.75) * -0.5, 1e-15);
    EXPECT_NEAR(bs.displacement()(1), 0.5 * 2.0 + std::sqrt(0.75) * 0.25, 1e-15);
    // amplifier conjugates B: P_B enters with a minus sign
    const GaussianState amp = mix(a, b, MixingParams::amplifier(2.0));
    EXPECT_NEAR(amp.displacement()(0), std::sqrt(2.0) * 1.0 + 1.0 * -0.5, 1e-15);
    EXPECT_NEAR(amp.displacement()(1), std::sqrt(2.0) * 2.0 - 1.0 * 0.25, 1e-15);
}

TEST(mix, amplifier_time_reverses_b) {
    Eigen::MatrixXd gb(2, 2);
    gb << 2.0, 0.7, 0.7, 1.5;
    const GaussianState b(gb, Eigen::VectorXd::Zero(2));
    const GaussianState c = mix(GaussianState::vacuum(1), b, MixingParams::amplifier(3.0));
    EXPECT_NEAR(c.covariance()(0, 1), -2.0 * 0.7, 1e-15);
    EXPECT_NEAR(c.covariance()(0, 0), 3.0 + 2.0 * 2.0, 1e-15);
}

TEST(mix, endpoint_identities) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const GaussianState a = random_gaussian_state(2, derive_seed(seed, "a", 0), wide());
        const GaussianState b = random_gaussian_state(2, derive_seed(seed, "b", 0), wide());
        EXPECT_LT(max_abs(mix(a, b, MixingParams::beam_splitter(1.0)).covariance() - a.covariance()), 1e-15);
        EXPECT_LT(max_abs(mix(a, b, MixingParams::beam_splitter(0.0)).covariance() - b.covariance()), 1e-15);
        EXPECT_LT((mix(a, b, MixingParams::beam_splitter(0.0)).displacement() - b.displacement()).cwiseAbs().maxCoeff(),
                  1e-15);
        const GaussianState k1 = mix(a, b, MixingParams::amplifier(1.0));
        EXPECT_LT(max_abs(k1.covariance() - a.covariance()), 1e-15);
        EXPECT_LT((k1.displacement() - a.displacement()).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(mix, rejects_mode_mismatch) {
    EXPECT_THROW(mix(GaussianState::vacuum(1), GaussianState::vacuum(2), MixingParams::beam_splitter(0.5)),
                 ValidationError);
}

TEST(mix, preserves_physicality) {
    // GaussianState construction re-validates, so a throw here is a failure.
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const GaussianState a = random_gaussian_state(1, derive_seed(3, "a", i), wide());
        const GaussianState b = random_gaussian_state(1, derive_seed(3, "b", i), wide());
        const MixingParams p = i % 2 == 0 ? MixingParams::beam_splitter(0.1 + 0.8 * static_cast<double>(i % 7) / 6.0)
                                          : MixingParams::amplifier(1.0 + static_cast<double>(i % 5));
        ASSERT_NO_THROW(add_noise(mix(a, b, p), 0.5)) << i;
    }
}

TEST(add_noise, examples) {
    const GaussianState v = GaussianState::vacuum(1);
    EXPECT_EQ(add_noise(v, 0.0).covariance(), v.covariance());
    const GaussianState n = add_noise(v, 2.0);
    EXPECT_TRUE(n.covariance().isApprox(3.0 * Eigen::MatrixXd::Identity(2, 2), 0));
    EXPECT_NEAR(entropy(n), 2.0 * std::log(2.0), 1e-14);
    EXPECT_THROW(add_noise(v, -0.1), DomainError);
}

TEST(add_noise, semigroup_is_exact) {
    const GaussianState s = random_gaussian_state(2, 99, wide());
    const GaussianState two_step = add_noise(add_noise(s, 0.25), 0.75);
    const GaussianState one_step = add_noise(s, 1.0);
    EXPECT_EQ(two_step.covariance(), one_step.covariance());
    EXPECT_EQ(two_step.displacement(), one_step.displacement());
}

TEST(add_noise, entropy_non_decreasing) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const GaussianState s = random_gaussian_state(1 + seed % 2, seed, wide());
        double prev = entropy(s);
        for (double t = 0.05; t < 20.0; t *= 1.6) {
            const double cur = entropy(add_noise(s, t));
            EXPECT_GE(cur, prev - 1e-12);
            prev = cur;
        }
    }
}

TEST(noise_commutation_check, examples) {
    const GaussianState a = random_gaussian_state(1, 5, wide());
    const GaussianState b = random_gaussian_state(1, 6, wide());
    EXPECT_TRUE(noise_commutation_check(a, b, MixingParams::beam_splitter(0.3), 0.0, 0.0).passes);
    const EqualityReport r = noise_commutation_check(a, b, MixingParams::beam_splitter(0.3), 1.0, 2.0);
    EXPECT_TRUE(r.passes);
    EXPECT_LT(r.deviation, 1e-12);
    const EqualityReport amp = noise_commutation_check(a, b, MixingParams::amplifier(1.5), 2.0, 1.0);
    EXPECT_TRUE(amp.passes);
    EXPECT_NEAR(amp.inputs.at("t_C").get<double>(), 3.5, 1e-15);
}

TEST(noise_commutation_check, random_trials) {
    Rng rng(11);
    for (std::uint64_t i = 0; i < 500; ++i) {
        const GaussianState a = random_gaussian_state(2, derive_seed(8, "a", i), wide());
        const GaussianState b = random_gaussian_state(2, derive_seed(8, "b", i), wide());
        const MixingParams p = i % 2 ? MixingParams::beam_splitter(rng.uniform()) : MixingParams::amplifier(rng.uniform(1.0, 4.0));
        EXPECT_TRUE(noise_commutation_check(a, b, p, rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)).passes) << i;
    }
}

TEST(displace, shifts_displacement_only) {
    const GaussianState s = GaussianState::thermal(2, 2.0);
    EXPECT_EQ(displace(s, 0, 0.0).displacement(), s.displacement());
    const GaussianState moved = displace(displace(s, 0, 1.0), 1, 1.0);
    EXPECT_EQ(moved.displacement(), (Eigen::VectorXd(4) << 1, 1, 0, 0).finished());
    EXPECT_EQ(moved.covariance(), s.covariance());
    EXPECT_THROW(displace(s, 4, 1.0), DomainError);
}

TEST(displace, commutes_with_mixing) {
    // Translating A by w_A theta and B by w_B theta (B time-reversed for the
    // amplifier) translates C by w_C theta with w_C = sqrt(l_A) w_A + sqrt(l_B) w_B.
    const GaussianState a = random_gaussian_state(1, 21, wide());
    const GaussianState b = random_gaussian_state(1, 22, wide());
    const double wa = 0.8;
    const double wb = 1.7;
    const double theta = 0.3;
    for (const MixingParams &p : {MixingParams::beam_splitter(0.35), MixingParams::amplifier(2.5)}) {
        for (std::size_t r = 0; r < 2; ++r) {
            const double sign_b = (p.kind() == MixerKind::amplifier && r == 1) ? -1.0 : 1.0;
            const GaussianState lhs = mix(displace(a, r, wa * theta), displace(b, r, sign_b * wb * theta), p);
            const double wc = std::sqrt(p.lambda_a()) * wa + std::sqrt(p.lambda_b()) * wb;
            const GaussianState rhs = displace(mix(a, b, p), r, wc * theta);
            EXPECT_LT((lhs.displacement() - rhs.displacement()).cwiseAbs().maxCoeff(), 1e-14);
        }
    }
}

TEST(time_reverse, examples) {
    const GaussianState th = GaussianState::thermal(1, 4.0);
    EXPECT_EQ(time_reverse(th).covariance(), th.covariance());
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const GaussianState s = random_gaussian_state(2, seed, wide());
        const GaussianState twice = time_reverse(time_reverse(s));
        EXPECT_EQ(twice.covariance(), s.covariance());
        EXPECT_EQ(twice.displacement(), s.displacement());
        EXPECT_NEAR(entropy(time_reverse(s)), entropy(s), 1e-10);
    }
}
