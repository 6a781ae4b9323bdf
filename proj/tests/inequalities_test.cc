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

#include "qepi/inequalities.h"

#include <cmath>

#include <gtest/gtest.h>

#include "qepi/errors.h"
#include "qepi/fock.h"

using namespace qepi;

namespace {

const double kE = std::exp(1.0);

double thermal_photons(const GaussianState &s) {
    return (s.covariance().trace() / 2.0 - 1.0) / 2.0;
}

}  // namespace

TEST(qepi_check, examples) {
    const MixingParams half = MixingParams::beam_splitter(0.5);
    const InequalityReport eq = qepi_check(1.3, 1.3, 1.3, 1, half);
    EXPECT_NEAR(eq.slack, 0.0, 1e-12);
    EXPECT_TRUE(eq.holds);

    const InequalityReport r = qepi_check(entropy(GaussianState::thermal(1, 3.0)), 0.0, g(0.5), 1, half);
    EXPECT_NEAR(r.lhs, std::exp(g(0.5)), 1e-12);
    EXPECT_NEAR(r.lhs, 2.598, 1e-3);
    EXPECT_NEAR(r.rhs, 2.5, 1e-12);
    EXPECT_TRUE(r.holds);

    const InequalityReport amp = qepi_check(0.0, 0.0, 2.0 * std::log(2.0), 1, MixingParams::amplifier(2.0));
    EXPECT_NEAR(amp.lhs, 4.0, 1e-12);
    EXPECT_NEAR(amp.rhs, 3.0, 1e-12);
    EXPECT_TRUE(amp.holds);
}

TEST(qepi_check, tolerance_rule) {
    const MixingParams half = MixingParams::beam_splitter(0.5);
    // rhs = e: relative violations of 5e-10 are tolerated, 2e-9 are not
    EXPECT_TRUE(qepi_check(1.0, 1.0, 1.0 + std::log1p(-5e-10), 1, half).holds);
    EXPECT_FALSE(qepi_check(1.0, 1.0, 1.0 + std::log1p(-2e-9), 1, half).holds);
    EXPECT_TRUE(qepi_check(1.0, 1.0, 1.0 + std::log1p(-5e-7), 1, half, kOracleTolerance).holds);
    EXPECT_THROW(qepi_check(-0.1, 0.0, 0.0, 1, half), DomainError);
    EXPECT_THROW(qepi_check(0.0, 0.0, 0.0, 0, half), DomainError);
}

TEST(qepi_check, per_mode_exponent) {
    const GaussianState a = GaussianState::thermal(2, 3.0);
    const GaussianState b = GaussianState::vacuum(2);
    const MixingParams p = MixingParams::beam_splitter(0.5);
    const InequalityReport r = qepi_check(entropy(a), entropy(b), entropy(mix(a, b, p)), 2, p);
    EXPECT_NEAR(r.lhs, std::exp(g(0.5)), 1e-12);
    EXPECT_NEAR(r.rhs, 2.5, 1e-12);
}

TEST(linear_check, examples) {
    const InequalityReport amp = linear_check(0.0, 0.0, 2.0 * std::log(2.0), 1, MixingParams::amplifier(2.0));
    EXPECT_NEAR(amp.rhs, std::log(3.0), 1e-12);
    EXPECT_TRUE(amp.holds);
    const double s = entropy(GaussianState::thermal(1, 4.0));
    const InequalityReport eq = linear_check(s, s, s, 1, MixingParams::beam_splitter(0.3));
    EXPECT_NEAR(eq.slack, 0.0, 1e-12);
}

TEST(linear_check, implied_by_qepi) {
    const MixingParams params[] = {MixingParams::beam_splitter(0.2), MixingParams::beam_splitter(0.7),
                                   MixingParams::amplifier(1.5), MixingParams::amplifier(4.0)};
    for (const MixingParams &p : params) {
        for (double sa = 0.0; sa < 4.0; sa += 0.37) {
            for (double sb = 0.0; sb < 4.0; sb += 0.41) {
                // the smallest S_C allowed by the qEPI
                const double rhs = p.lambda_a() * std::exp(sa) + p.lambda_b() * std::exp(sb);
                const double sc = std::log(rhs);
                ASSERT_TRUE(qepi_check(sa, sb, sc, 1, p).holds);
                EXPECT_TRUE(linear_check(sa, sb, sc, 1, p).holds) << p.describe() << " " << sa << " " << sb;
            }
        }
    }
}

TEST(epni_gap, examples) {
    EXPECT_NEAR(epni_gap_bound(), 1.0 / kE - 0.5, 1e-15);
    for (double lambda : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        const GaussianState a = GaussianState::thermal(1, 3.0);
        const GaussianState b = GaussianState::thermal(1, 7.5);
        const GaussianState c = mix(a, b, MixingParams::beam_splitter(lambda));
        const InequalityReport r = epni_gap(thermal_photons(a), thermal_photons(b), thermal_photons(c), lambda);
        EXPECT_NEAR(r.lhs, 0.0, 1e-12) << lambda;
        EXPECT_TRUE(r.holds);
        EXPECT_TRUE(r.inputs.at("conjecture_holds").get<bool>());
    }
    const InequalityReport v = epni_gap(1.0, 0.0, 0.5, 0.5);
    EXPECT_NEAR(v.lhs, 0.0, 1e-15);
    EXPECT_THROW(epni_gap(-1.0, 0.0, 0.0, 0.5), DomainError);
    EXPECT_THROW(epni_gap(0.0, 0.0, 0.0, 1.5), DomainError);
}

TEST(epni_gap, records_conjecture_failure_without_failing) {
    const InequalityReport r = epni_gap(1.0, 1.0, 0.95, 0.5);
    EXPECT_TRUE(r.holds);
    EXPECT_FALSE(r.inputs.at("conjecture_holds").get<bool>());
    EXPECT_FALSE(epni_gap(1.0, 1.0, 0.8, 0.5).holds);
}

TEST(epni_amplifier_gap, vacuum_inputs) {
    // vacuum amplified by kappa has N = kappa - 1, equal to the conjectured value
    const InequalityReport r = epni_amplifier_gap(0.0, 0.0, 1.0, 2.0);
    EXPECT_NEAR(r.lhs, 0.0, 1e-15);
    EXPECT_NEAR(r.rhs, -3.0 * (0.5 - 1.0 / kE), 1e-15);
    EXPECT_TRUE(r.holds);
}

TEST(moe, examples) {
    for (double s : {0.0, 0.3, 1.0, 4.0}) {
        EXPECT_NEAR(moe_delta(s, 1.0), 0.0, 1e-10) << s;
        EXPECT_NEAR(moe_bound(s, 1.0), s, 1e-12);
    }
    for (double l : {0.0, 0.25, 0.5, 1.0}) {
        EXPECT_NEAR(moe_delta(0.0, l), 0.0, 1e-12) << l;
    }
    EXPECT_NEAR(moe_bound(1.0, 0.5), 0.6201145, 1e-6);
    EXPECT_NEAR(moe_conjectured(1.0, 0.5), 0.6587817, 1e-6);
    EXPECT_NEAR(moe_delta(1.0, 0.5), 0.0386672, 1e-6);
    EXPECT_THROW(moe_delta(-1.0, 0.5), DomainError);
    EXPECT_THROW(moe_delta(1.0, -0.5), DomainError);
}

TEST(delta_surface, nonnegative_and_bounded) {
    DeltaSurfaceConfig cfg;
    cfg.s_points = 60;
    cfg.lambda_points = 61;
    const DeltaSurface surf = delta_surface(cfg);
    EXPECT_EQ(surf.samples.size(), 60u * 61u);
    EXPECT_GE(surf.min_delta, -1e-12);
    EXPECT_GE(surf.refined_max.delta, surf.grid_max.delta);
    EXPECT_GT(surf.refined_max.delta, 0.09);
    EXPECT_LT(surf.refined_max.delta, 0.11);
    EXPECT_NEAR(surf.samples.front().s_bar, 0.01, 1e-15);
    EXPECT_NEAR(surf.samples.back().s_bar, 6.0, 1e-12);
}

TEST(ratio_trajectory, identical_thermal_inputs_stay_at_one) {
    const GaussianState a = GaussianState::thermal(1, 2.0);
    const auto pts = ratio_trajectory(a, a, MixingParams::beam_splitter(0.4), 50.0);
    for (const TrajectoryPoint &p : pts) {
        EXPECT_NEAR(p.ratio, 1.0, 1e-9) << p.t;
    }
}

TEST(ratio_trajectory, thermal_and_vacuum) {
    const MixingParams p = MixingParams::beam_splitter(0.5);
    const auto pts = ratio_trajectory(GaussianState::thermal(1, 3.0), GaussianState::vacuum(1), p, 200.0);
    ASSERT_GT(pts.size(), 10u);
    EXPECT_EQ(pts.front().t, 0.0);
    EXPECT_NEAR(pts.front().ratio, 2.5 / std::exp(g(0.5)), 1e-12);
    EXPECT_NEAR(pts.front().ratio, 0.962, 1e-3);
    EXPECT_NEAR(pts.back().t, 200.0, 1e-9);
    EXPECT_GT(pts.back().ratio, 0.999);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        EXPECT_GE(pts[i].ratio - pts[i - 1].ratio, -1e-9) << pts[i].t;
        EXPECT_LE(pts[i].ratio, 1.0 + 1e-6);
        EXPECT_NEAR(pts[i].t_c, 0.5 * pts[i].t_a + 0.5 * pts[i].t_b, 1e-10 * std::max(1.0, pts[i].t_c));
    }
}

TEST(ratio_trajectory, amplifier_vacuum) {
    const auto pts =
        ratio_trajectory(GaussianState::vacuum(1), GaussianState::vacuum(1), MixingParams::amplifier(2.0), 200.0);
    EXPECT_NEAR(pts.front().ratio, 0.75, 1e-12);
    EXPECT_GT(pts.back().ratio, 0.999);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        EXPECT_GE(pts[i].ratio - pts[i - 1].ratio, -1e-9) << pts[i].t;
        EXPECT_NEAR(pts[i].t_c, 2.0 * pts[i].t_a + 1.0 * pts[i].t_b, 1e-10 * std::max(1.0, pts[i].t_c));
    }
}

TEST(ratio_trajectory, rejects_bad_inputs) {
    const GaussianState v = GaussianState::vacuum(1);
    EXPECT_THROW(ratio_trajectory(v, v, MixingParams::beam_splitter(0.5), 0.0), DomainError);
    EXPECT_THROW(ratio_trajectory(v, GaussianState::vacuum(2), MixingParams::beam_splitter(0.5), 1.0), ValidationError);
}

TEST(asymptotic_check, examples) {
    const AsymptoticReport vac = asymptotic_check(GaussianState::vacuum(1), {0.0, 10.0, 100.0, 1000.0});
    EXPECT_TRUE(vac.holds);
    ASSERT_EQ(vac.points.size(), 4u);
    EXPECT_NEAR(vac.points[3].power / (kE * 500.5), 1.0, 1e-6);
    EXPECT_NEAR(vac.points[3].power / (kE * 500.0), 1.001, 1e-4);
    EXPECT_TRUE(vac.points[0].deviation_holds);
    EXPECT_TRUE(std::isfinite(vac.points[0].power));

    const AsymptoticReport th = asymptotic_check(GaussianState::thermal(1, 5.0), {1000.0});
    EXPECT_TRUE(th.holds);
    EXPECT_NEAR(th.lambda0, 5.0, 1e-12);
    EXPECT_NEAR(th.points[0].allowed, 0.007, 1e-12);
    EXPECT_LE(th.points[0].deviation, 0.007);
    EXPECT_THROW(asymptotic_check(GaussianState::vacuum(1), {-1.0}), DomainError);
}

TEST(random_qepi_suite, degenerate_generator) {
    SuiteConfig cfg;
    cfg.trials = 1;
    cfg.generator = GeneratorParams{1.0, 1.0, 0.0, 0.0};
    const SuiteSummary s = random_qepi_suite(cfg, MixingParams::beam_splitter(0.3));
    EXPECT_TRUE(s.failures.empty());
    EXPECT_NEAR(s.min_qepi_slack, 0.0, 1e-12);
    EXPECT_NEAR(s.min_linear_slack, 0.0, 1e-12);
    EXPECT_NEAR(s.min_epni_gap, 0.0, 1e-12);
    EXPECT_EQ(s.stam_skipped, 1u);
}

TEST(random_qepi_suite, sweep_and_determinism) {
    SuiteConfig cfg;
    cfg.trials = 2000;
    cfg.seed = 123;
    cfg.generator = GeneratorParams{1.0, 20.0, 1.5, 2.0};
    const MixingParams p = MixingParams::beam_splitter(0.7);
    const SuiteSummary first = random_qepi_suite(cfg, p);
    EXPECT_TRUE(first.failures.empty());
    EXPECT_GE(first.min_qepi_slack, -1e-9);
    EXPECT_GE(first.min_epni_gap, epni_gap_bound());
    EXPECT_EQ(to_json(first).dump(), to_json(random_qepi_suite(cfg, p)).dump());
    cfg.seed = 124;
    EXPECT_NE(to_json(first).dump(), to_json(random_qepi_suite(cfg, p)).dump());
}

TEST(random_qepi_suite, amplifier_and_two_modes) {
    SuiteConfig cfg;
    cfg.trials = 500;
    cfg.seed = 9;
    cfg.modes = 2;
    cfg.generator = GeneratorParams{1.0, 20.0, 1.5, 2.0};
    for (double kappa : {1.1, 4.0}) {
        const SuiteSummary s = random_qepi_suite(cfg, MixingParams::amplifier(kappa));
        EXPECT_TRUE(s.failures.empty()) << kappa;
    }
}

TEST(oracle_qepi, non_gaussian_inputs) {
    using namespace qepi::fock;
    struct Case {
        StateSpec a;
        StateSpec b;
        std::size_t cutoff;
    };
    const Case cases[] = {{FockNumber{1}, FockNumber{2}, 12}, {FockNumber{1}, Thermal{1.0}, 60}};
    for (const Case &c : cases) {
        const FockDensityMatrix a = build_state(c.a, c.cutoff);
        const FockDensityMatrix b = build_state(c.b, c.cutoff);
        for (double lambda : {0.3, 0.5, 0.7}) {
            const MixingParams p = MixingParams::beam_splitter(lambda);
            const double sc = vn_entropy(two_mode_mix(a, b, p, c.cutoff));
            const InequalityReport r = qepi_check(vn_entropy(a), vn_entropy(b), sc, 1, p, kOracleTolerance);
            EXPECT_TRUE(r.holds) << describe(c.a) << " " << describe(c.b) << " " << lambda << " slack " << r.slack;
        }
    }
}
