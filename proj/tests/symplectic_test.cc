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

#include "qepi/symplectic.h"

#include <cmath>

#include <gtest/gtest.h>

#include "qepi/errors.h"
#include "qepi/random.h"

using namespace qepi;

namespace {

const double kLn2 = std::log(2.0);

Eigen::MatrixXd diag(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) {
        v(i++) = x;
    }
    return v.asDiagonal();
}

}  // namespace

TEST(SymplecticForm, squares_to_minus_identity) {
    for (std::size_t n = 1; n <= 4; ++n) {
        const Eigen::MatrixXd w = SymplecticForm(n).matrix();
        EXPECT_TRUE((w * w + Eigen::MatrixXd::Identity(2 * n, 2 * n)).isZero(0));
        EXPECT_TRUE((w.transpose() + w).isZero(0));
    }
}

TEST(g, closed_form_values) {
    EXPECT_EQ(g(0.0), 0.0);
    EXPECT_NEAR(g(1.0), 2.0 * kLn2, 1e-15);
    EXPECT_NEAR(g(0.5), 0.9547712524422192, 1e-14);
}

TEST(g, continuous_near_zero) {
    const double n = 1e-13;
    EXPECT_NEAR(g(n), n * (1.0 - std::log(n)), 1e-24);
    EXPECT_GT(g(2e-12), g(5e-13));
    EXPECT_NEAR(g(1e-12 * (1 - 1e-9)), g(1e-12 * (1 + 1e-9)), 1e-18);
}

TEST(g, strictly_increasing) {
    double prev = g(0.0);
    for (double n = 1e-6; n < 1e4; n *= 1.7) {
        const double cur = g(n);
        EXPECT_GT(cur, prev);
        prev = cur;
    }
}

TEST(g, rejects_bad_input) {
    EXPECT_THROW(g(-1e-3), DomainError);
    EXPECT_THROW(g(std::nan("")), DomainError);
    EXPECT_THROW(g(INFINITY), DomainError);
}

TEST(g_inv, values) {
    EXPECT_EQ(g_inv(0.0), 0.0);
    EXPECT_NEAR(g_inv(2.0 * kLn2), 1.0, 1e-12);
    EXPECT_NEAR(g_inv(1.0), 0.5422114197377451, 1e-12);
    EXPECT_THROW(g_inv(-0.1), DomainError);
}

TEST(g_inv, round_trips) {
    for (double n = 0.0; n <= 100.0; n += 0.37) {
        EXPECT_NEAR(g_inv(g(n)), n, 1e-10 * std::max(1.0, n)) << n;
    }
    for (double n : {1e-9, 1e-6, 1e-3}) {
        EXPECT_NEAR(g_inv(g(n)), n, 1e-10);
    }
    const double top = g(100.0);
    for (double s = 0.0; s <= top; s += top / 97.0) {
        EXPECT_NEAR(g(g_inv(s)), s, 1e-10) << s;
    }
}

TEST(symplectic_eigenvalues, williamson_forms) {
    EXPECT_NEAR(symplectic_eigenvalues(diag({3, 3})).nus[0], 3.0, 1e-12);
    for (double r : {0.1, 0.7, 1.5}) {
        const auto rep = symplectic_eigenvalues(diag({std::exp(2 * r), std::exp(-2 * r)}));
        EXPECT_NEAR(rep.nus[0], 1.0, 1e-12);
        EXPECT_TRUE(rep.physical);
    }
    const auto rep = symplectic_eigenvalues(diag({2, 2, 5, 5}));
    ASSERT_EQ(rep.nus.size(), 2u);
    EXPECT_NEAR(rep.nus[0], 2.0, 1e-12);
    EXPECT_NEAR(rep.nus[1], 5.0, 1e-12);
    EXPECT_NEAR(rep.min_nu, 2.0, 1e-12);
}

TEST(symplectic_eigenvalues, reports_unphysical) {
    const auto rep = symplectic_eigenvalues(diag({0.5, 0.5}));
    EXPECT_FALSE(rep.physical);
    EXPECT_NEAR(rep.min_nu, 0.5, 1e-12);
    const auto two = symplectic_eigenvalues(diag({0.9, 0.9, 3, 3}));
    EXPECT_FALSE(two.physical);
    EXPECT_NEAR(two.min_nu, 0.9, 1e-12);
}

TEST(symplectic_eigenvalues, rejects_non_symmetric) {
    Eigen::MatrixXd m = diag({2, 2});
    m(0, 1) = 1e-6;
    EXPECT_THROW(symplectic_eigenvalues(m), ValidationError);
    EXPECT_THROW(symplectic_eigenvalues(Eigen::MatrixXd::Identity(3, 3)), ValidationError);
}

TEST(symplectic_eigenvalues, invariant_under_symplectic_conjugation) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t n = 1 + seed % 3;
        const Eigen::MatrixXd s = random_symplectic(n, seed, 1.0);
        EXPECT_LT(symplectic_defect(s), 1e-10);
        Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        for (std::size_t k = 0; k < n; ++k) {
            gamma(2 * k, 2 * k) = gamma(2 * k + 1, 2 * k + 1) = 1.0 + static_cast<double>(k) * 1.3 + 0.2;
        }
        const auto before = symplectic_eigenvalues(gamma);
        const Eigen::MatrixXd conj = s * gamma * s.transpose();
        const auto after = symplectic_eigenvalues(Eigen::MatrixXd(0.5 * (conj + conj.transpose())));
        for (std::size_t k = 0; k < n; ++k) {
            EXPECT_NEAR(before.nus[k], after.nus[k], 1e-8);
        }
    }
}

TEST(GaussianState, validates_input) {
    EXPECT_NO_THROW(GaussianState(diag({1, 1}), Eigen::VectorXd::Zero(2)));
    EXPECT_THROW(GaussianState(diag({0.5, 0.5}), Eigen::VectorXd::Zero(2)), ValidationError);
    EXPECT_THROW(GaussianState(diag({1, 1}), Eigen::VectorXd::Zero(3)), ValidationError);
    Eigen::MatrixXd asym = diag({2, 2});
    asym(1, 0) = 1e-9;
    EXPECT_THROW(GaussianState(asym, Eigen::VectorXd::Zero(2)), ValidationError);
    Eigen::MatrixXd bad = diag({2, 2});
    bad(0, 0) = std::nan("");
    EXPECT_THROW(GaussianState(bad, Eigen::VectorXd::Zero(2)), ValidationError);
    // within the 1e-9 physicality tolerance
    EXPECT_NO_THROW(GaussianState(diag({1 - 5e-10, 1 - 5e-10}), Eigen::VectorXd::Zero(2)));
}

TEST(entropy, examples) {
    EXPECT_EQ(entropy(GaussianState::vacuum(1)), 0.0);
    EXPECT_NEAR(entropy(GaussianState::thermal(1, 3.0)), 2 * kLn2, 1e-14);
    EXPECT_NEAR(entropy(GaussianState::thermal(2, 3.0)), 4 * kLn2, 1e-14);
    EXPECT_NEAR(covariance_entropy(diag({std::exp(1.0), std::exp(-1.0)})), 0.0, 1e-12);
}

TEST(entropy, additive_over_direct_sums) {
    GeneratorParams p{1.0, 10.0, 1.0, 0.0};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const GaussianState a = random_gaussian_state(1, derive_seed(seed, "a", 0), p);
        const GaussianState b = random_gaussian_state(2, derive_seed(seed, "b", 0), p);
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(6, 6);
        sum.topLeftCorner(2, 2) = a.covariance();
        sum.bottomRightCorner(4, 4) = b.covariance();
        EXPECT_NEAR(covariance_entropy(sum), entropy(a) + entropy(b), 1e-10);
    }
}

TEST(entropy, zero_only_for_pure) {
    GeneratorParams pure{1.0, 1.0, 1.5, 0.0};
    GeneratorParams mixed{1.01, 5.0, 1.5, 0.0};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EXPECT_NEAR(entropy(random_gaussian_state(2, seed, pure)), 0.0, 1e-8);
        EXPECT_GT(entropy(random_gaussian_state(2, seed, mixed)), 0.0);
    }
}

TEST(entropy_power, examples) {
    EXPECT_EQ(entropy_power(0.0, 3), 1.0);
    EXPECT_NEAR(entropy_power(2 * kLn2, 1), 4.0, 1e-14);
    EXPECT_NEAR(entropy_power(2 * kLn2, 2), 2.0, 1e-14);
    EXPECT_THROW(entropy_power(-1.0, 1), DomainError);
    EXPECT_THROW(entropy_power(1.0, 0), DomainError);
}

TEST(photon_number, examples) {
    EXPECT_EQ(photon_number(0.0, 1), 0.0);
    EXPECT_NEAR(photon_number(2 * kLn2, 1), 1.0, 1e-12);
    EXPECT_NEAR(photon_number(2.0, 2), 0.5422114197377451, 1e-12);
    EXPECT_THROW(photon_number(-1.0, 1), DomainError);
}

TEST(delta, value_at_one) {
    EXPECT_NEAR(delta(1.0), 0.5 - std::exp(-1.0), 1e-12);
}

TEST(delta, decays) {
    EXPECT_LT(std::abs(delta(std::exp(g(10.0)))), 0.01);
    EXPECT_NEAR(delta(2.0), 0.058056, 1e-6);
    EXPECT_NEAR(delta(4.0), 0.028482, 1e-6);
    EXPECT_LT(delta(4.0), delta(2.0));
    EXPECT_LT(delta(2.0), delta(1.0));
    EXPECT_THROW(delta(0.99), DomainError);
}

TEST(delta, nonnegative_decreasing_convex) {
    double prev = delta(1.0);
    for (double x = 1.05; x < 500.0; x *= 1.05) {
        const double cur = delta(x);
        EXPECT_GE(cur, 0.0);
        EXPECT_LE(cur, prev + 1e-12);
        prev = cur;
    }
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const double x = 1.0 + 50.0 * rng.uniform();
        const double y = 1.0 + 50.0 * rng.uniform();
        EXPECT_LE(delta(0.5 * (x + y)), 0.5 * (delta(x) + delta(y)) + 1e-10);
    }
}

TEST(random_gaussian_state, degenerate_box_is_vacuum) {
    const GaussianState s = random_gaussian_state(1, 0, GeneratorParams{1.0, 1.0, 0.0, 0.0});
    EXPECT_TRUE(s.covariance().isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-14));
    EXPECT_TRUE(s.displacement().isZero(0));
}

TEST(random_gaussian_state, recovers_drawn_spectrum) {
    GeneratorParams p{1.0, 20.0, 1.5, 0.0};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t n = 1 + seed % 3;
        const RandomDraw draw = draw_random_gaussian(n, seed, p);
        std::vector<double> drawn = draw.nus;
        std::sort(drawn.begin(), drawn.end());
        const auto rep = symplectic_eigenvalues(draw.state);
        for (std::size_t k = 0; k < n; ++k) {
            EXPECT_NEAR(rep.nus[k], drawn[k], 1e-8 * std::max(1.0, drawn[k]));
            EXPECT_GE(drawn[k], 1.0);
            EXPECT_LE(drawn[k], 20.0);
        }
    }
}

TEST(random_gaussian_state, deterministic) {
    GeneratorParams p{1.0, 20.0, 1.5, 0.5};
    const GaussianState a = random_gaussian_state(2, 12345, p);
    const GaussianState b = random_gaussian_state(2, 12345, p);
    EXPECT_EQ(a.covariance(), b.covariance());
    EXPECT_EQ(a.displacement(), b.displacement());
    const GaussianState c = random_gaussian_state(2, 12346, p);
    EXPECT_NE(a.covariance(), c.covariance());
}

TEST(random_gaussian_state, rejects_bad_params) {
    EXPECT_THROW(random_gaussian_state(1, 0, GeneratorParams{1.0, 0.5, 0.0, 0.0}), DomainError);
    EXPECT_THROW(random_gaussian_state(1, 0, GeneratorParams{1.0, 2.0, -1.0, 0.0}), DomainError);
    EXPECT_THROW(random_gaussian_state(0, 0, GeneratorParams{}), DomainError);
}

TEST(derive_seed, stable_and_distinct) {
    EXPECT_EQ(derive_seed(42, "suite/A", 3), derive_seed(42, "suite/A", 3));
    EXPECT_NE(derive_seed(42, "suite/A", 3), derive_seed(42, "suite/B", 3));
    EXPECT_NE(derive_seed(42, "suite/A", 3), derive_seed(42, "suite/A", 4));
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}
