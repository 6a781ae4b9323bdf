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

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "qepi/errors.h"
#include "qepi/random.h"

namespace qepi {

namespace {

void check_covariance_shape(const Eigen::MatrixXd &covariance) {
    if (covariance.rows() != covariance.cols() || covariance.rows() == 0 || covariance.rows() % 2 != 0) {
        std::ostringstream msg;
        msg << "covariance must be a non-empty 2n x 2n matrix, got " << covariance.rows() << " x "
            << covariance.cols();
        throw ValidationError(msg.str());
    }
    if (!covariance.allFinite()) {
        throw ValidationError("covariance has non-finite entries");
    }
    double asymmetry = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
    if (asymmetry > kSymmetryTolerance) {
        std::ostringstream msg;
        msg << "covariance is not symmetric (max asymmetry " << asymmetry << ")";
        throw ValidationError(msg.str());
    }
}

double thermal_photons(double nu) {
    return std::max(0.0, (nu - 1.0) / 2.0);
}

// Layers of the random symplectic construction. Each acts in place, S <- L S.
void apply_rotations(Eigen::MatrixXd &s, Rng &rng) {
    const auto n = s.rows() / 2;
    for (Eigen::Index j = 0; j < n; ++j) {
        double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        double c = std::cos(phi), sn = std::sin(phi);
        Eigen::Matrix2d rot;
        rot << c, sn, -sn, c;
        s.middleRows(2 * j, 2) = (rot * s.middleRows(2 * j, 2)).eval();
    }
}

void apply_squeezers(Eigen::MatrixXd &s, Rng &rng, double r_max) {
    const auto n = s.rows() / 2;
    for (Eigen::Index j = 0; j < n; ++j) {
        double r = rng.uniform(-r_max, r_max);
        s.row(2 * j) *= std::exp(r);
        s.row(2 * j + 1) *= std::exp(-r);
    }
}

void apply_beam_splitters(Eigen::MatrixXd &s, Rng &rng) {
    const auto n = s.rows() / 2;
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        double c = std::cos(theta), sn = std::sin(theta);
        Eigen::MatrixXd a = s.middleRows(2 * j, 2);
        Eigen::MatrixXd b = s.middleRows(2 * j + 2, 2);
        s.middleRows(2 * j, 2) = c * a + sn * b;
        s.middleRows(2 * j + 2, 2) = -sn * a + c * b;
    }
}

Eigen::MatrixXd layered_symplectic(std::size_t modes, Rng &rng, double r_max) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
    apply_rotations(s, rng);
    apply_squeezers(s, rng, r_max);
    apply_rotations(s, rng);
    apply_beam_splitters(s, rng);
    apply_squeezers(s, rng, r_max);
    apply_rotations(s, rng);
    return s;
}

}  // namespace

SymplecticForm::SymplecticForm(std::size_t modes) : modes_(modes), matrix_(Eigen::MatrixXd::Zero(2 * modes, 2 * modes)) {
    for (std::size_t j = 0; j < modes; ++j) {
        matrix_(2 * j, 2 * j + 1) = 1.0;
        matrix_(2 * j + 1, 2 * j) = -1.0;
    }
}

GaussianState::GaussianState(Eigen::MatrixXd covariance, Eigen::VectorXd displacement)
    : modes_(0), covariance_(std::move(covariance)), displacement_(std::move(displacement)) {
    check_covariance_shape(covariance_);
    modes_ = static_cast<std::size_t>(covariance_.rows() / 2);
    if (displacement_.size() != covariance_.rows()) {
        throw ValidationError("displacement length must be 2n");
    }
    if (!displacement_.allFinite()) {
        throw ValidationError("displacement has non-finite entries");
    }
    SpectrumReport spectrum = symplectic_eigenvalues(covariance_);
    if (!spectrum.physical) {
        std::ostringstream msg;
        msg << "unphysical covariance: smallest symplectic eigenvalue " << spectrum.min_nu;
        throw ValidationError(msg.str());
    }
}

GaussianState GaussianState::vacuum(std::size_t modes) {
    return thermal(modes, 1.0);
}

GaussianState GaussianState::thermal(std::size_t modes, double nu) {
    if (modes == 0) {
        throw ValidationError("mode count must be positive");
    }
    return GaussianState(nu * Eigen::MatrixXd::Identity(2 * modes, 2 * modes), Eigen::VectorXd::Zero(2 * modes));
}

double g(double mean_photons) {
    const double n = mean_photons;
    if (!std::isfinite(n) || n < 0.0) {
        std::ostringstream msg;
        msg << "g: mean photon number must be finite and >= 0, got " << n;
        throw DomainError(msg.str());
    }
    if (n == 0.0) {
        return 0.0;
    }
    if (n < 1e-12) {
        // (N+1) ln(N+1) - N ln N = N (1 - ln N) + O(N^2)
        return n * (1.0 - std::log(n));
    }
    return std::log1p(n) + n * std::log1p(1.0 / n);
}

double g_inv(double entropy_nats) {
    const double s = entropy_nats;
    if (!std::isfinite(s) || s < 0.0) {
        std::ostringstream msg;
        msg << "g_inv: entropy must be finite and >= 0, got " << s;
        throw DomainError(msg.str());
    }
    if (s == 0.0) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = std::max(1.0, std::exp(s));
    if (!std::isfinite(hi)) {
        throw DomainError("g_inv: entropy too large to bracket");
    }
    // g(N) >= ln(N + 1), so g(hi) >= s.
    while (hi - lo > 1e-6 * hi) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) < s) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double n = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        double f = g(n) - s;
        if (f == 0.0) {
            break;
        }
        if (f < 0.0) {
            lo = n;
        } else {
            hi = n;
        }
        double next = n - f / std::log1p(1.0 / n);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        double step = std::abs(next - n);
        n = next;
        if (step <= 1e-15 * n) {
            break;
        }
    }
    return n;
}

SpectrumReport symplectic_eigenvalues(const Eigen::MatrixXd &covariance) {
    check_covariance_shape(covariance);
    const auto dim = covariance.rows();
    const auto n = dim / 2;
    SpectrumReport report;
    report.nus.reserve(static_cast<std::size_t>(n));

    if (n == 1) {
        double det = covariance(0, 0) * covariance(1, 1) - covariance(0, 1) * covariance(1, 0);
        bool positive = covariance(0, 0) > 0.0 && det > 0.0;
        report.nus.push_back(std::sqrt(std::abs(det)));
        report.min_nu = report.nus.front();
        report.physical = positive && report.min_nu >= 1.0 - kPhysicalityTolerance;
        return report;
    }

    const Eigen::MatrixXd omega = SymplecticForm(static_cast<std::size_t>(n)).matrix();
    Eigen::LLT<Eigen::MatrixXd> llt(covariance);
    if (llt.info() == Eigen::Success) {
        // Omega gamma = Omega L L^T is similar to L^T Omega L, whose product
        // with i is Hermitian with eigenvalues +-nu_k.
        Eigen::MatrixXd l = llt.matrixL();
        Eigen::MatrixXd antisym = l.transpose() * omega * l;
        Eigen::MatrixXcd herm = std::complex<double>(0.0, 1.0) * antisym.cast<std::complex<double>>();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw NumericError("symplectic_eigenvalues: eigen-solver did not converge");
        }
        const Eigen::VectorXd &ev = solver.eigenvalues();
        for (Eigen::Index k = n; k < dim; ++k) {
            report.nus.push_back(ev(k));
        }
        report.min_nu = report.nus.front();
        report.physical = report.min_nu >= 1.0 - kPhysicalityTolerance;
        return report;
    }

    // Not positive definite, hence unphysical. Report moduli of the spectrum
    // of Omega gamma, paired.
    Eigen::EigenSolver<Eigen::MatrixXd> solver(omega * covariance, false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("symplectic_eigenvalues: eigen-solver did not converge");
    }
    std::vector<double> moduli;
    for (Eigen::Index k = 0; k < dim; ++k) {
        moduli.push_back(std::abs(solver.eigenvalues()(k)));
    }
    std::sort(moduli.begin(), moduli.end());
    for (Eigen::Index k = 0; k < n; ++k) {
        report.nus.push_back(moduli[static_cast<std::size_t>(2 * k + 1)]);
    }
    report.min_nu = report.nus.front();
    report.physical = false;
    return report;
}

SpectrumReport symplectic_eigenvalues(const GaussianState &state) {
    return symplectic_eigenvalues(state.covariance());
}

double covariance_entropy(const Eigen::MatrixXd &covariance) {
    SpectrumReport spectrum = symplectic_eigenvalues(covariance);
    if (!spectrum.physical) {
        std::ostringstream msg;
        msg << "entropy of unphysical covariance (min nu " << spectrum.min_nu << ")";
        throw ValidationError(msg.str());
    }
    double s = 0.0;
    for (double nu : spectrum.nus) {
        s += g(thermal_photons(nu));
    }
    return s;
}

double entropy(const GaussianState &state) {
    return covariance_entropy(state.covariance());
}

double entropy_power(double entropy_nats, std::size_t modes) {
    if (modes == 0) {
        throw DomainError("entropy_power: mode count must be positive");
    }
    if (!std::isfinite(entropy_nats) || entropy_nats < 0.0) {
        throw DomainError("entropy_power: entropy must be finite and >= 0");
    }
    return std::exp(entropy_nats / static_cast<double>(modes));
}

double photon_number(double entropy_nats, std::size_t modes) {
    if (modes == 0) {
        throw DomainError("photon_number: mode count must be positive");
    }
    return g_inv(entropy_nats / static_cast<double>(modes));
}

double delta(double entropy_power_value) {
    const double x = entropy_power_value;
    if (!std::isfinite(x) || x < 1.0) {
        std::ostringstream msg;
        msg << "delta: argument must be >= 1, got " << x;
        throw DomainError(msg.str());
    }
    return g_inv(std::log(x)) - x / std::numbers::e + 0.5;
}

RandomDraw draw_random_gaussian(std::size_t modes, std::uint64_t seed, const GeneratorParams &params) {
    if (modes == 0) {
        throw DomainError("random_gaussian_state: mode count must be positive");
    }
    if (!(params.nu_min >= 1.0) || !(params.nu_max >= params.nu_min) || !std::isfinite(params.nu_max) ||
        !(params.r_max >= 0.0) || !std::isfinite(params.r_max) || !(params.displacement_max >= 0.0) ||
        !std::isfinite(params.displacement_max)) {
        throw DomainError("random_gaussian_state: need 1 <= nu_min <= nu_max, r_max >= 0, displacement_max >= 0");
    }
    Rng rng(seed);
    std::vector<double> nus(modes);
    const double log_span = std::log(params.nu_max / params.nu_min);
    for (auto &nu : nus) {
        nu = params.nu_min * std::exp(log_span * rng.uniform());
    }
    Eigen::MatrixXd s = layered_symplectic(modes, rng, params.r_max);
    Eigen::VectorXd diag(2 * modes);
    for (std::size_t k = 0; k < modes; ++k) {
        diag(2 * k) = nus[k];
        diag(2 * k + 1) = nus[k];
    }
    Eigen::MatrixXd gamma = s * diag.asDiagonal() * s.transpose();
    gamma = 0.5 * (gamma + gamma.transpose()).eval();
    Eigen::VectorXd d(2 * modes);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        d(i) = rng.uniform(-params.displacement_max, params.displacement_max);
    }
    return RandomDraw{GaussianState(std::move(gamma), std::move(d)), std::move(nus)};
}

GaussianState random_gaussian_state(std::size_t modes, std::uint64_t seed, const GeneratorParams &params) {
    return draw_random_gaussian(modes, seed, params).state;
}

Eigen::MatrixXd random_symplectic(std::size_t modes, std::uint64_t seed, double r_max) {
    if (modes == 0 || !(r_max >= 0.0)) {
        throw DomainError("random_symplectic: need modes >= 1 and r_max >= 0");
    }
    Rng rng(seed);
    return layered_symplectic(modes, rng, r_max);
}

double symplectic_defect(const Eigen::MatrixXd &s) {
    const Eigen::MatrixXd omega = SymplecticForm(static_cast<std::size_t>(s.rows() / 2)).matrix();
    return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

}  // namespace qepi
