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

#include "qepi/fock.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include "qepi/errors.h"

namespace qepi::fock {

namespace {

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;

std::size_t checked_dimension(std::size_t modes, std::size_t cutoff) {
    if (modes != 1 && modes != 2) {
        throw ValidationError("Fock states support one or two modes");
    }
    if (cutoff < 1) {
        throw ValidationError("Fock cutoff must be at least 1");
    }
    return modes == 1 ? cutoff : cutoff * cutoff;
}

double hermitian_defect(const Eigen::MatrixXcd &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd real_eigenvalues(const Eigen::MatrixXcd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("Hermitian eigen-solver failed");
    }
    return solver.eigenvalues();
}

FockDensityMatrix diagonal_state(const Eigen::VectorXd &populations) {
    Eigen::MatrixXcd rho = populations.cast<Complex>().asDiagonal();
    return FockDensityMatrix(1, static_cast<std::size_t>(populations.size()), std::move(rho));
}

// Thermal populations p_k = N^k / (N + 1)^{k + 1}, k < cutoff.
Eigen::VectorXd thermal_populations(double n, std::size_t cutoff) {
    Eigen::VectorXd p(cutoff);
    const double ratio = n / (n + 1.0);
    double current = 1.0 / (n + 1.0);
    for (std::size_t k = 0; k < cutoff; ++k) {
        p(k) = current;
        current *= ratio;
    }
    return p;
}

void require_tail(double tail, const std::string &label, std::size_t cutoff) {
    if (!(tail < kTailTolerance)) {
        std::ostringstream msg;
        msg << label << " does not fit in cutoff " << cutoff;
        throw CutoffError(msg.str(), tail);
    }
}

SparseC sparse_annihilation(std::size_t mode, std::size_t modes, std::size_t cutoff) {
    const std::size_t dim = modes == 1 ? cutoff : cutoff * cutoff;
    std::vector<Eigen::Triplet<Complex>> entries;
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t level = modes == 1 ? i : (mode == 0 ? i / cutoff : i % cutoff);
        if (level == 0) {
            continue;
        }
        const std::size_t target = modes == 1 || mode == 1 ? i - 1 : i - cutoff;
        entries.emplace_back(static_cast<int>(target), static_cast<int>(i), std::sqrt(static_cast<double>(level)));
    }
    SparseC a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    a.setFromTriplets(entries.begin(), entries.end());
    return a;
}

// L(rho) = 1/2 sum_j (a_j rho a_j^dag + a_j^dag rho a_j) - 1/4 (H rho + rho H),
// H = sum_j (a_j a_j^dag + a_j^dag a_j). Identical to the double-commutator
// form for the truncated quadratures.
class Liouvillian {
   public:
    Liouvillian(std::size_t modes, std::size_t cutoff) {
        for (std::size_t j = 0; j < modes; ++j) {
            SparseC a = sparse_annihilation(j, modes, cutoff);
            SparseC ad = a.adjoint();
            ladders_.push_back(a);
            raisers_.push_back(ad);
        }
        const Eigen::Index dim = ladders_.front().rows();
        h_ = Eigen::VectorXd::Zero(dim);
        for (std::size_t j = 0; j < modes; ++j) {
            SparseC h = ladders_[j] * raisers_[j] + raisers_[j] * ladders_[j];
            for (Eigen::Index i = 0; i < dim; ++i) {
                h_(i) += h.coeff(i, i).real();
            }
        }
    }

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd &rho) const {
        const Eigen::Index dim = rho.rows();
        Eigen::MatrixXcd out(dim, dim);
        for (Eigen::Index c = 0; c < dim; ++c) {
            for (Eigen::Index r = 0; r < dim; ++r) {
                out(r, c) = -0.25 * (h_(r) + h_(c)) * rho(r, c);
            }
        }
        for (std::size_t j = 0; j < ladders_.size(); ++j) {
            Eigen::MatrixXcd left = ladders_[j] * rho;
            out.noalias() += 0.5 * (left * raisers_[j]);
            Eigen::MatrixXcd up = raisers_[j] * rho;
            out.noalias() += 0.5 * (up * ladders_[j]);
        }
        return out;
    }

   private:
    std::vector<SparseC> ladders_;
    std::vector<SparseC> raisers_;
    Eigen::VectorXd h_;
};

Eigen::MatrixXcd rk4(const Liouvillian &l, Eigen::MatrixXcd rho, double t, std::size_t steps) {
    const double dt = t / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        const Eigen::MatrixXcd k1 = l.apply(rho);
        const Eigen::MatrixXcd k2 = l.apply(rho + 0.5 * dt * k1);
        const Eigen::MatrixXcd k3 = l.apply(rho + 0.5 * dt * k2);
        const Eigen::MatrixXcd k4 = l.apply(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

// Eigenpairs of a single-mode input with negligible weights dropped.
struct Mixture {
    std::vector<double> weights;
    std::vector<Eigen::VectorXcd> vectors;
};

Mixture decompose(const FockDensityMatrix &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
    if (solver.info() != Eigen::Success) {
        throw NumericError("Hermitian eigen-solver failed");
    }
    Mixture m;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double w = solver.eigenvalues()(i);
        if (w < -kNegativeTolerance) {
            throw NumericError("input density matrix has a negative eigenvalue");
        }
        if (w > 0.0) {
            m.weights.push_back(w);
            m.vectors.push_back(solver.eigenvectors().col(i));
        }
    }
    return m;
}

// A block of the two-mode unitary: basis states (c, b) and the real
// orthogonal matrix acting on them.
struct Sector {
    std::vector<std::pair<std::size_t, std::size_t>> states;
    Eigen::MatrixXd unitary;
};

// Beam splitter conserves c + b = m. U = exp(theta (a^dag b - a b^dag)),
// cos(theta) = sqrt(lambda).
Sector beam_splitter_sector(std::size_t m, double theta) {
    Sector s;
    for (std::size_t c = 0; c <= m; ++c) {
        s.states.emplace_back(c, m - c);
    }
    const auto size = static_cast<Eigen::Index>(m + 1);
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i + 1 < size; ++i) {
        const double c = static_cast<double>(i);
        const double b = static_cast<double>(m) - c;
        const double amp = std::sqrt((c + 1.0) * b);
        gen(i + 1, i) = amp;
        gen(i, i + 1) = -amp;
    }
    s.unitary = (theta * gen).exp();
    return s;
}

// Two-mode squeezer conserves c - b = diff. U = exp(r (a^dag b^dag - a b)),
// cosh^2(r) = kappa, truncated to c, b < working.
Sector amplifier_sector(long diff, std::size_t working, double r) {
    Sector s;
    const std::size_t shift = static_cast<std::size_t>(std::labs(diff));
    for (std::size_t k = 0; k + shift < working; ++k) {
        s.states.emplace_back(diff > 0 ? k + shift : k, diff > 0 ? k : k + shift);
    }
    const auto size = static_cast<Eigen::Index>(s.states.size());
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i + 1 < size; ++i) {
        const auto [c, b] = s.states[static_cast<std::size_t>(i)];
        const double amp = std::sqrt((static_cast<double>(c) + 1.0) * (static_cast<double>(b) + 1.0));
        gen(i + 1, i) = amp;
        gen(i, i + 1) = -amp;
    }
    s.unitary = (r * gen).exp();
    return s;
}

}  // namespace

FockDensityMatrix::FockDensityMatrix(Unchecked, std::size_t modes, std::size_t cutoff, Eigen::MatrixXcd rho)
    : modes_(modes), cutoff_(cutoff), rho_(std::move(rho)) {
}

FockDensityMatrix::FockDensityMatrix(std::size_t modes, std::size_t cutoff, Eigen::MatrixXcd rho)
    : modes_(modes), cutoff_(cutoff), rho_(std::move(rho)) {
    const std::size_t dim = checked_dimension(modes, cutoff);
    if (static_cast<std::size_t>(rho_.rows()) != dim || static_cast<std::size_t>(rho_.cols()) != dim) {
        throw ValidationError("density matrix shape does not match modes and cutoff");
    }
    if (!rho_.allFinite()) {
        throw ValidationError("density matrix has non-finite entries");
    }
    if (hermitian_defect(rho_) > kHermitianTolerance) {
        throw ValidationError("density matrix is not Hermitian");
    }
    rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
    if (std::abs(rho_.trace().real() - 1.0) > 1e-8) {
        throw ValidationError("density matrix trace differs from 1");
    }
    if (dim <= 1024 && real_eigenvalues(rho_).minCoeff() < -1e-10) {
        throw ValidationError("density matrix is not positive semidefinite");
    }
}

FockDensityMatrix FockDensityMatrix::derived(std::size_t modes, std::size_t cutoff, Eigen::MatrixXcd rho) {
    const std::size_t dim = checked_dimension(modes, cutoff);
    if (static_cast<std::size_t>(rho.rows()) != dim || static_cast<std::size_t>(rho.cols()) != dim) {
        throw ValidationError("density matrix shape does not match modes and cutoff");
    }
    if (!rho.allFinite()) {
        throw NumericError("density matrix has non-finite entries");
    }
    if (hermitian_defect(rho) > 1e-10) {
        throw NumericError("derived density matrix lost Hermiticity");
    }
    Eigen::MatrixXcd sym = 0.5 * (rho + rho.adjoint());
    return FockDensityMatrix(Unchecked{}, modes, cutoff, std::move(sym));
}

Eigen::MatrixXcd annihilation(std::size_t cutoff) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cutoff), static_cast<Eigen::Index>(cutoff));
    for (std::size_t k = 1; k < cutoff; ++k) {
        a(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = std::sqrt(static_cast<double>(k));
    }
    return a;
}

Eigen::MatrixXcd embed(const Eigen::MatrixXcd &op, std::size_t mode, std::size_t modes) {
    if (modes == 1) {
        return op;
    }
    const Eigen::Index d = op.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (mode == 1) {
            out.block(i * d, i * d, d, d) = op;
            continue;
        }
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index k = 0; k < d; ++k) {
                out(i * d + k, j * d + k) = op(i, j);
            }
        }
    }
    return out;
}

QuadratureOp::QuadratureOp(Direction direction, std::size_t modes, std::size_t cutoff) : direction_(direction) {
    checked_dimension(modes, cutoff);
    if (direction.mode >= modes) {
        throw DomainError("quadrature direction exceeds number of modes");
    }
    const Eigen::MatrixXcd a = annihilation(cutoff);
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd single;
    if (direction.which == Quadrature::Q) {
        single = s * (a + a.adjoint());
    } else {
        single = Complex(0.0, s) * (a.adjoint() - a);
    }
    matrix_ = embed(single, direction.mode, modes);
}

std::string describe(const StateSpec &spec) {
    std::ostringstream out;
    std::visit(
        [&out](const auto &s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Vacuum>) {
                out << "vacuum";
            } else if constexpr (std::is_same_v<T, FockNumber>) {
                out << "fock(" << s.photons << ")";
            } else if constexpr (std::is_same_v<T, Thermal>) {
                out << "thermal(" << s.mean_photons << ")";
            } else if constexpr (std::is_same_v<T, Coherent>) {
                out << "coherent(" << s.alpha.real() << (s.alpha.imag() < 0 ? "" : "+") << s.alpha.imag() << "i)";
            } else {
                out << "squeezed_thermal(r=" << s.r << ",N=" << s.mean_photons << ")";
            }
        },
        spec);
    return out.str();
}

double mean_photon_number(const StateSpec &spec) {
    return std::visit(
        [](const auto &s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Vacuum>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, FockNumber>) {
                return static_cast<double>(s.photons);
            } else if constexpr (std::is_same_v<T, Thermal>) {
                return s.mean_photons;
            } else if constexpr (std::is_same_v<T, Coherent>) {
                return std::norm(s.alpha);
            } else {
                return (s.mean_photons + 0.5) * std::cosh(2.0 * s.r) - 0.5;
            }
        },
        spec);
}

std::optional<GaussianState> gaussian_equivalent(const StateSpec &spec) {
    return std::visit(
        [](const auto &s) -> std::optional<GaussianState> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Vacuum>) {
                return GaussianState::vacuum(1);
            } else if constexpr (std::is_same_v<T, FockNumber>) {
                if (s.photons == 0) {
                    return GaussianState::vacuum(1);
                }
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, Thermal>) {
                return GaussianState::thermal(1, 2.0 * s.mean_photons + 1.0);
            } else if constexpr (std::is_same_v<T, Coherent>) {
                const double r2 = std::sqrt(2.0);
                return GaussianState(Eigen::MatrixXd::Identity(2, 2),
                                     Eigen::Vector2d(r2 * s.alpha.real(), r2 * s.alpha.imag()));
            } else {
                const double nu = 2.0 * s.mean_photons + 1.0;
                Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(2, 2);
                gamma(0, 0) = nu * std::exp(-2.0 * s.r);
                gamma(1, 1) = nu * std::exp(2.0 * s.r);
                return GaussianState(gamma, Eigen::VectorXd::Zero(2));
            }
        },
        spec);
}

std::size_t recommended_cutoff(double mean_photons, double gain) {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
        throw DomainError("mean photon number must be finite and non-negative");
    }
    if (!(gain >= 1.0) || !std::isfinite(gain)) {
        throw DomainError("cutoff gain factor must be >= 1");
    }
    const double n = mean_photons;
    double d = std::ceil(n + 10.0 * std::sqrt(n + 1.0) + 15.0);
    if (n > 0.0) {
        // (N / (N + 1))^D < kTailTolerance
        const double exact = std::floor(std::log(kTailTolerance) / -std::log1p(1.0 / n)) + 1.0;
        d = std::max(d, exact);
    }
    return static_cast<std::size_t>(std::ceil(d * gain));
}

FockDensityMatrix build_state(const StateSpec &spec, std::size_t cutoff) {
    checked_dimension(1, cutoff);
    const auto dim = static_cast<Eigen::Index>(cutoff);
    return std::visit(
        [&](const auto &s) -> FockDensityMatrix {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Vacuum>) {
                Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
                p(0) = 1.0;
                return diagonal_state(p);
            } else if constexpr (std::is_same_v<T, FockNumber>) {
                if (s.photons >= cutoff) {
                    throw CutoffError("fock(" + std::to_string(s.photons) + ") does not fit in cutoff " + std::to_string(cutoff), 1.0);
                }
                Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
                p(static_cast<Eigen::Index>(s.photons)) = 1.0;
                return diagonal_state(p);
            } else if constexpr (std::is_same_v<T, Thermal>) {
                if (!(s.mean_photons >= 0.0) || !std::isfinite(s.mean_photons)) {
                    throw DomainError("thermal mean photon number must be finite and non-negative");
                }
                const double n = s.mean_photons;
                const double tail = n == 0.0 ? 0.0 : std::pow(n / (n + 1.0), static_cast<double>(cutoff));
                require_tail(tail, describe(spec), cutoff);
                return diagonal_state(thermal_populations(n, cutoff));
            } else if constexpr (std::is_same_v<T, Coherent>) {
                if (!std::isfinite(s.alpha.real()) || !std::isfinite(s.alpha.imag())) {
                    throw DomainError("coherent amplitude must be finite");
                }
                Eigen::VectorXcd c(dim);
                Complex current = std::exp(-0.5 * std::norm(s.alpha));
                double kept = 0.0;
                for (Eigen::Index k = 0; k < dim; ++k) {
                    c(k) = current;
                    kept += std::norm(current);
                    current *= s.alpha / std::sqrt(static_cast<double>(k + 1));
                }
                require_tail(std::max(0.0, 1.0 - kept), describe(spec), cutoff);
                Eigen::MatrixXcd rho = c * c.adjoint();
                return FockDensityMatrix(1, cutoff, std::move(rho));
            } else {
                if (!(s.mean_photons >= 0.0) || !std::isfinite(s.mean_photons) || !std::isfinite(s.r)) {
                    throw DomainError("squeezed thermal parameters must be finite with N >= 0");
                }
                const std::size_t working =
                    std::max({2 * cutoff, cutoff + 60, recommended_cutoff(s.mean_photons) + cutoff});
                const auto w = static_cast<Eigen::Index>(working);
                const Eigen::MatrixXd a = annihilation(working).real();
                const Eigen::MatrixXd ad = a.transpose();
                const Eigen::MatrixXd gen = 0.5 * s.r * (a * a - ad * ad);
                const Eigen::MatrixXd u = gen.exp();
                const Eigen::VectorXd p = thermal_populations(s.mean_photons, working);
                const Eigen::MatrixXd full = u * p.asDiagonal() * u.transpose();
                Eigen::MatrixXd kept = full.topLeftCorner(dim, dim);
                kept = 0.5 * (kept + kept.transpose()).eval();
                const double tail = std::max(0.0, 1.0 - kept.trace());
                // the working space itself must hold the state
                const double edge = full.diagonal().tail(std::max<Eigen::Index>(1, w / 10)).sum();
                require_tail(std::max(tail, edge), describe(spec), cutoff);
                Eigen::MatrixXcd rho = kept.cast<Complex>();
                return FockDensityMatrix(1, cutoff, std::move(rho));
            }
        },
        spec);
}

FockDensityMatrix tensor(const FockDensityMatrix &a, const FockDensityMatrix &b) {
    if (a.modes() != 1 || b.modes() != 1) {
        throw ValidationError("tensor expects two single-mode states");
    }
    if (a.cutoff() != b.cutoff()) {
        throw ValidationError("tensor expects equal cutoffs");
    }
    const Eigen::Index d = static_cast<Eigen::Index>(a.cutoff());
    Eigen::MatrixXcd out(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            out.block(i * d, j * d, d, d) = a.matrix()(i, j) * b.matrix();
        }
    }
    return FockDensityMatrix::derived(2, a.cutoff(), std::move(out));
}

FockDensityMatrix partial_trace(const FockDensityMatrix &two_mode, std::size_t keep) {
    if (two_mode.modes() != 2) {
        throw ValidationError("partial_trace expects a two-mode state");
    }
    if (keep > 1) {
        throw DomainError("partial_trace keeps mode 0 or 1");
    }
    const Eigen::Index d = static_cast<Eigen::Index>(two_mode.cutoff());
    const Eigen::MatrixXcd &rho = two_mode.matrix();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            Complex sum(0.0);
            for (Eigen::Index k = 0; k < d; ++k) {
                sum += keep == 0 ? rho(i * d + k, j * d + k) : rho(k * d + i, k * d + j);
            }
            out(i, j) = sum;
        }
    }
    return FockDensityMatrix::derived(1, two_mode.cutoff(), std::move(out));
}

FockDensityMatrix two_mode_mix(const FockDensityMatrix &a, const FockDensityMatrix &b, const MixingParams &params,
                               std::size_t output_cutoff) {
    if (a.modes() != 1 || b.modes() != 1) {
        throw ValidationError("two_mode_mix expects single-mode inputs");
    }
    checked_dimension(1, output_cutoff);
    const std::size_t da = a.cutoff();
    const std::size_t db = b.cutoff();
    const bool splitter = params.kind() == MixerKind::beam_splitter;

    // Only sectors reachable from the inputs are built.
    std::vector<Sector> sectors;
    std::vector<std::vector<long>> slot(da, std::vector<long>(db, -1));  // sector of (j, k)
    std::vector<std::vector<long>> index(da, std::vector<long>(db, -1)); // position inside it
    std::size_t b_dim = 0;
    if (splitter) {
        const double theta = std::atan2(std::sqrt(params.lambda_b()), std::sqrt(params.lambda_a()));
        for (std::size_t m = 0; m + 2 <= da + db; ++m) {
            sectors.push_back(beam_splitter_sector(m, theta));
        }
        for (std::size_t j = 0; j < da; ++j) {
            for (std::size_t k = 0; k < db; ++k) {
                slot[j][k] = static_cast<long>(j + k);
                index[j][k] = static_cast<long>(j);
            }
        }
        b_dim = da + db - 1;
    } else {
        const double kappa = params.coupling();
        const double r = std::atanh(std::sqrt((kappa - 1.0) / kappa));
        const std::size_t largest = std::max({da, db, output_cutoff});
        const std::size_t working = static_cast<std::size_t>(std::ceil(kappa * static_cast<double>(largest))) + 10;
        const long low = -static_cast<long>(db - 1);
        for (long diff = low; diff < static_cast<long>(da); ++diff) {
            sectors.push_back(amplifier_sector(diff, working, r));
        }
        for (std::size_t j = 0; j < da; ++j) {
            for (std::size_t k = 0; k < db; ++k) {
                slot[j][k] = static_cast<long>(j) - static_cast<long>(k) - low;
                index[j][k] = static_cast<long>(std::min(j, k));
            }
        }
        b_dim = working;
    }

    const Mixture ma = decompose(a);
    const Mixture mb = decompose(b);
    const auto dout = static_cast<Eigen::Index>(output_cutoff);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dout, dout);
    Eigen::MatrixXcd out(dout, static_cast<Eigen::Index>(b_dim));
    std::vector<Eigen::VectorXcd> inputs(sectors.size());
    double edge = 0.0;

    for (std::size_t p = 0; p < ma.weights.size(); ++p) {
        for (std::size_t q = 0; q < mb.weights.size(); ++q) {
            const double w = ma.weights[p] * mb.weights[q];
            if (w < 1e-15) {
                continue;
            }
            for (std::size_t s = 0; s < sectors.size(); ++s) {
                inputs[s].setZero(static_cast<Eigen::Index>(sectors[s].states.size()));
            }
            const Eigen::VectorXcd &psi = ma.vectors[p];
            const Eigen::VectorXcd &phi = mb.vectors[q];
            for (std::size_t j = 0; j < da; ++j) {
                for (std::size_t k = 0; k < db; ++k) {
                    inputs[static_cast<std::size_t>(slot[j][k])](index[j][k]) =
                        psi(static_cast<Eigen::Index>(j)) * phi(static_cast<Eigen::Index>(k));
                }
            }
            out.setZero();
            for (std::size_t s = 0; s < sectors.size(); ++s) {
                const Eigen::VectorXcd &v = inputs[s];
                if (v.squaredNorm() == 0.0) {
                    continue;
                }
                const Eigen::VectorXcd moved = sectors[s].unitary * v;
                const auto &states = sectors[s].states;
                for (std::size_t i = 0; i < states.size(); ++i) {
                    if (states[i].first < output_cutoff) {
                        out(static_cast<Eigen::Index>(states[i].first), static_cast<Eigen::Index>(states[i].second)) =
                            moved(static_cast<Eigen::Index>(i));
                    }
                }
                if (!splitter) {
                    edge += w * std::norm(moved(moved.size() - 1));
                }
            }
            rho.selfadjointView<Eigen::Lower>().rankUpdate(out, w);
        }
    }
    Eigen::MatrixXcd full = rho.selfadjointView<Eigen::Lower>();
    if (edge > kTailTolerance) {
        throw CutoffError("amplifier working space too small", edge);
    }
    FockDensityMatrix result = FockDensityMatrix::derived(1, output_cutoff, std::move(full));
    const double leak = trace_leak(result);
    if (leak > kLeakTolerance) {
        throw CutoffError("output cutoff " + std::to_string(output_cutoff) + " too small for " + params.describe(), leak);
    }
    return result;
}

double vn_entropy(const FockDensityMatrix &rho) {
    const Eigen::VectorXd p = real_eigenvalues(rho.matrix());
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) < -kNegativeTolerance) {
            throw NumericError("density matrix has a negative eigenvalue below -1e-8");
        }
        if (p(i) > 0.0) {
            s -= p(i) * std::log(p(i));
        }
    }
    return std::max(0.0, s);
}

double relative_entropy(const FockDensityMatrix &rho, const FockDensityMatrix &sigma) {
    if (rho.modes() != sigma.modes() || rho.cutoff() != sigma.cutoff()) {
        throw ValidationError("relative_entropy operands have different shapes");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sigma.matrix());
    if (solver.info() != Eigen::Success) {
        throw NumericError("Hermitian eigen-solver failed");
    }
    const Eigen::VectorXd &mu = solver.eigenvalues();
    const Eigen::MatrixXcd &v = solver.eigenvectors();
    const Eigen::VectorXd weights = (v.adjoint() * rho.matrix() * v).diagonal().real();
    double kernel_mass = 0.0;
    double cross = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (mu(i) <= kSupportThreshold) {
            kernel_mass += std::max(0.0, weights(i));
        }
        if (mu(i) > 0.0) {
            cross -= weights(i) * std::log(mu(i));
        }
    }
    if (kernel_mass > kSupportMassThreshold) {
        return std::numeric_limits<double>::infinity();
    }
    return cross - vn_entropy(rho);
}

Eigen::MatrixXcd liouvillian(const FockDensityMatrix &rho) {
    return Liouvillian(rho.modes(), rho.cutoff()).apply(rho.matrix());
}

FockDensityMatrix liouville_evolve(const FockDensityMatrix &rho, double t, std::size_t steps) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("evolution time must be finite and non-negative");
    }
    if (t == 0.0) {
        return rho;
    }
    if (steps == 0) {
        steps = std::max<std::size_t>(100, static_cast<std::size_t>(std::ceil(200.0 * t)));
    }
    const Liouvillian l(rho.modes(), rho.cutoff());
    const Eigen::MatrixXcd coarse = rk4(l, rho.matrix(), t, steps);
    Eigen::MatrixXcd fine = rk4(l, rho.matrix(), t, 2 * steps);
    const double err = (fine - coarse).cwiseAbs().maxCoeff();
    if (!(err <= 1e-7)) {
        std::ostringstream msg;
        msg << "Liouville integration error estimate " << err << " exceeds 1e-7";
        throw AccuracyError(msg.str());
    }
    FockDensityMatrix out = FockDensityMatrix::derived(rho.modes(), rho.cutoff(), std::move(fine));
    const double leak = trace_leak(out);
    if (leak > kLeakTolerance) {
        throw CutoffError("noise evolution reached the Fock cutoff", leak);
    }
    return out;
}

FockDensityMatrix displace_fock(const FockDensityMatrix &rho, Direction direction, double theta) {
    if (!std::isfinite(theta)) {
        throw DomainError("displacement must be finite");
    }
    const Direction conjugate{direction.mode, direction.which == Quadrature::Q ? Quadrature::P : Quadrature::Q};
    const QuadratureOp op(conjugate, rho.modes(), rho.cutoff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix());
    if (solver.info() != Eigen::Success) {
        throw NumericError("Hermitian eigen-solver failed");
    }
    // exp(-i theta P) shifts Q by +theta; exp(+i theta Q) shifts P by +theta.
    const double sign = direction.which == Quadrature::Q ? -1.0 : 1.0;
    const Eigen::VectorXcd phases =
        (Complex(0.0, sign * theta) * solver.eigenvalues().cast<Complex>()).array().exp().matrix();
    const Eigen::MatrixXcd &v = solver.eigenvectors();
    const Eigen::MatrixXcd u = v * phases.asDiagonal() * v.adjoint();
    Eigen::MatrixXcd moved = u * rho.matrix() * u.adjoint();
    FockDensityMatrix out = FockDensityMatrix::derived(rho.modes(), rho.cutoff(), std::move(moved));
    const double leak = trace_leak(out);
    if (leak > kLeakTolerance) {
        throw CutoffError("displaced state reached the Fock cutoff", leak);
    }
    return out;
}

double trace_leak(const FockDensityMatrix &rho) {
    const Eigen::VectorXd p = rho.matrix().diagonal().real();
    const std::size_t d = rho.cutoff();
    double top = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(p.size()); ++i) {
        const bool edge = rho.modes() == 1 ? i == d - 1 : (i / d == d - 1 || i % d == d - 1);
        if (edge) {
            top += p(static_cast<Eigen::Index>(i));
        }
    }
    return std::max(0.0, 1.0 - p.sum()) + std::max(0.0, top);
}

double trace_distance(const FockDensityMatrix &a, const FockDensityMatrix &b) {
    if (a.modes() != b.modes() || a.cutoff() != b.cutoff()) {
        throw ValidationError("trace_distance operands have different shapes");
    }
    return 0.5 * real_eigenvalues(a.matrix() - b.matrix()).cwiseAbs().sum();
}

Moments moments(const FockDensityMatrix &rho) {
    const std::size_t count = 2 * rho.modes();
    std::vector<Eigen::MatrixXcd> ops;
    for (std::size_t i = 0; i < count; ++i) {
        ops.push_back(QuadratureOp(Direction::from_index(i), rho.modes(), rho.cutoff()).matrix());
    }
    Moments m{Eigen::MatrixXd(count, count), Eigen::VectorXd(count)};
    const Eigen::MatrixXcd &r = rho.matrix();
    std::vector<Eigen::MatrixXcd> weighted;
    for (std::size_t i = 0; i < count; ++i) {
        weighted.push_back(r * ops[i]);
        m.displacement(static_cast<Eigen::Index>(i)) = weighted[i].trace().real();
    }
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i; j < count; ++j) {
            // tr(rho {R_i, R_j}) = tr(rho R_i R_j) + tr(rho R_j R_i)
            const double sym = (weighted[i] * ops[j]).trace().real() + (weighted[j] * ops[i]).trace().real();
            const double v = sym - 2.0 * m.displacement(static_cast<Eigen::Index>(i)) *
                                       m.displacement(static_cast<Eigen::Index>(j));
            m.covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            m.covariance(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return m;
}

}  // namespace qepi::fock
