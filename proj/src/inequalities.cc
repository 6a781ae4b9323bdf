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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qepi/errors.h"
#include "qepi/fisher.h"
#include "qepi/random.h"

namespace qepi {

namespace {

constexpr double kGolden = 0.6180339887498949;

double checked_entropy(double s, const char *name) {
    if (!std::isfinite(s) || s < -1e-12) {
        throw DomainError(std::string(name) + " must be a finite non-negative entropy");
    }
    return std::max(0.0, s);
}

void check_moe_domain(double s_bar, double lambda) {
    if (!(s_bar >= 0.0) || !std::isfinite(s_bar)) {
        throw DomainError("input entropy must be finite and non-negative");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("transmissivity must lie in [0, 1]");
    }
}

template <typename F>
double golden_maximize(F f, double lo, double hi, double &best_value) {
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > 1e-10 * std::max(1.0, std::abs(hi))) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = f(x1);
        }
    }
    const double x = 0.5 * (lo + hi);
    best_value = f(x);
    return x;
}

double schedule_step(double t, const TrajectorySchedule &schedule, double previous) {
    if (t < schedule.switch_time) {
        return schedule.initial_step;
    }
    return std::min(schedule.max_step, previous * schedule.growth);
}

// du/dt for u = ln(1 + t_X).
double log_time_rate(const Eigen::MatrixXd &gamma, std::size_t modes, double u) {
    const double t = std::expm1(u);
    const Eigen::MatrixXd noisy = gamma + t * Eigen::MatrixXd::Identity(gamma.rows(), gamma.cols());
    return std::exp(covariance_entropy(noisy) / static_cast<double>(modes) - u);
}

double rk4_log_time(const Eigen::MatrixXd &gamma, std::size_t modes, double u, double dt) {
    const double k1 = log_time_rate(gamma, modes, u);
    const double k2 = log_time_rate(gamma, modes, u + 0.5 * dt * k1);
    const double k3 = log_time_rate(gamma, modes, u + 0.5 * dt * k2);
    const double k4 = log_time_rate(gamma, modes, u + dt * k3);
    return u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// The rate behaves like t ln t near t = 0 for pure inputs, so the first step
// is taken on a graded mesh h 2^-20, h 2^-19, ..., h.
double advance_log_time(const Eigen::MatrixXd &gamma, std::size_t modes, double u, double t, double dt) {
    if (t > 0.0) {
        return rk4_log_time(gamma, modes, u, dt);
    }
    double reached = 0.0;
    for (int m = 20; m >= 0; --m) {
        const double edge = std::ldexp(dt, -m);
        u = rk4_log_time(gamma, modes, u, edge - reached);
        reached = edge;
    }
    return u;
}

TrajectoryPoint trajectory_point(const GaussianState &a, const GaussianState &b, const Eigen::MatrixXd &gamma_c,
                                 const MixingParams &params, double t, double u_a, double u_b) {
    const std::size_t n = a.modes();
    const double dn = static_cast<double>(n);
    TrajectoryPoint p;
    p.t = t;
    p.t_a = std::expm1(u_a);
    p.t_b = std::expm1(u_b);
    p.t_c = params.lambda_a() * p.t_a + params.lambda_b() * p.t_b;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    p.s_a = covariance_entropy(a.covariance() + p.t_a * id);
    p.s_b = covariance_entropy(b.covariance() + p.t_b * id);
    p.s_c = covariance_entropy(gamma_c + p.t_c * id);
    // ratio = (lambda_A e^{S_A/n} + lambda_B e^{S_B/n}) / e^{S_C/n}, scaled to avoid overflow
    p.ratio = params.lambda_a() * std::exp((p.s_a - p.s_c) / dn) + params.lambda_b() * std::exp((p.s_b - p.s_c) / dn);
    return p;
}

void bump_histogram(const std::vector<double> &edges, std::vector<std::size_t> &bins, double value) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), value);
    ++bins[static_cast<std::size_t>(it - edges.begin())];
}

}  // namespace

InequalityReport qepi_check(double s_a, double s_b, double s_c, std::size_t modes, const MixingParams &params,
                            double tolerance) {
    if (modes < 1) {
        throw DomainError("mode count must be positive");
    }
    s_a = checked_entropy(s_a, "S_A");
    s_b = checked_entropy(s_b, "S_B");
    s_c = checked_entropy(s_c, "S_C");
    const double n = static_cast<double>(modes);
    const double lhs = std::exp(s_c / n);
    const double rhs = params.lambda_a() * std::exp(s_a / n) + params.lambda_b() * std::exp(s_b / n);
    return make_inequality("qepi", lhs, rhs, tolerance,
                           {{"S_A", s_a}, {"S_B", s_b}, {"S_C", s_c}, {"n", modes}, {"params", params.describe()}});
}

InequalityReport linear_check(double s_a, double s_b, double s_c, std::size_t modes, const MixingParams &params,
                              double tolerance) {
    if (modes < 1) {
        throw DomainError("mode count must be positive");
    }
    s_a = checked_entropy(s_a, "S_A");
    s_b = checked_entropy(s_b, "S_B");
    s_c = checked_entropy(s_c, "S_C");
    const double la = params.lambda_a();
    const double lb = params.lambda_b();
    double rhs = 0.0;
    if (params.kind() == MixerKind::beam_splitter) {
        rhs = la * s_a + lb * s_b;
    } else {
        const double total = la + lb;  // 2 kappa - 1
        rhs = (la * s_a + lb * s_b) / total + static_cast<double>(modes) * std::log(total);
    }
    return make_inequality("linear", s_c, rhs, tolerance,
                           {{"S_A", s_a}, {"S_B", s_b}, {"S_C", s_c}, {"n", modes}, {"params", params.describe()}});
}

double epni_gap_bound() {
    return std::exp(-1.0) - 0.5;
}

InequalityReport epni_gap(double n_a, double n_b, double n_c, double lambda, double tolerance) {
    for (const double n : {n_a, n_b, n_c}) {
        if (!(n >= 0.0) || !std::isfinite(n)) {
            throw DomainError("photon numbers must be finite and non-negative");
        }
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("transmissivity must lie in [0, 1]");
    }
    const double gap = n_c - lambda * n_a - (1.0 - lambda) * n_b;
    return make_inequality(
        "epni_gap", gap, epni_gap_bound(), tolerance,
        {{"N_A", n_a}, {"N_B", n_b}, {"N_C", n_c}, {"lambda", lambda}, {"conjecture_holds", gap >= -tolerance * std::max(1.0, n_c)}});
}

InequalityReport epni_amplifier_gap(double n_a, double n_b, double n_c, double kappa, double tolerance) {
    for (const double n : {n_a, n_b, n_c}) {
        if (!(n >= 0.0) || !std::isfinite(n)) {
            throw DomainError("photon numbers must be finite and non-negative");
        }
    }
    if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
        throw DomainError("gain must be >= 1");
    }
    const double gap = n_c - kappa * n_a - (kappa - 1.0) * (n_b + 1.0);
    return make_inequality(
        "epni_amplifier_gap", gap, (2.0 * kappa - 1.0) * epni_gap_bound(), tolerance,
        {{"N_A", n_a}, {"N_B", n_b}, {"N_C", n_c}, {"kappa", kappa}, {"conjecture_holds", gap >= -tolerance * std::max(1.0, n_c)}});
}

double moe_bound(double s_bar, double lambda) {
    check_moe_domain(s_bar, lambda);
    return std::log1p(lambda * std::expm1(s_bar));
}

double moe_conjectured(double s_bar, double lambda) {
    check_moe_domain(s_bar, lambda);
    return g(lambda * g_inv(s_bar));
}

double moe_delta(double s_bar, double lambda) {
    return moe_conjectured(s_bar, lambda) - moe_bound(s_bar, lambda);
}

DeltaSurface delta_surface(const DeltaSurfaceConfig &config) {
    if (config.s_points < 2 || config.lambda_points < 2 || !(config.s_min > 0.0) || !(config.s_max > config.s_min)) {
        throw DomainError("invalid delta-surface grid");
    }
    DeltaSurface out;
    std::vector<double> s_grid(config.s_points);
    std::vector<double> l_grid(config.lambda_points);
    const double log_ratio = std::log(config.s_max / config.s_min);
    for (std::size_t k = 0; k < config.s_points; ++k) {
        s_grid[k] = config.s_min * std::exp(log_ratio * static_cast<double>(k) / static_cast<double>(config.s_points - 1));
    }
    s_grid.back() = config.s_max;
    for (std::size_t j = 0; j < config.lambda_points; ++j) {
        l_grid[j] = static_cast<double>(j) / static_cast<double>(config.lambda_points - 1);
    }

    std::size_t best_k = 0;
    std::size_t best_j = 0;
    out.grid_max.delta = -std::numeric_limits<double>::infinity();
    out.min_delta = std::numeric_limits<double>::infinity();
    out.samples.reserve(config.s_points * config.lambda_points);
    for (std::size_t k = 0; k < config.s_points; ++k) {
        for (std::size_t j = 0; j < config.lambda_points; ++j) {
            const DeltaSample sample{s_grid[k], l_grid[j], moe_delta(s_grid[k], l_grid[j])};
            out.samples.push_back(sample);
            out.min_delta = std::min(out.min_delta, sample.delta);
            if (sample.delta > out.grid_max.delta) {
                out.grid_max = sample;
                best_k = k;
                best_j = j;
            }
        }
    }

    const double s_lo = s_grid[best_k == 0 ? 0 : best_k - 1];
    const double s_hi = s_grid[std::min(best_k + 1, config.s_points - 1)];
    const double l_lo = l_grid[best_j == 0 ? 0 : best_j - 1];
    const double l_hi = l_grid[std::min(best_j + 1, config.lambda_points - 1)];
    DeltaSample current = out.grid_max;
    for (std::size_t round = 0; round < config.refine_rounds; ++round) {
        double value = 0.0;
        const double l = golden_maximize([&](double x) { return moe_delta(current.s_bar, x); }, l_lo, l_hi, value);
        if (value > current.delta) {
            current.lambda = l;
            current.delta = value;
        }
        const double s = golden_maximize([&](double x) { return moe_delta(x, current.lambda); }, s_lo, s_hi, value);
        if (value > current.delta) {
            current.s_bar = s;
            current.delta = value;
        }
    }
    out.refined_max = current;
    return out;
}

std::vector<TrajectoryPoint> ratio_trajectory(const GaussianState &a, const GaussianState &b,
                                              const MixingParams &params, double t_max,
                                              const TrajectorySchedule &schedule) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw DomainError("t_max must be positive and finite");
    }
    if (a.modes() != b.modes()) {
        throw ValidationError("trajectory inputs have different mode counts");
    }
    const Eigen::MatrixXd gamma_c = mix(a, b, params).covariance();
    const std::size_t n = a.modes();

    std::vector<TrajectoryPoint> points;
    points.push_back(trajectory_point(a, b, gamma_c, params, 0.0, 0.0, 0.0));
    double t = 0.0;
    double dt = schedule.initial_step;
    double coarse_a = 0.0;
    double coarse_b = 0.0;
    double fine_a = 0.0;
    double fine_b = 0.0;
    double worst = 0.0;
    while (t < t_max) {
        dt = schedule_step(t, schedule, dt);
        const double step = std::min(dt, t_max - t);
        coarse_a = advance_log_time(a.covariance(), n, coarse_a, t, step);
        coarse_b = advance_log_time(b.covariance(), n, coarse_b, t, step);
        for (int half = 0; half < 2; ++half) {
            const double start = t + 0.5 * step * half;
            fine_a = advance_log_time(a.covariance(), n, fine_a, start, 0.5 * step);
            fine_b = advance_log_time(b.covariance(), n, fine_b, start, 0.5 * step);
        }
        t = step < dt ? t_max : t + step;
        const TrajectoryPoint fine = trajectory_point(a, b, gamma_c, params, t, fine_a, fine_b);
        const TrajectoryPoint coarse = trajectory_point(a, b, gamma_c, params, t, coarse_a, coarse_b);
        worst = std::max(worst, std::abs(fine.ratio - coarse.ratio));
        points.push_back(fine);
    }
    if (!(worst <= 1e-7)) {
        std::ostringstream msg;
        msg << "trajectory integration error estimate " << worst << " exceeds 1e-7";
        throw AccuracyError(msg.str());
    }
    return points;
}

AsymptoticReport asymptotic_check(const GaussianState &state, const std::vector<double> &t_grid, double upper_slack) {
    AsymptoticReport report;
    report.upper_slack = upper_slack;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(state.covariance(), Eigen::EigenvaluesOnly);
    report.lambda0 = solver.eigenvalues().maxCoeff();
    const double n = static_cast<double>(state.modes());
    const double e = std::exp(1.0);
    for (const double t : t_grid) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw DomainError("asymptotic grid times must be finite and non-negative");
        }
        AsymptoticPoint p;
        p.t = t;
        p.power = std::exp(entropy(add_noise(state, t)) / n);
        p.upper = e * (report.lambda0 + t) / 2.0;
        p.upper_holds = p.power <= p.upper + upper_slack;
        if (t > 0.0) {
            p.deviation = std::abs(p.power / (e * t / 2.0) - 1.0);
            p.allowed = (report.lambda0 + 2.0) / t;
            p.deviation_holds = p.deviation <= p.allowed;
        }
        report.holds = report.holds && p.upper_holds && p.deviation_holds;
        report.points.push_back(p);
    }
    return report;
}

nlohmann::json to_json(const SuiteSummary &s) {
    return nlohmann::json{{"trials", s.trials},
                          {"params", s.params},
                          {"min_qepi_slack", s.min_qepi_slack},
                          {"min_linear_slack", s.min_linear_slack},
                          {"min_stam_slack", s.min_stam_slack},
                          {"min_weighted_slack", s.min_weighted_slack},
                          {"min_epni_gap", s.min_epni_gap},
                          {"epni_negative", s.epni_negative},
                          {"stam_skipped", s.stam_skipped},
                          {"epni_histogram_edges", s.histogram_edges},
                          {"epni_histogram", s.epni_histogram},
                          {"failures", s.failures}};
}

SuiteSummary random_qepi_suite(const SuiteConfig &config, const MixingParams &params) {
    if (config.trials < 1) {
        throw DomainError("trials must be >= 1");
    }
    const bool splitter = params.kind() == MixerKind::beam_splitter;
    SuiteSummary s;
    s.trials = config.trials;
    s.params = params.describe();
    const double inf = std::numeric_limits<double>::infinity();
    s.min_qepi_slack = s.min_linear_slack = s.min_stam_slack = s.min_weighted_slack = s.min_epni_gap = inf;
    s.histogram_edges = {-0.14, -0.1, -0.05, -0.01, -1e-12, 1e-12, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0};
    s.epni_histogram.assign(s.histogram_edges.size() + 1, 0);

    auto fail = [&s](std::size_t trial, const InequalityReport &r) {
        std::ostringstream msg;
        msg << "trial " << trial << ": " << r.name << " slack " << r.slack;
        s.failures.push_back(msg.str());
    };

    for (std::size_t i = 0; i < config.trials; ++i) {
        const GaussianState a =
            random_gaussian_state(config.modes, derive_seed(config.seed, "suite/A", i), config.generator);
        const GaussianState b =
            random_gaussian_state(config.modes, derive_seed(config.seed, "suite/B", i), config.generator);
        const GaussianState c = mix(a, b, params);
        const double s_a = entropy(a);
        const double s_b = entropy(b);
        const double s_c = entropy(c);

        const InequalityReport q = qepi_check(s_a, s_b, s_c, config.modes, params);
        s.min_qepi_slack = std::min(s.min_qepi_slack, q.slack);
        if (!q.holds) {
            fail(i, q);
        }
        const InequalityReport lin = linear_check(s_a, s_b, s_c, config.modes, params);
        s.min_linear_slack = std::min(s.min_linear_slack, lin.slack);
        if (!lin.holds) {
            fail(i, lin);
        }

        try {
            const double j_a = fisher_total_gaussian(a).total;
            const double j_b = fisher_total_gaussian(b).total;
            const double j_c = fisher_total_gaussian(c).total;
            const InequalityReport stam = stam_check(j_a, j_b, j_c, params);
            s.min_stam_slack = std::min(s.min_stam_slack, stam.slack);
            if (!stam.holds) {
                fail(i, stam);
            }
            const auto [w_a, w_b] = optimal_weights(j_a, j_b, params);
            const InequalityReport opt = weighted_fisher_check(j_a, j_b, j_c, w_a, w_b, params);
            if (opt.holds != stam.holds) {
                s.failures.push_back("trial " + std::to_string(i) + ": optimal-weight check disagrees with stam");
            }
            Rng rng(derive_seed(config.seed, "suite/weights", i));
            const double r_a = rng.uniform();
            const double r_b = rng.uniform();
            const InequalityReport weighted = weighted_fisher_check(j_a, j_b, j_c, r_a, r_b, params);
            s.min_weighted_slack = std::min(s.min_weighted_slack, weighted.slack);
            if (!weighted.holds) {
                fail(i, weighted);
            }
        } catch (const DivergenceError &) {
            ++s.stam_skipped;
        }

        const double n_a = photon_number(s_a, config.modes);
        const double n_b = photon_number(s_b, config.modes);
        const double n_c = photon_number(s_c, config.modes);
        const InequalityReport gap = splitter ? epni_gap(n_a, n_b, n_c, params.lambda_a())
                                              : epni_amplifier_gap(n_a, n_b, n_c, params.lambda_a());
        s.min_epni_gap = std::min(s.min_epni_gap, gap.lhs);
        bump_histogram(s.histogram_edges, s.epni_histogram, gap.lhs);
        if (!gap.inputs.at("conjecture_holds").get<bool>()) {
            ++s.epni_negative;
        }
        if (!gap.holds) {
            fail(i, gap);
        }
    }
    return s;
}

}  // namespace qepi
