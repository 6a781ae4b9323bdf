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

#include "qepi/cli.h"

#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qepi/broadcast.h"
#include "qepi/channels.h"
#include "qepi/errors.h"
#include "qepi/fisher.h"
#include "qepi/fock.h"
#include "qepi/inequalities.h"
#include "qepi/io.h"
#include "qepi/symplectic.h"

namespace qepi::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json config_json(const RunConfig &c) {
    json j{{"command", c.command}, {"seed", c.seed}, {"format", c.format}};
    if (c.command == "verify") {
        j["trials"] = c.trials;
        j["modes"] = c.modes;
        j["nu_max"] = c.nu_max;
        j["r_max"] = c.r_max;
    }
    if (c.command == "oracle") {
        j["cutoff"] = c.cutoff;
        j["suite"] = c.suite;
    }
    if (c.lambda) {
        j["lambda"] = *c.lambda;
    }
    if (c.kappa) {
        j["kappa"] = *c.kappa;
    }
    if (c.n_bar) {
        j["n_bar"] = *c.n_bar;
    }
    return j;
}

void write_meta(const std::string &path, const RunConfig &config) {
    json meta{{"timestamp", utc_timestamp()}, {"config", config_json(config)}};
    write_file_atomic(path, meta.dump(2) + "\n");
}

// Report body goes to --out (plus a timestamp sidecar) or to stdout.
void emit(const RunConfig &config, const std::string &body, std::ostream &out) {
    if (config.out.empty()) {
        out << body;
        return;
    }
    write_file_atomic(config.out, body);
    write_meta(config.out + ".meta.json", config);
}

void require_format(const RunConfig &c) {
    if (c.format != "json" && c.format != "csv") {
        throw UsageError("--format must be json or csv");
    }
}

std::vector<MixingParams> verify_family(const RunConfig &c) {
    std::vector<MixingParams> family;
    if (c.lambda) {
        family.push_back(MixingParams::beam_splitter(*c.lambda));
    }
    if (c.kappa) {
        family.push_back(MixingParams::amplifier(*c.kappa));
    }
    if (family.empty()) {
        for (const double l : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            family.push_back(MixingParams::beam_splitter(l));
        }
        for (const double k : {1.1, 1.5, 2.0, 4.0}) {
            family.push_back(MixingParams::amplifier(k));
        }
    }
    return family;
}

struct OracleCase {
    std::string label;
    fock::StateSpec a;
    fock::StateSpec b;
    MixingParams params;
};

std::vector<OracleCase> oracle_cases(const std::string &suite) {
    using namespace fock;
    std::vector<OracleCase> cases;
    if (suite == "vacuum") {
        cases.push_back({"vacuum_vacuum_bs_0.3", Vacuum{}, Vacuum{}, MixingParams::beam_splitter(0.3)});
        cases.push_back({"vacuum_vacuum_bs_0.7", Vacuum{}, Vacuum{}, MixingParams::beam_splitter(0.7)});
        return cases;
    }
    cases.push_back({"thermal1_vacuum_bs_0.5", Thermal{1.0}, Vacuum{}, MixingParams::beam_splitter(0.5)});
    cases.push_back({"thermal2_vacuum_bs_0.5", Thermal{2.0}, Vacuum{}, MixingParams::beam_splitter(0.5)});
    cases.push_back({"coherent_thermal_bs_0.3", Coherent{{1.0, 0.5}}, Thermal{0.5}, MixingParams::beam_splitter(0.3)});
    cases.push_back({"squeezed_vacuum_bs_0.9", SqueezedThermal{0.3, 0.2}, Vacuum{}, MixingParams::beam_splitter(0.9)});
    cases.push_back({"vacuum_vacuum_amp_2", Vacuum{}, Vacuum{}, MixingParams::amplifier(2.0)});
    cases.push_back({"thermal0.3_vacuum_amp_1.5", Thermal{0.3}, Vacuum{}, MixingParams::amplifier(1.5)});
    return cases;
}

// Fock pipeline vs closed form for one case; CutoffError propagates.
json run_oracle_case(const OracleCase &c, std::size_t cutoff) {
    const fock::FockDensityMatrix a = fock::build_state(c.a, cutoff);
    const fock::FockDensityMatrix b = fock::build_state(c.b, cutoff);
    const fock::FockDensityMatrix out = fock::two_mode_mix(a, b, c.params, cutoff);
    const double s_fock = fock::vn_entropy(out);
    const double s_gauss = entropy(mix(*fock::gaussian_equivalent(c.a), *fock::gaussian_equivalent(c.b), c.params));
    const double leak = fock::trace_leak(out);
    const double deviation = std::abs(s_fock - s_gauss);
    const bool passes = deviation <= 1e-5 && leak <= fock::kLeakTolerance;
    return json{{"case", c.label},
                {"A", fock::describe(c.a)},
                {"B", fock::describe(c.b)},
                {"params", c.params.describe()},
                {"S_fock", s_fock},
                {"S_gaussian", s_gauss},
                {"deviation", deviation},
                {"trace_leak", leak},
                {"passes", passes}};
}

std::vector<std::string> summary_rows(const SuiteSummary &s, const char *check, double slack, std::size_t failures) {
    return {check, s.params, std::to_string(s.trials), format_number(slack), std::to_string(failures)};
}

std::size_t count_failures(const SuiteSummary &s, const std::string &name) {
    std::size_t n = 0;
    for (const auto &f : s.failures) {
        if (f.find(": " + name + " ") != std::string::npos) {
            ++n;
        }
    }
    return n;
}

}  // namespace

int cmd_verify(const RunConfig &config, std::ostream &out, std::ostream &err) {
    require_format(config);
    if (config.trials < 1) {
        throw UsageError("--trials must be >= 1");
    }
    if (config.modes < 1 || config.modes > 8) {
        throw UsageError("--modes must lie in [1, 8]");
    }
    if (!(config.nu_max >= 1.0) || !(config.r_max >= 0.0)) {
        throw UsageError("--nu-max must be >= 1 and --r-max >= 0");
    }
    std::vector<MixingParams> family;
    try {
        family = verify_family(config);
    } catch (const DomainError &e) {
        throw UsageError(e.what());
    }

    SuiteConfig suite;
    suite.trials = config.trials;
    suite.seed = config.seed;
    suite.modes = config.modes;
    suite.generator.nu_max = config.nu_max;
    suite.generator.r_max = config.r_max;

    std::size_t violations = 0;
    std::vector<SuiteSummary> summaries;
    for (const MixingParams &p : family) {
        summaries.push_back(random_qepi_suite(suite, p));
        violations += summaries.back().failures.size();
    }

    // Fixed Fisher and oracle gates.
    EqualityReport anchor;
    anchor.name = "fisher_thermal_anchor";
    anchor.lhs = fisher_total_gaussian(GaussianState::thermal(1, 3.0)).total;
    anchor.rhs = 2.0 * std::log(2.0);
    anchor.deviation = std::abs(anchor.lhs - anchor.rhs);
    anchor.tolerance = 1e-6;
    anchor.passes = anchor.deviation <= anchor.tolerance;
    anchor.inputs = {{"state", "thermal(nu=3)"}};

    const std::size_t d = fock::recommended_cutoff(1.0);
    const fock::FockDensityMatrix thermal = fock::build_state(fock::Thermal{1.0}, d);
    const EqualityReport debruijn = debruijn_check(thermal);

    const OracleCase oracle_case{"thermal1_vacuum_bs_0.5", fock::Thermal{1.0}, fock::Vacuum{},
                                 MixingParams::beam_splitter(0.5)};
    const json oracle = run_oracle_case(oracle_case, fock::recommended_cutoff(1.0));

    const bool gates = anchor.passes && debruijn.passes && oracle.at("passes").get<bool>();
    const bool passed = violations == 0 && gates;

    std::string body;
    if (config.format == "json") {
        json report{{"config", config_json(config)}, {"suites", json::array()}};
        for (const auto &s : summaries) {
            report["suites"].push_back(to_json(s));
        }
        report["gates"] = {to_json(anchor), to_json(debruijn), oracle};
        report["violations"] = violations;
        report["passed"] = passed;
        body = report.dump(2) + "\n";
    } else {
        CsvTable t{{"check", "params", "trials", "min_slack", "failures"}, {}};
        for (const auto &s : summaries) {
            t.rows.push_back(summary_rows(s, "qepi", s.min_qepi_slack, count_failures(s, "qepi")));
            t.rows.push_back(summary_rows(s, "linear", s.min_linear_slack, count_failures(s, "linear")));
            t.rows.push_back(summary_rows(s, "stam", s.min_stam_slack, count_failures(s, "stam")));
            t.rows.push_back(summary_rows(s, "weighted_fisher", s.min_weighted_slack, count_failures(s, "weighted_fisher")));
            t.rows.push_back(summary_rows(s, "epni_gap", s.min_epni_gap, count_failures(s, "epni_gap") +
                                                                               count_failures(s, "epni_amplifier_gap")));
        }
        for (const EqualityReport *r : std::array<const EqualityReport *, 2>{&anchor, &debruijn}) {
            t.rows.push_back({r->name, "", "1", format_number(r->tolerance - r->deviation), r->passes ? "0" : "1"});
        }
        t.rows.push_back({"oracle_entropy", oracle_case.params.describe(), "1",
                          format_number(1e-5 - oracle.at("deviation").get<double>()),
                          oracle.at("passes").get<bool>() ? "0" : "1"});
        body = t.render();
    }
    emit(config, body, out);
    if (!passed) {
        err << "verify: " << violations << " inequality violation(s)" << (gates ? "" : ", gate failure") << "\n";
        return kViolation;
    }
    return kSuccess;
}

int cmd_figures(const RunConfig &config, std::ostream &out, std::ostream &) {
    if (config.format != "csv") {
        throw UsageError("figures are written as CSV only");
    }
    const double lambda = config.lambda.value_or(0.8);
    const double n_bar = config.n_bar.value_or(15.0);
    if (!(lambda >= 0.5 && lambda <= 1.0)) {
        throw UsageError("figures: --lambda must lie in [0.5, 1]");
    }
    if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
        throw UsageError("figures: --n-bar must be non-negative");
    }
    if (config.kappa && !(*config.kappa >= 1.0 && *config.kappa <= kMaxAmplifierGain)) {
        throw UsageError("figures: --kappa must lie in [1, 16]");
    }
    const std::filesystem::path dir = config.out.empty() ? std::filesystem::path(".") : std::filesystem::path(config.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }

    const DeltaSurface surface = delta_surface();
    write_file_atomic((dir / "delta_surface.csv").string(), delta_surface_csv(surface).render());
    write_file_atomic((dir / "moe_bounds.csv").string(), moe_bounds_csv({0.5, 1.0, 1.5}, 101).render());
    write_file_atomic((dir / "region.csv").string(), region_csv(capacity_region(lambda, n_bar, 101)).render());
    const std::vector<TrajectoryPoint> trajectory =
        config.kappa ? ratio_trajectory(GaussianState::vacuum(1), GaussianState::vacuum(1),
                                        MixingParams::amplifier(*config.kappa), 200.0)
                     : ratio_trajectory(GaussianState::thermal(1, 3.0), GaussianState::vacuum(1),
                                        MixingParams::beam_splitter(0.5), 200.0);
    write_file_atomic((dir / "trajectory.csv").string(), trajectory_csv(trajectory).render());
    write_meta((dir / "figures.meta.json").string(), config);

    const json summary{
        {"delta_max", surface.refined_max.delta},
        {"delta_argmax", {{"S_bar", surface.refined_max.s_bar}, {"lambda", surface.refined_max.lambda}}},
        {"delta_grid_max", surface.grid_max.delta},
        {"delta_min", surface.min_delta},
        {"region", {{"lambda", lambda}, {"n_bar", n_bar}}},
        {"files", {"delta_surface.csv", "moe_bounds.csv", "region.csv", "trajectory.csv"}}};
    out << summary.dump(2) << "\n";
    return kSuccess;
}

int cmd_oracle(const RunConfig &config, std::ostream &out, std::ostream &err) {
    require_format(config);
    if (config.suite != "default" && config.suite != "vacuum") {
        throw UsageError("--suite must be default or vacuum");
    }
    if (config.cutoff < 1 || config.cutoff > 200) {
        throw UsageError("--cutoff must lie in [1, 200]");
    }
    json cases = json::array();
    bool passed = true;
    for (const OracleCase &c : oracle_cases(config.suite)) {
        try {
            cases.push_back(run_oracle_case(c, config.cutoff));
        } catch (const CutoffError &e) {
            err << "oracle: " << c.label << ": " << e.what() << "\n";
            return kCutoff;
        }
        passed = passed && cases.back().at("passes").get<bool>();
    }
    std::string body;
    if (config.format == "json") {
        body = json{{"config", config_json(config)}, {"cases", cases}, {"passed", passed}}.dump(2) + "\n";
    } else {
        CsvTable t{{"case", "A", "B", "params", "S_fock", "S_gaussian", "deviation", "trace_leak", "passes"}, {}};
        for (const auto &c : cases) {
            t.rows.push_back({c.at("case").get<std::string>(), c.at("A").get<std::string>(),
                              c.at("B").get<std::string>(), c.at("params").get<std::string>(),
                              format_number(c.at("S_fock").get<double>()),
                              format_number(c.at("S_gaussian").get<double>()),
                              format_number(c.at("deviation").get<double>()),
                              format_number(c.at("trace_leak").get<double>()),
                              c.at("passes").get<bool>() ? "true" : "false"});
        }
        body = t.render();
    }
    emit(config, body, out);
    if (!passed) {
        err << "oracle: agreement gate failed\n";
        return kViolation;
    }
    return kSuccess;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Entropy power inequality toolkit for bosonic Gaussian channels", "qepi"};
    app.require_subcommand(1);

    RunConfig config;
    double lambda = 0.0;
    double kappa = 0.0;
    double n_bar = 0.0;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--seed", config.seed, "Master seed");
        sub->add_option("--out", config.out, "Output file (verify, oracle) or directory (figures)");
        sub->add_option("--format", config.format, "json or csv");
    };

    CLI::App *verify = app.add_subcommand("verify", "Randomized inequality suites plus Fisher and oracle gates");
    common(verify);
    verify->add_option("--trials", config.trials, "Random pairs per mixer");
    CLI::Option *v_lambda = verify->add_option("--lambda", lambda, "Beam-splitter transmissivity");
    CLI::Option *v_kappa = verify->add_option("--kappa", kappa, "Amplifier gain");
    verify->add_option("--modes", config.modes, "Modes per random state");
    verify->add_option("--nu-max", config.nu_max, "Largest drawn symplectic eigenvalue");
    verify->add_option("--r-max", config.r_max, "Largest squeezing parameter");

    CLI::App *figures = app.add_subcommand("figures", "Write figure data as CSV");
    common(figures);
    CLI::Option *f_lambda = figures->add_option("--lambda", lambda, "Broadcast transmissivity (default 0.8)");
    CLI::Option *f_kappa = figures->add_option("--kappa", kappa, "Amplifier trajectory instead of beam splitter");
    CLI::Option *f_nbar = figures->add_option("--n-bar", n_bar, "Broadcast mean photon number (default 15)");

    CLI::App *oracle = app.add_subcommand("oracle", "Truncated-Fock versus closed-form agreement suite");
    common(oracle);
    oracle->add_option("--cutoff", config.cutoff, "Fock cutoff per mode");
    oracle->add_option("--suite", config.suite, "default or vacuum");

    std::vector<const char *> argv{"qepi"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (verify->parsed()) {
            config.command = "verify";
            if (v_lambda->count() > 0) {
                config.lambda = lambda;
            }
            if (v_kappa->count() > 0) {
                config.kappa = kappa;
            }
            return cmd_verify(config, out, err);
        }
        if (figures->parsed()) {
            config.command = "figures";
            if (figures->get_option("--format")->count() == 0) {
                config.format = "csv";
            }
            if (f_lambda->count() > 0) {
                config.lambda = lambda;
            }
            if (f_kappa->count() > 0) {
                config.kappa = kappa;
            }
            if (f_nbar->count() > 0) {
                config.n_bar = n_bar;
            }
            return cmd_figures(config, out, err);
        }
        config.command = "oracle";
        return cmd_oracle(config, out, err);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const CutoffError &e) {
        err << "cutoff error: " << e.what() << "\n";
        return kCutoff;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kViolation;
    }
}

int run(int argc, char **argv, std::ostream &out, std::ostream &err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

}  // namespace qepi::cli
