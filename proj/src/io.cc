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

#include "qepi/io.h"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "qepi/errors.h"

namespace qepi {

namespace {

constexpr char kDumpMagic[] = "FOCKRHO1";

void put_u32(std::string &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void put_f64(std::string &out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
}

std::uint64_t get_le(const std::string &in, std::size_t offset, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + static_cast<std::size_t>(i)])) << (8 * i);
    }
    return v;
}

std::string quote_if_needed(const std::string &field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

nlohmann::json to_json(const GaussianState &state) {
    const Eigen::MatrixXd &gamma = state.covariance();
    std::vector<double> flat;
    for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
        for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
            flat.push_back(gamma(i, j));
        }
    }
    const Eigen::VectorXd &d = state.displacement();
    return nlohmann::json{{"n", state.modes()}, {"gamma", flat}, {"d", std::vector<double>(d.data(), d.data() + d.size())}};
}

GaussianState gaussian_from_json(const nlohmann::json &j) {
    try {
        const auto n = j.at("n").get<std::size_t>();
        const auto flat = j.at("gamma").get<std::vector<double>>();
        const auto d = j.at("d").get<std::vector<double>>();
        const auto dim = static_cast<Eigen::Index>(2 * n);
        if (flat.size() != static_cast<std::size_t>(dim * dim) || d.size() != static_cast<std::size_t>(dim)) {
            throw ValidationError("gaussian state JSON has inconsistent sizes");
        }
        Eigen::MatrixXd gamma(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index k = 0; k < dim; ++k) {
                gamma(i, k) = flat[static_cast<std::size_t>(i * dim + k)];
            }
        }
        return GaussianState(gamma, Eigen::Map<const Eigen::VectorXd>(d.data(), dim));
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed gaussian state JSON: ") + e.what());
    }
}

nlohmann::json to_json(const InequalityReport &r) {
    return nlohmann::json{{"name", r.name},   {"lhs", r.lhs},     {"rhs", r.rhs},      {"slack", r.slack},
                          {"tolerance", r.tolerance}, {"holds", r.holds}, {"inputs", r.inputs}};
}

nlohmann::json to_json(const EqualityReport &r) {
    return nlohmann::json{{"name", r.name},
                          {"lhs", r.lhs},
                          {"rhs", r.rhs},
                          {"deviation", r.deviation},
                          {"relative", r.relative},
                          {"tolerance", r.tolerance},
                          {"passes", r.passes},
                          {"inputs", r.inputs}};
}

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string CsvTable::render() const {
    std::string out;
    auto emit = [&out](const std::vector<std::string> &row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out.push_back(',');
            }
            out += quote_if_needed(row[i]);
        }
        out += "\r\n";
    };
    emit(header);
    for (const auto &row : rows) {
        emit(row);
    }
    return out;
}

CsvTable delta_surface_csv(const DeltaSurface &surface) {
    CsvTable t{{"S_bar", "lambda", "delta"}, {}};
    for (const auto &s : surface.samples) {
        t.rows.push_back({format_number(s.s_bar), format_number(s.lambda), format_number(s.delta)});
    }
    return t;
}

CsvTable moe_bounds_csv(const std::vector<double> &s_bars, std::size_t lambda_points) {
    if (lambda_points < 2) {
        throw DomainError("moe curves need at least two lambda points");
    }
    CsvTable t{{"S_bar", "lambda", "conjectured", "bound"}, {}};
    for (const double s : s_bars) {
        for (std::size_t j = 0; j < lambda_points; ++j) {
            const double l = static_cast<double>(j) / static_cast<double>(lambda_points - 1);
            t.rows.push_back(
                {format_number(s), format_number(l), format_number(moe_conjectured(s, l)), format_number(moe_bound(s, l))});
        }
    }
    return t;
}

CsvTable trajectory_csv(const std::vector<TrajectoryPoint> &points) {
    CsvTable t{{"t", "t_A", "t_B", "t_C", "S_A", "S_B", "S_C", "ratio"}, {}};
    for (const auto &p : points) {
        t.rows.push_back({format_number(p.t), format_number(p.t_a), format_number(p.t_b), format_number(p.t_c),
                          format_number(p.s_a), format_number(p.s_b), format_number(p.s_c), format_number(p.ratio)});
    }
    return t;
}

CsvTable region_csv(const std::vector<CapacityPoint> &points) {
    CsvTable t{{"beta", "R_B", "R_C_conj", "R_C_qepi", "feasible"}, {}};
    for (const auto &p : points) {
        t.rows.push_back({format_number(p.beta), format_number(p.r_b), format_number(p.r_c_conjectured),
                          format_number(p.r_c_qepi), p.feasible ? "true" : "false"});
    }
    return t;
}

void write_file_atomic(const std::string &path, const std::string &content) {
    const std::string tmp = path + ".tmp." + std::to_string(static_cast<long>(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw IoError("write to " + tmp + " failed");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("cannot move " + tmp + " to " + path);
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string encode_fock_dump(const fock::FockDensityMatrix &rho) {
    std::string out(kDumpMagic, 8);
    put_u32(out, static_cast<std::uint32_t>(rho.modes()));
    put_u32(out, static_cast<std::uint32_t>(rho.cutoff()));
    const Eigen::MatrixXcd &m = rho.matrix();
    out.reserve(out.size() + static_cast<std::size_t>(m.size()) * 16);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            put_f64(out, m(i, j).real());
            put_f64(out, m(i, j).imag());
        }
    }
    return out;
}

fock::FockDensityMatrix decode_fock_dump(const std::string &bytes) {
    if (bytes.size() < 16 || bytes.compare(0, 8, kDumpMagic) != 0) {
        throw ValidationError("not a FOCKRHO1 dump");
    }
    const auto modes = static_cast<std::size_t>(get_le(bytes, 8, 4));
    const auto cutoff = static_cast<std::size_t>(get_le(bytes, 12, 4));
    if ((modes != 1 && modes != 2) || cutoff < 1 || cutoff > 4096) {
        throw ValidationError("FOCKRHO1 header out of range");
    }
    const std::size_t dim = modes == 1 ? cutoff : cutoff * cutoff;
    if (bytes.size() != 16 + dim * dim * 16) {
        throw ValidationError("FOCKRHO1 payload size does not match header");
    }
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    std::size_t offset = 16;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double re = std::bit_cast<double>(get_le(bytes, offset, 8));
            const double im = std::bit_cast<double>(get_le(bytes, offset + 8, 8));
            m(i, j) = {re, im};
            offset += 16;
        }
    }
    return fock::FockDensityMatrix::derived(modes, cutoff, std::move(m));
}

}  // namespace qepi
