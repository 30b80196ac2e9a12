// Copyright 2026 The impc Authors
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

#include "impc/circuit.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <cctype>

#include "impc/propagators.hpp"

namespace impc {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view token, int line, const char* what) {
    T value{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace

std::string to_string(const OperatorId& op) {
    if (const auto* hop = std::get_if<Hop>(&op)) {
        return "hop" + std::to_string(hop->site);
    }
    return "imp";
}

void validate(const OperatorId& op, int n_modes) {
    if (const auto* hop = std::get_if<Hop>(&op)) {
        if (hop->site < 1 || hop->site > n_modes - 2) {
            throw std::out_of_range("hop site " + std::to_string(hop->site) + " outside [1, " +
                                    std::to_string(n_modes - 2) + "]");
        }
    } else if (n_modes < 3) {
        throw std::out_of_range("impurity term needs at least 3 modes");
    }
}

Circuit::Circuit(int n_modes, std::vector<Instruction> instructions)
    : n_modes_(n_modes), instructions_(std::move(instructions)) {
    if (n_modes < 3) {
        throw std::invalid_argument("circuits need n_modes >= 3");
    }
    for (const auto& ins : instructions_) {
        validate(ins.op, n_modes_);
        if (!std::isfinite(ins.theta)) {
            throw std::invalid_argument("instruction angle must be finite");
        }
    }
}

double Circuit::max_abs_angle() const {
    double out = 0.0;
    for (const auto& ins : instructions_) {
        out = std::max(out, std::abs(ins.theta));
    }
    return out;
}

ParseError::ParseError(int line, const std::string& message)
    : std::invalid_argument("line " + std::to_string(line) + ": " + message), line_(line) {}

Circuit parse_circuit(std::string_view text) {
    std::optional<int> n_modes;
    std::vector<Instruction> instructions;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto tokens = split_tokens(line);
        if (tokens.empty()) {
            continue;
        }
        const std::string_view key = tokens[0];
        if (key == "n_modes") {
            if (tokens.size() != 2) {
                throw ParseError(line_no, "usage: n_modes <N>");
            }
            if (n_modes) {
                throw ParseError(line_no, "n_modes given twice");
            }
            n_modes = parse_number<int>(tokens[1], line_no, "an integer mode count");
            if (*n_modes < 3) {
                throw ParseError(line_no, "n_modes must be at least 3");
            }
            continue;
        }
        if (!n_modes) {
            throw ParseError(line_no, "n_modes must precede instructions");
        }
        Instruction ins;
        if (key == "hop") {
            if (tokens.size() != 3) {
                throw ParseError(line_no, "usage: hop <j> <theta>");
            }
            ins.op = Hop{parse_number<int>(tokens[1], line_no, "an integer site")};
            ins.theta = parse_number<double>(tokens[2], line_no, "an angle");
        } else if (key == "imp") {
            if (tokens.size() != 2) {
                throw ParseError(line_no, "usage: imp <theta>");
            }
            ins.op = Impurity{};
            ins.theta = parse_number<double>(tokens[1], line_no, "an angle");
        } else {
            throw ParseError(line_no, "unknown instruction '" + std::string(key) + "'");
        }
        try {
            validate(ins.op, *n_modes);
        } catch (const std::out_of_range& e) {
            throw ParseError(line_no, e.what());
        }
        if (!std::isfinite(ins.theta)) {
            throw ParseError(line_no, "angle must be finite");
        }
        instructions.push_back(ins);
    }
    if (!n_modes) {
        throw ParseError(line_no, "missing n_modes");
    }
    return Circuit(*n_modes, std::move(instructions));
}

SparseHermitian operator_matrix(const OperatorId& op, const SectorBasis& basis) {
    validate(op, basis.mode_count());
    if (const auto* hop = std::get_if<Hop>(&op)) {
        return hopping_term(basis, hop->site - 1, hop->site, 1.0);
    }
    const int n = basis.mode_count();
    const int density[] = {n - 2};
    return impurity_term(basis, n - 3, n - 1, density, 1.0);
}

Unitary circuit_unitary(const Circuit& circuit, const SectorBasis& basis) {
    if (basis.mode_count() != circuit.n_modes()) {
        throw std::invalid_argument("basis mode count does not match circuit");
    }
    DenseMatrix u = DenseMatrix::Identity(static_cast<Eigen::Index>(basis.size()),
                                          static_cast<Eigen::Index>(basis.size()));
    for (const auto& ins : circuit.instructions()) {
        const Unitary gate = expm_hermitian(operator_matrix(ins.op, basis), ins.theta / 2.0);
        u = gate.matrix() * u;
    }
    return Unitary(std::move(u));
}

Eigen::Matrix4cd two_qubit_matrix(const QubitGate& gate) {
    using Mat2 = Eigen::Matrix2cd;
    const Complex i(0.0, 1.0);
    const double half = gate.theta / 2.0;
    const double c = std::cos(half);
    const double s = std::sin(half);
    auto embed = [](const Mat2& g, int qubit) -> Eigen::Matrix4cd {
        const Mat2 id = Mat2::Identity();
        Eigen::Matrix4cd out;
        const Mat2& left = qubit == 0 ? g : id;
        const Mat2& right = qubit == 0 ? id : g;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                out.block<2, 2>(2 * a, 2 * b) = left(a, b) * right;
            }
        }
        return out;
    };
    if (gate.first < 0 || gate.first > 1) {
        throw std::out_of_range("qubit index must be 0 or 1");
    }
    Mat2 g;
    switch (gate.kind) {
        case QubitGate::Kind::RX:
            g << c, -i * s, -i * s, c;
            return embed(g, gate.first);
        case QubitGate::Kind::RY:
            g << c, -s, s, c;
            return embed(g, gate.first);
        case QubitGate::Kind::RZ:
            g << std::exp(-i * half), 0.0, 0.0, std::exp(i * half);
            return embed(g, gate.first);
        case QubitGate::Kind::RXX: {
            if (gate.second == gate.first || gate.second < 0 || gate.second > 1) {
                throw std::invalid_argument("RXX needs two distinct qubits");
            }
            // exp(-i theta/2 X (x) X) = cos I - i sin X (x) X
            Eigen::Matrix4cd out = c * Eigen::Matrix4cd::Identity();
            for (int k = 0; k < 4; ++k) {
                out(k, 3 - k) += -i * s;
            }
            return out;
        }
    }
    throw std::logic_error("unhandled gate kind");
}

CnotCheck cnot_identity_check() {
    using K = QubitGate::Kind;
    constexpr double pi = std::numbers::pi;
    const Complex global = std::exp(Complex(0.0, -pi / 4.0));

    auto sequence = [&](int last_ry_qubit) -> Eigen::Matrix4cd {
        return global * two_qubit_matrix({K::RY, 0, 1, -pi / 2}) *
               two_qubit_matrix({K::RX, 0, 1, -pi / 2}) *
               two_qubit_matrix({K::RX, 1, 0, -pi / 2}) *
               two_qubit_matrix({K::RXX, 0, 1, pi / 2}) *
               two_qubit_matrix({K::RY, last_ry_qubit, 1 - last_ry_qubit, pi / 2});
    };

    Eigen::Matrix4cd cnot = Eigen::Matrix4cd::Zero();
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;

    const Eigen::Matrix4cd u = sequence(0);
    CnotCheck out;
    out.residual = (u - cnot).cwiseAbs().maxCoeff();
    const Complex overlap = (u.adjoint() * cnot).trace();
    out.fitted_phase = std::arg(overlap);
    out.phase_fitted_residual =
        (std::exp(Complex(0.0, out.fitted_phase)) * u - cnot).cwiseAbs().maxCoeff();
    out.phase_needed = out.residual > 1e-12 && out.phase_fitted_residual <= 1e-12;
    out.literal_residual = (sequence(1) - cnot).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace impc
