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

#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "impc/fock.hpp"

namespace impc {

/// Nearest-neighbour hopping c^dag_j c_{j+1} + h.c. between sites j and j+1
/// (1-based, 1 <= j <= N - 2).
struct Hop {
    int site = 1;
    friend auto operator<=>(const Hop&, const Hop&) = default;
};

/// The quartic term (1 - 2 n_{N-1}) (c^dag_{N-2} c_N + h.c.).
struct Impurity {
    friend auto operator<=>(const Impurity&, const Impurity&) = default;
};

using OperatorId = std::variant<Hop, Impurity>;

std::string to_string(const OperatorId& op);

/// Throws std::out_of_range if `op` does not exist on `n_modes` sites.
void validate(const OperatorId& op, int n_modes);

struct Instruction {
    OperatorId op;
    double theta = 0.0;
};

/// Ordered list of generator exponentials exp(-i theta O / 2) on N >= 3 modes.
/// Instruction 0 acts first.
class Circuit {
  public:
    Circuit(int n_modes, std::vector<Instruction> instructions);

    int n_modes() const { return n_modes_; }
    const std::vector<Instruction>& instructions() const { return instructions_; }
    std::size_t size() const { return instructions_.size(); }
    bool empty() const { return instructions_.empty(); }

    /// Largest |theta| over the instructions (0 for an empty circuit).
    double max_abs_angle() const;

  private:
    int n_modes_;
    std::vector<Instruction> instructions_;
};

class ParseError : public std::invalid_argument {
  public:
    ParseError(int line, const std::string& message);
    int line() const { return line_; }

  private:
    int line_;
};

/// Parses the line-oriented circuit format:
///
///     # comment
///     n_modes 4
///     hop 1 3.14159
///     imp 0.5
Circuit parse_circuit(std::string_view text);

SparseHermitian operator_matrix(const OperatorId& op, const SectorBasis& basis);

/// prod_mu exp(-i theta_mu O_mu / 2), last instruction leftmost.
Unitary circuit_unitary(const Circuit& circuit, const SectorBasis& basis);

// Qubit-level gates, used only to check the CNOT decomposition.

struct QubitGate {
    enum class Kind { RX, RY, RZ, RXX };
    Kind kind;
    int first = 0;   // 0 or 1; qubit 0 is the most significant bit
    int second = 1;  // RXX only
    double theta = 0.0;
};

/// 4x4 matrix of a gate on a two-qubit register.
Eigen::Matrix4cd two_qubit_matrix(const QubitGate& gate);

struct CnotCheck {
    double residual = 0.0;            // max-norm distance to CNOT, no phase freedom
    double phase_fitted_residual = 0.0;
    double fitted_phase = 0.0;
    bool phase_needed = false;        // residual > 1e-12 but phase-fitted residual is not
    double literal_residual = 0.0;    // as printed: final R_Y on the target qubit
};

/// Checks CNOT = e^{-i pi/4} R_Y^1(-pi/2) R_X^1(-pi/2) R_X^2(-pi/2) R_XX^{12}(pi/2)
/// R_Y^1(pi/2), control on qubit 1. The frequently quoted variant with the last
/// rotation on qubit 2 is not a CNOT; its residual is reported separately.
CnotCheck cnot_identity_check();

}  // namespace impc
