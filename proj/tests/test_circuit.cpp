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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "impc/circuit.hpp"
#include "oracles.hpp"

namespace impc {
namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(ParseCircuit, SingleHop) {
    const Circuit c = parse_circuit("n_modes 4\nhop 1 3.14159");
    EXPECT_EQ(c.n_modes(), 4);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.instructions()[0].op, OperatorId{Hop{1}});
    EXPECT_DOUBLE_EQ(c.instructions()[0].theta, 3.14159);
}

TEST(ParseCircuit, OrderPreservedWithComments) {
    const Circuit c = parse_circuit("# demo\n\nn_modes 4   # four sites\nimp 0.5\n  hop 2 1.0\nhop 1 -2e-1\n");
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c.instructions()[0].op, OperatorId{Impurity{}});
    EXPECT_EQ(c.instructions()[1].op, OperatorId{Hop{2}});
    EXPECT_DOUBLE_EQ(c.instructions()[2].theta, -0.2);
}

TEST(ParseCircuit, Errors) {
    auto line_of = [](const char* text) {
        try {
            parse_circuit(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("n_modes 2\nimp 0.5"), 1);
    EXPECT_EQ(line_of("n_modes 4\nhop 3 0.5"), 2);
    EXPECT_EQ(line_of("n_modes 4\nhop 0 0.5"), 2);
    EXPECT_EQ(line_of("n_modes 4\n\nswap 1 0.5"), 3);
    EXPECT_EQ(line_of("n_modes 4\nhop 1"), 2);
    EXPECT_EQ(line_of("n_modes 4\nimp abc"), 2);
    EXPECT_EQ(line_of("n_modes 4\nimp nan"), 2);
    EXPECT_EQ(line_of("imp 0.5\nn_modes 4"), 1);
    EXPECT_EQ(line_of("n_modes 4\nn_modes 5"), 2);
    EXPECT_THROW(parse_circuit("# nothing"), ParseError);
}

TEST(Circuit, Validation) {
    EXPECT_THROW(Circuit(2, {}), std::invalid_argument);
    EXPECT_THROW(Circuit(4, {{Hop{3}, 1.0}}), std::out_of_range);
    EXPECT_THROW(Circuit(4, {{Hop{1}, std::numeric_limits<double>::infinity()}}), std::invalid_argument);
    EXPECT_DOUBLE_EQ(Circuit(4, {{Hop{1}, -2.5}, {Impurity{}, 1.0}}).max_abs_angle(), 2.5);
    EXPECT_EQ(to_string(Hop{2}), "hop2");
    EXPECT_EQ(to_string(Impurity{}), "imp");
}

TEST(OperatorMatrix, HopIsPauliXOnOneParticle) {
    const DenseMatrix h = operator_matrix(Hop{1}, SectorBasis(3, 1)).to_dense();
    // Basis |001>, |010>, |100>: hop 1 couples modes 0 and 1.
    EXPECT_EQ(h(0, 1), Complex(1.0, 0.0));
    EXPECT_EQ(h(1, 0), Complex(1.0, 0.0));
    EXPECT_EQ(h(2, 2), Complex(0.0, 0.0));
}

TEST(OperatorMatrix, ImpurityBareHopWhenMiddleEmpty) {
    const SectorBasis basis(3, 1);
    const DenseMatrix k = operator_matrix(Impurity{}, basis).to_dense();
    const auto a = static_cast<Eigen::Index>(basis.index_of(0b001));
    const auto b = static_cast<Eigen::Index>(basis.index_of(0b100));
    EXPECT_EQ(k(a, b), Complex(1.0, 0.0));
}

TEST(OperatorMatrix, ImpurityMatchesBruteForce) {
    for (int n = 0; n <= 3; ++n) {
        const DenseMatrix got = operator_matrix(Impurity{}, SectorBasis(3, n)).to_dense();
        const DenseMatrix ref = oracle::restrict_to(oracle::impurity(3, 0, 2, {1}, 1.0), oracle::sector_states(3, n));
        EXPECT_EQ(max_abs(got - ref), 0.0);
    }
    for (int n = 0; n <= 6; ++n) {
        const DenseMatrix got = operator_matrix(Impurity{}, SectorBasis(6, n)).to_dense();
        const DenseMatrix ref = oracle::restrict_to(oracle::impurity(6, 3, 5, {4}, 1.0), oracle::sector_states(6, n));
        EXPECT_EQ(max_abs(got - ref), 0.0);
    }
}

TEST(OperatorMatrix, HermitianWithUnitNorm) {
    const SectorBasis basis(5, 2);
    for (const OperatorId& op : {OperatorId{Hop{1}}, OperatorId{Hop{3}}, OperatorId{Impurity{}}}) {
        const DenseMatrix h = operator_matrix(op, basis).to_dense();
        EXPECT_EQ(max_abs(h - h.adjoint()), 0.0);
        Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
        EXPECT_NEAR(eig.eigenvalues().cwiseAbs().maxCoeff(), 1.0, 1e-10);
    }
    EXPECT_THROW(operator_matrix(Hop{4}, basis), std::out_of_range);
}

TEST(CircuitUnitary, EmptyIsIdentity) {
    const Unitary u = circuit_unitary(Circuit(4, {}), SectorBasis(4, 2));
    EXPECT_EQ(max_abs(u.matrix() - DenseMatrix::Identity(6, 6)), 0.0);
}

TEST(CircuitUnitary, SingleHopAgainstPadeExponential) {
    const SectorBasis basis(3, 1);
    const Unitary u = circuit_unitary(Circuit(3, {{Hop{1}, 2.0 * kPi}}), basis);
    const DenseMatrix o = operator_matrix(Hop{1}, basis).to_dense();
    EXPECT_LE(max_abs(u.matrix() - oracle::expm(o, kPi)), 1e-13);
}

TEST(CircuitUnitary, OrderAndAdditivity) {
    const SectorBasis basis(4, 2);
    const Unitary two = circuit_unitary(Circuit(4, {{Hop{1}, 0.4}, {Hop{1}, 0.9}}), basis);
    const Unitary one = circuit_unitary(Circuit(4, {{Hop{1}, 1.3}}), basis);
    EXPECT_LE(max_abs(two.matrix() - one.matrix()), 1e-13);

    // Instruction 0 acts first: U = exp(-i t1 O1 / 2) exp(-i t0 O0 / 2).
    const Unitary u = circuit_unitary(Circuit(4, {{Hop{1}, 0.7}, {Impurity{}, 1.1}}), basis);
    const DenseMatrix ref = oracle::expm(operator_matrix(Impurity{}, basis).to_dense(), 0.55) *
                            oracle::expm(operator_matrix(Hop{1}, basis).to_dense(), 0.35);
    EXPECT_LE(max_abs(u.matrix() - ref), 1e-13);
}

TEST(CircuitUnitary, ReverseWithNegatedAnglesInverts) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-4.0, 4.0);
    std::vector<Instruction> fwd, back;
    for (int i = 0; i < 8; ++i) {
        const OperatorId op = i % 3 == 2 ? OperatorId{Impurity{}} : OperatorId{Hop{1 + i % 3}};
        fwd.push_back({op, angle(rng)});
    }
    for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) {
        back.push_back({it->op, -it->theta});
    }
    const SectorBasis basis(5, 2);
    const DenseMatrix prod = circuit_unitary(Circuit(5, back), basis).matrix() *
                             circuit_unitary(Circuit(5, fwd), basis).matrix();
    EXPECT_LE(max_abs(prod - DenseMatrix::Identity(prod.rows(), prod.cols())), 1e-10);
}

TEST(Cnot, CorrectedSequenceExactLiteralNot) {
    const CnotCheck c = cnot_identity_check();
    EXPECT_LE(c.residual, 1e-12);
    EXPECT_FALSE(c.phase_needed);
    EXPECT_GT(c.literal_residual, 0.1);
}

TEST(QubitGates, Basics) {
    using K = QubitGate::Kind;
    EXPECT_LE((two_qubit_matrix({K::RX, 0, 1, 0.0}) - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff(), 0.0);
    const Eigen::Matrix4cd xx = two_qubit_matrix({K::RXX, 0, 1, kPi / 2});
    EXPECT_LE((xx.adjoint() * xx - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff(), 1e-14);
}

}  // namespace
}  // namespace impc
