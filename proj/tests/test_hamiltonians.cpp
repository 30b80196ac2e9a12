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

#include "impc/hamiltonians.hpp"
#include "impc/propagators.hpp"
#include "oracles.hpp"

namespace impc {
namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Circuit demo_circuit() { return Circuit(4, {{Hop{1}, 1.1}, {Impurity{}, -0.7}, {Hop{2}, 0.4}}); }

// One-body cylinder matrix built straight from the coefficient table.
DenseMatrix one_body_cylinder(const FourierTable& table, int columns) {
    const int half = table.truncation();
    const int d = 2 * half + 1;
    auto ord = [&](int j, int r) { return (j - 1) * d + (((r + half) % d + d) % d); };
    DenseMatrix h = DenseMatrix::Zero(columns * d, columns * d);
    for (int j = 1; j <= columns; ++j) {
        for (int r = -half; r <= half; ++r) {
            h(ord(j, r), ord(j, r)) = 2.0 * kPi / table.period() * r;
        }
    }
    for (int m = -half; m <= half; ++m) {
        for (int r = -half; r <= half; ++r) {
            for (int j = 1; j <= columns - 2; ++j) {
                const Complex f = std::conj(table.coefficient(Hop{j}, m));
                h(ord(j, r), ord(j + 1, r + m)) += f;
                h(ord(j + 1, r + m), ord(j, r)) += std::conj(f);
            }
            const Complex g = std::conj(table.coefficient(Impurity{}, m));
            h(ord(columns - 2, r), ord(columns, r + m)) += g;
            h(ord(columns, r + m), ord(columns - 2, r)) += std::conj(g);
        }
    }
    return h;
}

// Second quantization of a one-body matrix with the impurity density factor,
// through Kronecker-product operators.
oracle::Matrix many_body(const DenseMatrix& quadratic, const DenseMatrix& impurity,
                         const std::vector<int>& density) {
    const int n = static_cast<int>(quadratic.rows());
    const auto dim = Eigen::Index{1} << n;
    oracle::Matrix out = oracle::Matrix::Zero(dim, dim);
    oracle::Matrix factor = oracle::Matrix::Identity(dim, dim);
    for (int p : density) {
        factor -= 2.0 * oracle::number(n, p);
    }
    std::vector<oracle::Matrix> up, down;
    for (int a = 0; a < n; ++a) {
        down.push_back(oracle::annihilator(n, a));
        up.push_back(down.back().adjoint());
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (quadratic(a, b) != Complex(0.0)) {
                out += quadratic(a, b) * up[a] * down[b];
            }
            if (impurity(a, b) != Complex(0.0)) {
                const oracle::Matrix hop = impurity(a, b) * up[a] * down[b];
                out += hop * factor;
            }
        }
    }
    return out;
}

TEST(HamiltonianBC, SupportAndSlotIntegral) {
    const PulseSchedule s(demo_circuit(), 3.0, 0.2);
    const SectorBasis basis(4, 2);
    const auto h = build_H_BC(s, basis);
    EXPECT_EQ(h.smoothness(), Smoothness::Piecewise);
    EXPECT_EQ(h.breakpoints(), s.slot_boundaries());
    EXPECT_EQ(h.term_count(), 3u);
    for (double t : {0.2, 0.5, 1.3, 2.7}) {
        const int mu = *s.slot_at(t);
        const DenseMatrix ref = pulse_value(s.pulses()[static_cast<std::size_t>(mu)], t) *
                                operator_matrix(s.op_of(mu), basis).to_dense();
        EXPECT_LE(max_abs(h.dense(t) - ref), 1e-14) << t;
    }
    // Integrating each slot reproduces theta / 2 times the slot operator.
    for (int mu = 0; mu < 3; ++mu) {
        const auto [lo, hi] = s.slot(mu);
        const double area = oracle::integrate(
            [&](double t) { return h.coefficients(t)[static_cast<std::size_t>(mu)]; }, lo, hi * (1 - 1e-15));
        EXPECT_NEAR(area, s.pulses()[static_cast<std::size_t>(mu)].theta / 2.0, 1e-10);
    }
}

TEST(HamiltonianDiff, DifferenceIsPulseTails) {
    const PulseSchedule s(demo_circuit(), 3.0, 0.35);
    const SectorBasis basis(4, 2);
    const auto bc = build_H_BC(s, basis);
    const auto diff = build_H_diff(s, basis);
    EXPECT_EQ(diff.smoothness(), Smoothness::Smooth);
    for (int i = 0; i < 30; ++i) {
        const double t = 3.0 * i / 30.0 + 0.013;
        DenseMatrix ref = DenseMatrix::Zero(6, 6);
        for (const auto& p : s.pulses()) {
            const auto [lo, hi] = s.slot(p.index);
            const double tail = pulse_extended(p, t) - ((t >= lo && t < hi) ? pulse_value(p, t) : 0.0);
            ref += tail * operator_matrix(s.op_of(p.index), basis).to_dense();
        }
        EXPECT_LE(max_abs(diff.dense(t) - bc.dense(t) - ref), 1e-13);
    }
}

TEST(HamiltonianTr, PeriodicAndConstantAtZeroOrder) {
    const PulseSchedule s(demo_circuit(), 3.0, 0.2);
    const SectorBasis basis(4, 2);
    const auto tr = build_H_tr(s, build_fourier_table(s, 9), basis);
    for (double t : {0.0, 0.4, 2.2}) {
        EXPECT_LE(max_abs(tr.dense(t + 3.0) - tr.dense(t)), 1e-12);
    }
    const auto flat = build_H_tr(s, build_fourier_table(s, 0), basis);
    EXPECT_LE(max_abs(flat.dense(0.1) - flat.dense(1.9)), 0.0);
    EXPECT_THROW(build_H_tr(s, build_fourier_table(PulseSchedule(demo_circuit(), 2.0, 0.2), 3), basis),
                 std::invalid_argument);
}

TEST(HamiltonianTr, ConvergesToDiff) {
    const PulseSchedule s(demo_circuit(), 3.0, 0.3);
    const SectorBasis basis(4, 1);
    const auto diff = build_H_diff(s, basis);
    const auto tr = build_H_tr(s, build_fourier_table(s, 30), basis);
    for (double t : {0.1, 1.0, 2.5}) {
        EXPECT_LE(max_abs(tr.dense(t) - diff.dense(t)), 1e-10);
    }
}

TEST(Cylinder, EmptyTableLeavesRampOnly) {
    const FourierTable table(2, 3.0);
    const SectorBasis basis(4 * 5, 2);
    const DenseMatrix h = build_H_ind(4, table, basis).to_dense();
    DenseMatrix off = h;
    off.diagonal().setZero();
    EXPECT_EQ(max_abs(off), 0.0);
    const ModeLayout layout(4, 2);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        double expect = 0.0;
        for (int o = 0; o < layout.mode_count(); ++o) {
            if ((basis.state(i) >> o) & 1) {
                expect += 2.0 * kPi / 3.0 * layout.mode(o).ring;
            }
        }
        const auto ii = static_cast<Eigen::Index>(i);
        EXPECT_NEAR(h(ii, ii).real(), expect, 1e-14);
    }
}

TEST(Cylinder, ZeroOrderReducesToAveragedGenerator) {
    const PulseSchedule s(demo_circuit(), 3.0, 0.2);
    const FourierTable table = build_fourier_table(s, 0);
    for (int n = 0; n <= 4; ++n) {
        const SectorBasis basis(4, n);
        const DenseMatrix ind = build_H_ind(4, table, basis).to_dense();
        const DenseMatrix tr = build_H_tr(s, table, basis).dense(0.0);
        EXPECT_LE(max_abs(ind - tr), 1e-15) << n;
    }
}

TEST(Cylinder, SingleParticleMatchesOneBodyMatrix) {
    const PulseSchedule s(demo_circuit(), 3.0, 0.25);
    const FourierTable table = build_fourier_table(s, 2);
    const SectorBasis basis(20, 1);
    const DenseMatrix ind = build_H_ind(4, table, basis).to_dense();
    // Single-particle states are 1 << i, so the basis order is the mode order.
    EXPECT_LE(max_abs(ind - one_body_cylinder(table, 4)), 1e-15);
}

TEST(Cylinder, TwoParticlesMatchKroneckerOracle) {
    const PulseSchedule s(Circuit(3, {{Hop{1}, 0.9}, {Impurity{}, 1.3}}), 2.0, 0.2);
    const FourierTable table = build_fourier_table(s, 1);
    const HamiltonianSpec spec = cylinder_spec(table, 3);
    DenseMatrix quadratic = spec.static_part + spec.quadratic;
    const std::vector<int> density = {3, 4, 5};
    const oracle::Matrix full = many_body(quadratic, spec.impurity_hop, density);
    const DenseMatrix one = one_body_cylinder(table, 3);
    EXPECT_LE(max_abs(quadratic + spec.impurity_hop - one), 1e-15);
    for (int n = 0; n <= 3; ++n) {
        const SectorBasis basis(9, n);
        const DenseMatrix got = build_H_ind(3, table, basis).to_dense();
        EXPECT_LE(max_abs(got - oracle::restrict_to(full, oracle::sector_states(9, n))), 1e-14) << n;
    }
    EXPECT_THROW(build_H_ind(3, table, SectorBasis(8, 1)), std::invalid_argument);
}

TEST(Momentum, RingTransformUnitary) {
    for (int half : {0, 1, 2, 5}) {
        const DenseMatrix f = ring_fourier_matrix(half);
        EXPECT_LE(max_abs(f.adjoint() * f - DenseMatrix::Identity(f.rows(), f.cols())), 1e-14);
    }
}

TEST(Momentum, RoundTripRestoresSpec) {
    const PulseSchedule s(demo_circuit(), 3.0, 0.25);
    const HamiltonianSpec spec = cylinder_spec(build_fourier_table(s, 2), 4);
    const HamiltonianSpec back = momentum_transform(momentum_transform(spec), Rotation::Inverse);
    EXPECT_LE(max_abs(back.static_part - spec.static_part), 1e-13);
    EXPECT_LE(max_abs(back.quadratic - spec.quadratic), 1e-13);
    EXPECT_LE(max_abs(back.impurity_hop - spec.impurity_hop), 1e-13);
}

TEST(Momentum, ChargesSumToParticleNumber) {
    const ModeLayout layout(4, 2);
    const SectorBasis basis(20, 2);
    DenseMatrix total = DenseMatrix::Zero(190, 190);
    for (int k = -2; k <= 2; ++k) {
        total += conserved_charge(basis, layout, k).to_dense();
    }
    EXPECT_LE(max_abs(total - 2.0 * DenseMatrix::Identity(190, 190)), 0.0);
}

TEST(Momentum, FrameTermsConserveEachCharge) {
    const PulseSchedule s(demo_circuit(), 3.0, 0.25);
    const FourierTable table = build_fourier_table(s, 2);
    const ModeLayout layout(4, 2);
    const SectorBasis basis(20, 2);
    const HamiltonianSpec rotated = momentum_transform(cylinder_spec(table, 4));
    const DenseMatrix frame = assemble(rotated, basis, kQuadraticPart | kImpurityPart).to_dense();
    const DenseMatrix full = assemble(rotated, basis).to_dense();
    double worst_frame = 0.0;
    double worst_full = 0.0;
    for (int k = -2; k <= 2; ++k) {
        const DenseMatrix nk = conserved_charge(basis, layout, k).to_dense();
        worst_frame = std::max(worst_frame, max_abs(frame * nk - nk * frame));
        worst_full = std::max(worst_full, max_abs(full * nk - nk * full));
    }
    EXPECT_LE(worst_frame, 1e-12);
    // The ring ramp is not diagonal in momentum, so the full generator mixes charges.
    EXPECT_GT(worst_full, 1e-3);
}

TEST(Momentum, EmbeddingExamples) {
    const ModeLayout layout(4, 2);
    const SectorBasis small(4, 2);
    const SectorBasis big(20, 2);
    const DenseMatrix e = k0_embedding(small, big, layout);
    EXPECT_LE(max_abs(e.adjoint() * e - DenseMatrix::Identity(6, 6)), 0.0);
    // |1100> on columns 1, 2 lands on ring coordinate 0: ordinals 2 and 7.
    StateVector v = StateVector::Zero(6);
    v(static_cast<Eigen::Index>(small.index_of(0b0011))) = 1.0;
    const StateVector w = embed_k0(v, small, big, layout);
    EXPECT_EQ(w(static_cast<Eigen::Index>(big.index_of((1u << 2) | (1u << 7)))), Complex(1.0));
    EXPECT_NEAR(w.norm(), 1.0, 0.0);
    EXPECT_THROW(k0_embedding(SectorBasis(4, 1), big, layout), std::invalid_argument);
}

TEST(Momentum, FrameIdentityOnZeroSector) {
    const PulseSchedule s(demo_circuit(), 3.0, 0.25);
    const FourierTable table = build_fourier_table(s, 2);
    const ModeLayout layout(4, 2);
    const SectorBasis small(4, 2);
    const SectorBasis big(20, 2);
    const auto tr = build_H_tr(s, table, small);
    const DenseMatrix e = k0_embedding(small, big, layout);
    for (int i = 0; i < 10; ++i) {
        const double t = 3.0 * i / 10.0 + 0.07;
        const DenseMatrix frame = assemble(interaction_frame_spec(table, 4, t), big).to_dense();
        EXPECT_LE(spectral_norm(e.adjoint() * frame * e - tr.dense(t)), 1e-10) << t;
    }
}

TEST(Momentum, SeamBreaksRotatedPropagatorIdentity) {
    // Wrapped couplings at the ring seam carry an extra phase, so the static
    // cylinder propagator differs from the truncated evolution on k = 0.
    const PulseSchedule s(demo_circuit(), 3.0, 0.2);
    const FourierTable table = build_fourier_table(s, 2);
    const ModeLayout layout(4, 2);
    const SectorBasis small(4, 2);
    const SectorBasis big(20, 2);
    const HamiltonianSpec rotated = momentum_transform(cylinder_spec(table, 4));
    const Unitary u = expm_hermitian(assemble(rotated, big), 3.0);
    const DenseMatrix e = k0_embedding(small, big, layout);
    const DenseMatrix block = e.adjoint() * u.matrix() * e;
    const DenseMatrix tr = timeordered(build_H_tr(s, table, small), 0.0, 3.0).unitary.matrix();
    EXPECT_GT(unitary_distance(block, tr).phase_optimized, 1e-3);
}

TEST(HamiltonianSpec, ValidateRejectsBadInput) {
    HamiltonianSpec spec(ModeLayout(3, 0));
    EXPECT_NO_THROW(spec.validate());
    spec.quadratic(0, 1) = 1.0;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec.quadratic(1, 0) = 1.0;
    spec.impurity_hop(0, 0) = 1.0;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec.impurity_hop(0, 0) = 0.0;
    spec.impurity_hop(0, 1) = spec.impurity_hop(1, 0) = 1.0;
    spec.density_column = 2;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    EXPECT_THROW(assemble(spec, SectorBasis(4, 1)), std::invalid_argument);
}

}  // namespace
}  // namespace impc
