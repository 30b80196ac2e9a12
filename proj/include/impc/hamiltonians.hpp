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

#include <functional>
#include <optional>
#include <vector>

#include "impc/fock.hpp"
#include "impc/pulses.hpp"

namespace impc {

enum class Smoothness { Piecewise, Smooth };

/// H(t) = sum_i a_i(t) O_i over a fixed sector. Terms hold their operator in
/// both sparse and dense form; the dense form feeds the integrators.
class TimeDependentHamiltonian {
  public:
    struct Term {
        std::function<double(double)> coefficient;
        SparseHermitian op;
    };

    TimeDependentHamiltonian(std::size_t dimension, double period, Smoothness smoothness,
                             std::vector<Term> terms, std::vector<double> breakpoints = {});

    std::size_t dimension() const { return dimension_; }
    double period() const { return period_; }
    Smoothness smoothness() const { return smoothness_; }
    /// Times inside (0, P) where the generator may jump.
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    std::size_t term_count() const { return terms_.size(); }

    SparseHermitian operator()(double t) const;
    DenseMatrix dense(double t) const;
    /// Coefficients a_i(t) in term order.
    std::vector<double> coefficients(double t) const;
    const DenseMatrix& term_matrix(std::size_t i) const { return dense_[i]; }

  private:
    std::size_t dimension_;
    double period_;
    Smoothness smoothness_;
    std::vector<Term> terms_;
    std::vector<DenseMatrix> dense_;
    std::vector<double> breakpoints_;
};

/// Slot-windowed pulses; jumps at the slot boundaries.
TimeDependentHamiltonian build_H_BC(const PulseSchedule& schedule, const SectorBasis& basis);
/// Periodic Gaussian extensions.
TimeDependentHamiltonian build_H_diff(const PulseSchedule& schedule, const SectorBasis& basis);
/// Fourier partial sums from `table`.
TimeDependentHamiltonian build_H_tr(const PulseSchedule& schedule, const FourierTable& table,
                                    const SectorBasis& basis);

/// Single-particle description of a number-conserving cylinder Hamiltonian
///
///     H = sum_ab (S + Q)_ab c^dag_a c_b + (sum_ab K_ab c^dag_a c_b) (1 - 2 N_col)
///
/// with S the static ring ramp, Q the quadratic couplings and K the impurity
/// hop, multiplied by the number operator N_col of one whole column. All three
/// matrices are Hermitian over the layout's modes; K must not touch the
/// density column.
struct HamiltonianSpec {
    ModeLayout layout;
    DenseMatrix static_part;
    DenseMatrix quadratic;
    DenseMatrix impurity_hop;
    std::optional<int> density_column;

    explicit HamiltonianSpec(ModeLayout layout);

    /// Throws std::invalid_argument when an invariant is violated.
    void validate(double tol = 1e-12) const;
};

enum SpecPart : unsigned {
    kStaticPart = 1u,
    kQuadraticPart = 2u,
    kImpurityPart = 4u,
    kAllParts = 7u,
};

/// Many-body matrix of the selected parts of `spec` on `basis`. Exact zeros
/// are skipped; every other coefficient becomes a term.
SparseHermitian assemble(const HamiltonianSpec& spec, const SectorBasis& basis,
                         unsigned parts = kAllParts);

/// Cylinder spec on N columns x (2M + 1) ring sites built from `table`:
///   static:    (2 pi / P) r n_{j,r} for every column j = 1..N,
///   quadratic: f_j(m) c^dag_{j,r} c_{j+1,wrap(r+m)} + h.c., j = 1..N-2,
///   impurity:  g(m) c^dag_{N-2,r} c_{N,wrap(r+m)} + h.c., density column N-1.
HamiltonianSpec cylinder_spec(const FourierTable& table, int columns);

/// H_ind on `basis`, which must span columns * (2M + 1) modes.
SparseHermitian build_H_ind(int columns, const FourierTable& table, const SectorBasis& basis);

/// F_{k,r} = e^{i 2 pi k r / (2M+1)} / sqrt(2M+1), rows k and columns r in [-M, M].
DenseMatrix ring_fourier_matrix(int half_width);

enum class Rotation { Forward, Inverse };

/// Re-expresses `spec` in ring-momentum modes: every coefficient matrix X
/// becomes W^dag X W with W the column-block-diagonal F (Forward), or W X W^dag
/// (Inverse). The column number operator is unchanged.
HamiltonianSpec momentum_transform(const HamiltonianSpec& spec, Rotation rotation = Rotation::Forward);

/// N_k = sum_j n_{j,k}, reading ring slots of `layout` as momenta.
SparseHermitian conserved_charge(const SectorBasis& basis, const ModeLayout& layout, int k);

/// Isometry (big x small) taking N-mode occupation patterns onto the k = 0
/// modes of each column. Column order is preserved, so no signs appear.
DenseMatrix k0_embedding(const SectorBasis& small, const SectorBasis& big, const ModeLayout& layout);
StateVector embed_k0(const StateVector& state, const SectorBasis& small, const SectorBasis& big,
                     const ModeLayout& layout);

/// Momentum-space generator of the interaction picture at time t, built by
/// rotating each Fourier component and attaching its phase e^{-i 2 pi m t / P}.
HamiltonianSpec interaction_frame_spec(const FourierTable& table, int columns, double t);

}  // namespace impc
